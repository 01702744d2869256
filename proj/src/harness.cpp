// Copyright 2026 The bellviol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bellviol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "bellviol/bounds.hpp"
#include "bellviol/io.hpp"
#include "bellviol/seeding.hpp"

namespace bellviol::harness {

using nlohmann::json;

namespace {

constexpr const char *kCsvHeader =
    "trial_id,trial_seed,d,n_sites,lambda,mode,qnl_value,sweeps_used,restarts_used,wall_ms";

// Two-sided 95% normal quantile.
constexpr double kWilsonZ = 1.959963984540054;

template <typename T> T parse_number(const std::string &field) {
    T value{};
    const char *first = field.data();
    const char *last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError("malformed numeric field '" + field + "'");
    }
    return value;
}

json config_to_json(const ExperimentConfig &c) {
    return {{"d", c.d},
            {"n_sites", c.n_sites},
            {"trials", c.trials},
            {"master_seed", c.master_seed},
            {"mode", to_string(c.mode)},
            {"noise_lambdas", c.noise_lambdas},
            {"v_grid", c.v_grid},
            {"seesaw",
             {{"restarts", c.seesaw.restarts},
              {"max_sweeps", c.seesaw.max_sweeps},
              {"tol", c.seesaw.improvement_tol},
              {"seed", c.seesaw.seed}}},
            {"output_path", c.output_path},
            {"workers", c.workers},
            {"record_timing", c.record_timing}};
}

ExperimentConfig config_from_json(const json &j) {
    ExperimentConfig c;
    c.d = j.at("d").get<int>();
    c.n_sites = j.at("n_sites").get<int>();
    c.trials = j.at("trials").get<int>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.noise_lambdas = j.at("noise_lambdas").get<std::vector<double>>();
    c.v_grid = j.at("v_grid").get<std::vector<double>>();
    const json &s = j.at("seesaw");
    c.seesaw.restarts = s.at("restarts").get<int>();
    c.seesaw.max_sweeps = s.at("max_sweeps").get<int>();
    c.seesaw.improvement_tol = s.at("tol").get<double>();
    c.seesaw.seed = s.at("seed").get<std::uint64_t>();
    c.output_path = j.at("output_path").get<std::string>();
    c.workers = j.at("workers").get<int>();
    c.record_timing = j.at("record_timing").get<bool>();
    return c;
}

json summary_to_json(const SurveySummary &s) {
    json rows = json::array();
    for (const auto &r : s.tail_table) {
        rows.push_back({{"v", r.v},
                        {"empirical_fraction", r.empirical_fraction},
                        {"wilson_ci_low", r.wilson_ci_low},
                        {"wilson_ci_high", r.wilson_ci_high},
                        {"theorem_bound_log10", r.theorem_bound_log10},
                        {"bound_clamped", r.bound_clamped},
                        {"bound_applicable", r.bound_applicable}});
    }
    return {{"version", s.version},
            {"settings_measure", s.settings_measure},
            {"value_kind",
             s.config.mode == SurveyMode::optimized ? "lower_bound" : "fixed_settings"},
            {"lambda", s.lambda},
            {"count", s.count},
            {"empirical_mean", s.empirical_mean},
            {"empirical_std", s.empirical_std},
            {"config", config_to_json(s.config)},
            {"tail_table", rows}};
}

SurveySummary summary_from_json(const json &j) {
    SurveySummary s;
    s.version = j.at("version").get<std::string>();
    s.settings_measure = j.at("settings_measure").get<std::string>();
    s.lambda = j.at("lambda").get<double>();
    s.count = j.at("count").get<std::int64_t>();
    s.empirical_mean = j.at("empirical_mean").get<double>();
    s.empirical_std = j.at("empirical_std").get<double>();
    s.config = config_from_json(j.at("config"));
    for (const json &r : j.at("tail_table")) {
        TailRow row;
        row.v = r.at("v").get<double>();
        row.empirical_fraction = r.at("empirical_fraction").get<double>();
        row.wilson_ci_low = r.at("wilson_ci_low").get<double>();
        row.wilson_ci_high = r.at("wilson_ci_high").get<double>();
        row.theorem_bound_log10 = r.at("theorem_bound_log10").get<double>();
        row.bound_clamped = r.at("bound_clamped").get<double>();
        row.bound_applicable = r.at("bound_applicable").get<bool>();
        s.tail_table.push_back(row);
    }
    return s;
}

} // namespace

std::string to_string(SurveyMode mode) {
    return mode == SurveyMode::fixed_settings ? "fixed" : "optimized";
}

SurveyMode parse_mode(const std::string &text) {
    if (text == "fixed" || text == "fixed_settings") {
        return SurveyMode::fixed_settings;
    }
    if (text == "optimized") {
        return SurveyMode::optimized;
    }
    throw ValidationError("unknown survey mode '" + text + "' (expected fixed|optimized)");
}

ReportFormat parse_format(const std::string &text) {
    if (text == "csv") {
        return ReportFormat::csv;
    }
    if (text == "json") {
        return ReportFormat::json;
    }
    throw ValidationError("unknown report format '" + text + "' (expected csv|json)");
}

void ExperimentConfig::validate() const {
    checked_dimension(d, n_sites);
    if (trials < 1) {
        throw ValidationError("trials must be >= 1");
    }
    if (workers < 1) {
        throw ValidationError("workers must be >= 1");
    }
    for (double l : noise_lambdas) {
        NoiseLevel{l};
    }
    seesaw.validate();
}

bool same_config(const ExperimentConfig &a, const ExperimentConfig &b) {
    return config_to_json(a) == config_to_json(b);
}

bool same_summary(const SurveySummary &a, const SurveySummary &b) {
    return same_config(a.config, b.config) && a.lambda == b.lambda && a.count == b.count &&
           a.empirical_mean == b.empirical_mean && a.empirical_std == b.empirical_std &&
           a.tail_table == b.tail_table && a.version == b.version &&
           a.settings_measure == b.settings_measure;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_id) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(trial_id));
}

std::uint64_t survey_settings_seed(std::uint64_t master_seed) {
    return derive_seed(master_seed, "settings");
}

MeasurementSettings<double> survey_settings(const ExperimentConfig &config) {
    return sample_settings<double>(config.d, config.n_sites,
                                   survey_settings_seed(config.master_seed), true);
}

std::vector<TrialRecord> run_survey(const ExperimentConfig &config, double lambda) {
    config.validate();
    const NoiseLevel noise(lambda);
    const bool noisy = lambda > 0.0;
    if (noisy && config.d != 2) {
        throw PreconditionError("noisy surveys are defined for qubits only (d = 2)");
    }
    std::optional<MeasurementSettings<double>> fixed;
    if (config.mode == SurveyMode::fixed_settings) {
        fixed = survey_settings(config);
    }

    std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
    auto run_trial = [&](std::int64_t id) {
        const auto start = std::chrono::steady_clock::now();
        TrialRecord rec;
        rec.trial_id = id;
        rec.trial_seed = trial_seed(config.master_seed, id);
        rec.d = config.d;
        rec.n_sites = config.n_sites;
        rec.lambda = lambda;
        rec.mode = config.mode;
        const PureState<double> state =
            haar_state<double>(config.d, config.n_sites, rec.trial_seed);
        if (fixed) {
            rec.qnl_value = noisy ? qnl_noisy(state, *fixed, noise) : qnl(state, *fixed);
        } else {
            SeesawConfig sc = config.seesaw;
            sc.seed = derive_seed(rec.trial_seed, "seesaw");
            const auto result = seesaw_maximize(
                state, sc, noisy ? std::optional<NoiseLevel>(noise) : std::nullopt);
            rec.qnl_value = result.value;
            rec.sweeps_used = result.sweeps_used;
            rec.restarts_used = result.restarts_used;
        }
        if (config.record_timing) {
            rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        }
        records[static_cast<std::size_t>(id)] = rec;
    };

    const int workers = std::min(config.workers, config.trials);
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::int64_t id = next.fetch_add(1);
            if (id >= config.trials) {
                return;
            }
            try {
                run_trial(id);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(config.trials);
                return;
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n) {
    if (n <= 0 || successes < 0 || successes > n) {
        throw ValidationError("wilson_interval: need 0 <= successes <= n, n > 0");
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        kWilsonZ * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SurveySummary empirical_tail(const std::vector<TrialRecord> &records,
                             const std::vector<double> &v_grid,
                             const ExperimentConfig &config, double lambda) {
    if (records.empty()) {
        throw ValidationError("empirical_tail needs at least one record");
    }
    SurveySummary s;
    s.config = config;
    s.lambda = lambda;
    s.count = static_cast<std::int64_t>(records.size());
    double sum = 0.0;
    for (const auto &r : records) {
        sum += r.qnl_value;
    }
    s.empirical_mean = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (const auto &r : records) {
        ss += (r.qnl_value - s.empirical_mean) * (r.qnl_value - s.empirical_mean);
    }
    s.empirical_std = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1)) : 0.0;

    std::vector<double> grid = v_grid;
    std::sort(grid.begin(), grid.end());
    for (double v : grid) {
        TailRow row;
        row.v = v;
        const auto hits = std::count_if(records.begin(), records.end(),
                                        [v](const TrialRecord &r) { return r.qnl_value > v; });
        row.empirical_fraction = static_cast<double>(hits) / static_cast<double>(s.count);
        std::tie(row.wilson_ci_low, row.wilson_ci_high) = wilson_interval(hits, s.count);
        bounds::BoundQuery q;
        q.d = config.d;
        q.n_sites = config.n_sites;
        q.v = v;
        q.lambda = lambda;
        const double threshold =
            lambda > 0.0 ? 1.0 : bounds::c_dn(config.d, config.n_sites);
        row.bound_applicable = config.n_sites >= 2 && v > threshold;
        if (row.bound_applicable) {
            const bounds::BoundReport rep =
                lambda > 0.0 ? bounds::theorem2_bound(q) : bounds::theorem1_bound(q);
            row.theorem_bound_log10 = rep.tail_bound_log10;
            row.bound_clamped = std::min(1.0, std::pow(10.0, rep.tail_bound_log10));
        }
        s.tail_table.push_back(row);
    }
    s.records = records;
    return s;
}

std::vector<SurveySummary> noise_sweep(const ExperimentConfig &config) {
    if (config.d != 2) {
        throw PreconditionError("noise sweeps are defined for qubits only (d = 2)");
    }
    if (config.noise_lambdas.empty()) {
        throw ValidationError("noise sweep needs at least one lambda");
    }
    std::vector<SurveySummary> out;
    for (double lambda : config.noise_lambdas) {
        const auto records = run_survey(config, lambda);
        out.push_back(empirical_tail(records, config.v_grid, config, lambda));
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) {
        throw ValidationError("cannot format double");
    }
    return std::string(buf, ptr);
}

std::string records_to_csv(const std::vector<TrialRecord> &records) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &r : records) {
        out += std::to_string(r.trial_id) + "," + std::to_string(r.trial_seed) + "," +
               std::to_string(r.d) + "," + std::to_string(r.n_sites) + "," +
               format_double(r.lambda) + "," + to_string(r.mode) + "," +
               format_double(r.qnl_value) + "," + std::to_string(r.sweeps_used) + "," +
               std::to_string(r.restarts_used) + "," + std::to_string(r.wall_ms) + "\n";
    }
    return out;
}

std::vector<TrialRecord> records_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ValidationError("records file does not start with the expected header");
    }
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 10) {
            throw ValidationError("records row has " + std::to_string(f.size()) +
                                  " fields, expected 10");
        }
        TrialRecord r;
        r.trial_id = parse_number<std::int64_t>(f[0]);
        r.trial_seed = parse_number<std::uint64_t>(f[1]);
        r.d = parse_number<int>(f[2]);
        r.n_sites = parse_number<int>(f[3]);
        r.lambda = parse_number<double>(f[4]);
        r.mode = parse_mode(f[5]);
        r.qnl_value = parse_number<double>(f[6]);
        r.sweeps_used = parse_number<int>(f[7]);
        r.restarts_used = parse_number<int>(f[8]);
        r.wall_ms = parse_number<std::int64_t>(f[9]);
        records.push_back(r);
    }
    return records;
}

std::string summaries_to_json(const std::vector<SurveySummary> &summaries) {
    json arr = json::array();
    for (const auto &s : summaries) {
        arr.push_back(summary_to_json(s));
    }
    return json{{"version", kVersion}, {"summaries", arr}}.dump(2) + "\n";
}

std::vector<SurveySummary> summaries_from_json(const std::string &text) {
    std::vector<SurveySummary> out;
    try {
        const json doc = json::parse(text);
        for (const json &s : doc.at("summaries")) {
            out.push_back(summary_from_json(s));
        }
    } catch (const json::exception &e) {
        throw ValidationError(std::string("malformed summary document: ") + e.what());
    }
    return out;
}

void emit_report(const std::vector<SurveySummary> &summaries, ReportFormat format,
                 const std::filesystem::path &path) {
    if (format == ReportFormat::json) {
        io::write_text_file(path, summaries_to_json(summaries));
        return;
    }
    std::vector<TrialRecord> all;
    for (const auto &s : summaries) {
        all.insert(all.end(), s.records.begin(), s.records.end());
    }
    io::write_text_file(path, records_to_csv(all));
}

void emit_report(const SurveySummary &summary, ReportFormat format,
                 const std::filesystem::path &path) {
    emit_report(std::vector<SurveySummary>{summary}, format, path);
}

std::vector<TrialRecord> read_records(const std::filesystem::path &path) {
    return records_from_csv(io::read_text_file(path));
}

std::vector<SurveySummary> read_summaries(const std::filesystem::path &path) {
    return summaries_from_json(io::read_text_file(path));
}

} // namespace bellviol::harness
