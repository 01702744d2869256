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

// Command-line front end: Monte Carlo surveys, noise sweeps, bound
// evaluation, net parameters, the GHZ reference, and single-state
// optimization. Every subcommand accepts --config FILE with `key = value`
// lines mirroring its flags; flags given on the command line win.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "bellviol/bounds.hpp"
#include "bellviol/harness.hpp"
#include "bellviol/io.hpp"

namespace {

using nlohmann::json;
using namespace bellviol;

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) {
            throw ValidationError("bad number '" + item + "' in list");
        }
        out.push_back(v);
    }
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Expands `--config FILE` into `--key value` tokens placed right after the
/// subcommand, ahead of the explicit flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 1; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") {
            continue;
        }
        const std::string text = io::read_text_file(args[i + 1]);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        std::vector<std::string> injected;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line.substr(0, line.find('#')));
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("config line without '=': " + line);
            }
            injected.push_back("--" + trim(line.substr(0, eq)));
            const std::string value = trim(line.substr(eq + 1));
            if (value != "true") {
                injected.push_back(value);
            }
        }
        // args[0] is the program, args[1] the subcommand.
        const std::size_t at = std::min<std::size_t>(2, args.size());
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(),
                    injected.end());
        break;
    }
    return args;
}

struct SurveyFlags {
    int d = 2;
    int n = 2;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string mode = "optimized";
    int restarts = 20;
    int max_sweeps = 500;
    double tol = 1e-10;
    std::string v_grid;
    std::string out;
    int workers = 1;
    std::string format = "csv";
    std::string lambdas;
    bool timing = false;
};

void add_survey_flags(CLI::App *cmd, SurveyFlags &f) {
    cmd->add_option("--d", f.d, "local dimension")->required();
    cmd->add_option("--n", f.n, "number of sites")->required();
    cmd->add_option("--trials", f.trials, "number of Haar-random states")->required();
    cmd->add_option("--seed", f.seed, "master seed")->required();
    cmd->add_option("--mode", f.mode, "fixed|optimized")
        ->check(CLI::IsMember({"fixed", "optimized"}));
    cmd->add_option("--restarts", f.restarts, "see-saw restarts per trial");
    cmd->add_option("--max-sweeps", f.max_sweeps, "see-saw sweep limit");
    cmd->add_option("--tol", f.tol, "see-saw improvement tolerance");
    cmd->add_option("--v-grid", f.v_grid, "comma-separated thresholds v")->required();
    cmd->add_option("--out", f.out, "output path")->required();
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--timing", f.timing, "record per-trial wall time (breaks byte identity)");
}

harness::ExperimentConfig to_config(const SurveyFlags &f) {
    harness::ExperimentConfig c;
    c.d = f.d;
    c.n_sites = f.n;
    c.trials = f.trials;
    c.master_seed = f.seed;
    c.mode = harness::parse_mode(f.mode);
    c.seesaw.restarts = f.restarts;
    c.seesaw.max_sweeps = f.max_sweeps;
    c.seesaw.improvement_tol = f.tol;
    c.v_grid = parse_list(f.v_grid);
    c.output_path = f.out;
    c.workers = f.workers;
    c.record_timing = f.timing;
    c.noise_lambdas = parse_list(f.lambdas);
    c.validate();
    return c;
}

/// csv: records at --out and the summary beside it as <out>.summary.json.
/// json: the summary at --out.
void write_outputs(const std::vector<harness::SurveySummary> &summaries,
                   const SurveyFlags &f) {
    const auto format = harness::parse_format(f.format);
    harness::emit_report(summaries, format, f.out);
    if (format == harness::ReportFormat::csv) {
        harness::emit_report(summaries, harness::ReportFormat::json, f.out + ".summary.json");
    }
    for (const auto &s : summaries) {
        std::cout << "lambda=" << harness::format_double(s.lambda)
                  << " trials=" << s.count
                  << " mean=" << harness::format_double(s.empirical_mean)
                  << " std=" << harness::format_double(s.empirical_std) << "\n";
    }
}

json report_json(const bounds::BoundReport &r) {
    return {{"c_dn", r.c_dn},
            {"chi", r.chi},
            {"epsilon", r.epsilon},
            {"net_size_log10", r.net_size_log10},
            {"lipschitz_state", r.lipschitz_state},
            {"lipschitz_settings_factor", r.lipschitz_settings_factor},
            {"lipschitz_noisy", r.lipschitz_noisy},
            {"tail_bound_log10", r.tail_bound_log10},
            {"tail_bound", r.tail_bound},
            {"tail_bound_is_log10", r.tail_bound_is_log10},
            {"delta_used", r.delta_used}};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Numerical laboratory for full-correlation Bell inequality violations "
                 "of random multipartite pure states"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", bellviol::harness::kVersion);

    SurveyFlags survey_flags;
    auto *survey = app.add_subcommand("survey", "Monte Carlo survey of Q_NL over Haar states");
    add_survey_flags(survey, survey_flags);

    SurveyFlags sweep_flags;
    auto *sweep = app.add_subcommand("noise-sweep", "survey repeated per noise level (qubits)");
    add_survey_flags(sweep, sweep_flags);
    sweep->add_option("--lambdas", sweep_flags.lambdas, "comma-separated noise levels")
        ->required();

    int b_theorem = 1;
    int b_d = 2;
    int b_n = 2;
    double b_v = 0.0;
    std::string b_delta = "auto";
    double b_lambda = 0.0;
    auto *bounds_cmd = app.add_subcommand("bounds", "evaluate a theorem bound as JSON");
    bounds_cmd->add_option("--theorem", b_theorem, "1 or 2")->check(CLI::IsMember({1, 2}));
    bounds_cmd->add_option("--d", b_d, "local dimension")->required();
    bounds_cmd->add_option("--n", b_n, "number of sites")->required();
    bounds_cmd->add_option("--v", b_v, "violation threshold")->required();
    bounds_cmd->add_option("--delta", b_delta, "net resolution or 'auto'");
    bounds_cmd->add_option("--lambda", b_lambda, "noise level (theorem 2)");

    int net_d = 2;
    int net_n = 2;
    double net_delta = 0.0;
    auto *net_cmd = app.add_subcommand("net", "epsilon-net parameters as JSON");
    net_cmd->add_option("--d", net_d, "local dimension")->required();
    net_cmd->add_option("--n", net_n, "number of sites")->required();
    net_cmd->add_option("--delta", net_delta, "tolerance delta")->required();

    int ghz_n = 3;
    double ghz_alpha = 1.0 / std::sqrt(2.0);
    double ghz_beta = 1.0 / std::sqrt(2.0);
    auto *ghz_cmd = app.add_subcommand("ghz", "GHZ reference value and cross-check");
    ghz_cmd->add_option("--n", ghz_n, "number of qubits")->required();
    ghz_cmd->add_option("--alpha", ghz_alpha, "coefficient of |0...0>");
    ghz_cmd->add_option("--beta", ghz_beta, "coefficient of |1...1>");

    std::string opt_state;
    std::string opt_settings_out;
    SeesawConfig opt_cfg;
    double opt_lambda = 0.0;
    auto *opt_cmd = app.add_subcommand("optimize", "see-saw maximization for one state");
    opt_cmd->add_option("--state-file", opt_state, "state document")->required();
    opt_cmd->add_option("--restarts", opt_cfg.restarts, "see-saw restarts");
    opt_cmd->add_option("--max-sweeps", opt_cfg.max_sweeps, "see-saw sweep limit");
    opt_cmd->add_option("--tol", opt_cfg.improvement_tol, "see-saw improvement tolerance");
    opt_cmd->add_option("--seed", opt_cfg.seed, "restart seed");
    opt_cmd->add_option("--lambda", opt_lambda, "noise level (qubits)");
    opt_cmd->add_option("--settings-out", opt_settings_out, "write the argmax settings here");

    try {
        std::vector<std::string> raw(argv, argv + argc);
        std::vector<std::string> args = expand_config(raw);
        args.erase(args.begin());
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*survey) {
            const auto config = to_config(survey_flags);
            const auto records = harness::run_survey(config);
            write_outputs({harness::empirical_tail(records, config.v_grid, config)},
                          survey_flags);
        } else if (*sweep) {
            const auto config = to_config(sweep_flags);
            write_outputs(harness::noise_sweep(config), sweep_flags);
        } else if (*bounds_cmd) {
            bounds::BoundQuery q;
            q.d = b_d;
            q.n_sites = b_n;
            q.v = b_v;
            q.lambda = b_lambda;
            if (b_delta != "auto") {
                q.delta = std::stod(b_delta);
            }
            const auto rep = b_theorem == 1 ? bounds::theorem1_bound(q) : bounds::theorem2_bound(q);
            std::cout << report_json(rep).dump(2) << "\n";
        } else if (*net_cmd) {
            const auto p = bounds::net_params(net_d, net_n, net_delta);
            std::cout << json{{"epsilon", p.epsilon},
                              {"m", p.m},
                              {"net_size_log10", p.net_size_log10},
                              {"net_bound_log10", p.net_bound_log10}}
                             .dump(2)
                      << "\n";
        } else if (*ghz_cmd) {
            const auto ref = mermin_reference<double>(ghz_n);
            const auto state = ghz_state<double>(ghz_alpha, ghz_beta, ghz_n);
            std::cout << json{{"n_sites", ghz_n},
                              {"alpha", ghz_alpha},
                              {"beta", ghz_beta},
                              {"mermin_closed_form", ref.value},
                              {"qnl_pauli_xy", qnl(state, ref.settings)}}
                             .dump(2)
                      << "\n";
        } else if (*opt_cmd) {
            const auto state = io::read_state(opt_state);
            std::optional<NoiseLevel> noise;
            if (opt_lambda > 0.0) {
                noise = NoiseLevel(opt_lambda);
            }
            const auto result = seesaw_maximize(state, opt_cfg, noise);
            if (!opt_settings_out.empty()) {
                io::write_settings(opt_settings_out, result.settings);
            }
            std::cout << json{{"value", result.value},
                              {"lower_bound", true},
                              {"sweeps_used", result.sweeps_used},
                              {"restarts_used", result.restarts_used},
                              {"best_restart", result.best_restart}}
                             .dump(2)
                      << "\n";
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
