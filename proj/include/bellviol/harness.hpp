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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bellviol/optimize.hpp"

namespace bellviol::harness {

inline constexpr const char *kVersion = "bellviol 0.1.0";

/// Sampling measure for random settings; echoed in every report.
inline constexpr const char *kSettingsMeasure =
    "msign of Gaussian Hermitian matrices; optimized values are see-saw lower bounds";

enum class SurveyMode { fixed_settings, optimized };

std::string to_string(SurveyMode mode);
SurveyMode parse_mode(const std::string &text);

struct ExperimentConfig {
    int d = 2;
    int n_sites = 2;
    int trials = 1;
    std::uint64_t master_seed = 0;
    SurveyMode mode = SurveyMode::optimized;
    std::vector<double> noise_lambdas;
    std::vector<double> v_grid;
    /// restarts/max_sweeps/tol apply to every trial; the seed is re-derived
    /// per trial from the trial seed.
    SeesawConfig seesaw;
    std::string output_path;
    int workers = 1;
    /// When false, wall_ms is written as 0 so that reports are pure
    /// functions of the configuration.
    bool record_timing = false;

    void validate() const;
};

struct TrialRecord {
    std::int64_t trial_id = 0;
    std::uint64_t trial_seed = 0;
    int d = 2;
    int n_sites = 2;
    double lambda = 0.0;
    SurveyMode mode = SurveyMode::optimized;
    double qnl_value = 0.0;
    int sweeps_used = 0;
    int restarts_used = 0;
    std::int64_t wall_ms = 0;

    bool operator==(const TrialRecord &) const = default;
};

struct TailRow {
    double v = 0.0;
    double empirical_fraction = 0.0;
    double wilson_ci_low = 0.0;
    double wilson_ci_high = 0.0;
    /// log10 of the Theorem 1 (lambda = 0) or Theorem 2 bound with the
    /// minimizing delta; 0 when the theorem does not apply at this v.
    double theorem_bound_log10 = 0.0;
    double bound_clamped = 1.0;
    bool bound_applicable = false;

    bool operator==(const TailRow &) const = default;
};

struct SurveySummary {
    ExperimentConfig config;
    double lambda = 0.0;
    std::int64_t count = 0;
    double empirical_mean = 0.0;
    double empirical_std = 0.0;
    std::vector<TailRow> tail_table;
    std::string version = kVersion;
    std::string settings_measure = kSettingsMeasure;
    std::vector<TrialRecord> records;
};

bool same_config(const ExperimentConfig &a, const ExperimentConfig &b);
bool same_summary(const SurveySummary &a, const SurveySummary &b);

/// derive_seed(master_seed, trial_id).
std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_id);
/// Seed of the fixed settings shared by all trials of a fixed-settings survey.
std::uint64_t survey_settings_seed(std::uint64_t master_seed);

/// The non-dull settings used by fixed-settings surveys.
MeasurementSettings<double> survey_settings(const ExperimentConfig &config);

/// One record per trial, sorted by trial_id, independent of worker count.
std::vector<TrialRecord> run_survey(const ExperimentConfig &config, double lambda = 0.0);

/// 95% Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n);

/// Empirical tail P(qnl > v) for every v in the grid, with the matching
/// theorem bound. The table is sorted by v.
SurveySummary empirical_tail(const std::vector<TrialRecord> &records,
                             const std::vector<double> &v_grid,
                             const ExperimentConfig &config, double lambda = 0.0);

/// One survey and summary per entry of config.noise_lambdas (qubits only).
std::vector<SurveySummary> noise_sweep(const ExperimentConfig &config);

enum class ReportFormat { csv, json };
ReportFormat parse_format(const std::string &text);

std::string records_to_csv(const std::vector<TrialRecord> &records);
std::vector<TrialRecord> records_from_csv(const std::string &text);
std::string summaries_to_json(const std::vector<SurveySummary> &summaries);
std::vector<SurveySummary> summaries_from_json(const std::string &text);

/// csv: the trial records. json: summary (config echo, statistics, tail
/// table). IoError carries the path on failure.
void emit_report(const SurveySummary &summary, ReportFormat format,
                 const std::filesystem::path &path);
void emit_report(const std::vector<SurveySummary> &summaries, ReportFormat format,
                 const std::filesystem::path &path);

std::vector<TrialRecord> read_records(const std::filesystem::path &path);
std::vector<SurveySummary> read_summaries(const std::filesystem::path &path);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

} // namespace bellviol::harness
