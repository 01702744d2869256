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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "bellviol/bounds.hpp"
#include "bellviol/harness.hpp"
#include "oracles.hpp"

using namespace bellviol;
using namespace bellviol::testing;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// ---------------------------------------------------------------------------

Outcome ghz_reference() {
    const auto t0 = Clock::now();
    double worst = 0;
    for (int n = 2; n <= 10; ++n) {
        // binomial form evaluated in long double
        long double closed = 0, binom = 1;
        for (int k = 0; k <= n; ++k) {
            closed += binom * std::abs(std::cos((n - 2 * k) * std::numbers::pi_v<long double> / 4));
            binom = binom * (n - k) / (k + 1);
        }
        closed *= std::pow(2.0L, -0.5L * n);
        const double value = qnl(ghz_state<double>(kInvSqrt2, kInvSqrt2, n),
                                 mermin_reference<double>(n).settings);
        worst = std::max(worst, std::abs(value - static_cast<double>(closed)));
    }
    const auto at = [](int n) {
        return qnl(ghz_state<double>(kInvSqrt2, kInvSqrt2, n), mermin_reference<double>(n).settings);
    };
    const bool named = std::abs(at(3) - 2.0) <= 1e-12 && std::abs(at(5) - 4.0) <= 1e-12 &&
                       std::abs(at(2) - 1.0) <= 1e-12;
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && named && secs < 5.0,
            fmt("max |qnl - closed form| over N=2..10 = %.3g", worst) +
                ", N=3,5,2 exact: " + (named ? "yes" : "no") + fmt(", %.2f s", secs)};
}

Outcome tsirelson_point() {
    const auto t0 = Clock::now();
    SeesawConfig c;
    c.restarts = 20;
    const auto bell = ghz_state<double>(kInvSqrt2, kInvSqrt2, 2);
    const double bell_value = seesaw_maximize(bell, c).value;
    const double bell_err = std::max(std::abs(bell_value - std::sqrt(2.0)),
                                     std::abs(bell_value - horodecki_chsh(bell)));
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const auto psi = haar_state<double>(2, 2, derive_seed(0xACCE55, std::uint64_t(k)));
        c.seed = static_cast<std::uint64_t>(k);
        worst = std::max(worst, std::abs(seesaw_maximize(psi, c).value - horodecki_chsh(psi)));
    }
    const double secs = seconds_since(t0);
    return {bell_err <= 1e-6 && worst <= 1e-6 && secs < 60.0,
            fmt("Bell |value - sqrt2| = %.3g", bell_err) +
                fmt(", max |seesaw - oracle| over 100 states = %.3g", worst) +
                fmt(", %.2f s", secs)};
}

Outcome classical_bound() {
    int exact = 0;
    for (int code = 0; code < 256; ++code) {
        std::vector<std::array<int, 2>> a(4);
        for (int j = 0; j < 4; ++j) {
            a[j] = {(code >> (2 * j)) & 1 ? -1 : 1, (code >> (2 * j + 1)) & 1 ? -1 : 1};
        }
        exact += classical_nl_value(a) == 1.0;
    }
    const double product = seesaw_maximize(basis_state(2, 4, 0), SeesawConfig{}).value;
    return {exact == 256 && std::abs(product - 1.0) <= 1e-9,
            std::to_string(exact) + "/256 assignments give exactly 1" +
                fmt(", optimized |0000> = %.12f", product)};
}

Outcome haar_moments() {
    const auto t0 = Clock::now();
    const int samples = 100000;
    double s4 = 0, s4sq = 0, s22 = 0, s22sq = 0;
    for (int k = 0; k < samples; ++k) {
        const auto psi = haar_state<double>(2, 3, derive_seed(0x4AA2, std::uint64_t(k)));
        const double p0 = std::norm(psi.amplitudes()(0));
        const double p5 = std::norm(psi.amplitudes()(5));
        s4 += p0 * p0;
        s4sq += p0 * p0 * p0 * p0;
        s22 += p0 * p5;
        s22sq += p0 * p5 * p0 * p5;
    }
    const double n = samples;
    const double m4 = s4 / n, m22 = s22 / n;
    const double se4 = std::sqrt((s4sq / n - m4 * m4) / (n - 1));
    const double se22 = std::sqrt((s22sq / n - m22 * m22) / (n - 1));
    const double z4 = (m4 - 1.0 / 36.0) / se4;
    const double z22 = (m22 - 1.0 / 72.0) / se22;
    const double secs = seconds_since(t0);
    return {std::abs(z4) <= 4 && std::abs(z22) <= 4 && secs < 30.0,
            fmt("E|a|^4 = %.6f", m4) + fmt(" (z = %.2f)", z4) + fmt(", E|a|^2|b|^2 = %.6f", m22) +
                fmt(" (z = %.2f)", z22) + fmt(", %.2f s", secs)};
}

Outcome expected_value_bound() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (auto [d, n] : {std::pair{2, 4}, std::pair{2, 6}, std::pair{3, 3}}) {
        harness::ExperimentConfig c;
        c.d = d;
        c.n_sites = n;
        c.trials = 10000;
        c.master_seed = 0xE5 + 100 * d + n;
        c.mode = harness::SurveyMode::fixed_settings;
        c.workers = 8;
        const auto records = harness::run_survey(c);
        double sum = 0, sq = 0;
        for (const auto &r : records) {
            sum += r.qnl_value;
            sq += r.qnl_value * r.qnl_value;
        }
        const double m = sum / c.trials;
        const double se = std::sqrt((sq / c.trials - m * m) / (c.trials - 1));
        const double cdn = std::pow(std::sqrt(2.0 / d), n) + (d - 2.0) / d;
        const double margin = (cdn - m) / se;
        ok = ok && margin >= 3.0;
        detail += "(" + std::to_string(d) + "," + std::to_string(n) + ") mean " + fmt("%.4f", m) +
                  fmt(" < c=%.6f", cdn) + fmt(" by %.1f SE; ", margin);
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 600.0, detail + fmt("%.1f s", secs)};
}

Outcome lipschitz() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0x11F5);
    const int n = 4;
    const double state_c = std::pow(2.0, 0.5 * (n + 1));
    const double settings_c = n * std::pow(2.0, n);
    double worst_state = -1e9, worst_settings = -1e9, worst_noisy = -1e9;
    for (int k = 0; k < 1000; ++k) {
        const auto psi = haar_state<double>(2, n, derive_seed(0x11F5, std::uint64_t(k)));
        std::uniform_real_distribution<double> eps(1e-4, 0.5);
        const auto near = perturbed(psi, eps(rng), rng);
        const double dpsi = (psi.amplitudes() - near.amplitudes()).norm();
        const auto q = random_settings(2, n, rng);
        worst_state = std::max(worst_state,
                               std::abs(qnl(psi, q) - qnl(near, q)) - state_c * dpsi);
        for (double l : {0.3, 0.7}) {
            const double nc = std::sqrt(2.0) * std::pow(l + (1 - l) * std::sqrt(2.0), n);
            worst_noisy = std::max(worst_noisy, std::abs(qnl_noisy(psi, q, NoiseLevel(l)) -
                                                         qnl_noisy(near, q, NoiseLevel(l))) -
                                                    nc * dpsi);
        }
        // Settings perturbation: random pair or a small rotation of one site.
        auto q2 = q;
        const int site = k % n;
        if (k % 2 == 0) {
            q2.set_pair(site, random_pair(2, rng));
        } else {
            const Mat h = random_hermitian<double>(2, rng);
            q2.set_pair(site, DichotomicPair<double>(msign(Mat(q[site].a0() + 0.05 * h)),
                                                     q[site].a1()));
        }
        worst_settings = std::max(worst_settings, std::abs(qnl(psi, q) - qnl(psi, q2)) -
                                                      settings_c * settings_distance(q, q2));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_state <= 1e-9 && worst_settings <= 1e-9 && worst_noisy <= 1e-9;
    return {ok && secs < 120.0, fmt("max excess over bound: state %.3g", worst_state) +
                                    fmt(", settings %.3g", worst_settings) +
                                    fmt(", noisy %.3g", worst_noisy) + fmt(", %.2f s", secs)};
}

Outcome noise_equivalence() {
    std::mt19937_64 rng(0x7015E);
    const int n = 4;
    double worst_density = 0, worst_factor = 0;
    for (int k = 0; k < 50; ++k) {
        const auto psi = haar_state<double>(2, n, derive_seed(0x7015E, std::uint64_t(k)));
        const auto q = random_settings(2, n, rng);
        std::vector<DichotomicPair<double>> traceless;
        for (int j = 0; j < n; ++j) {
            traceless.emplace_back(random_involution(2, 1, rng), random_involution(2, 1, rng));
        }
        const MeasurementSettings<double> qt(std::move(traceless));
        for (double l : {0.1, 0.5, 0.9}) {
            const NoiseLevel noise(l);
            worst_density = std::max(worst_density, std::abs(qnl_noisy(psi, q, noise) -
                                                             qnl_density(noisy_density(psi, noise), q)));
            worst_factor = std::max(worst_factor, std::abs(qnl_noisy(psi, qt, noise) -
                                                           std::pow(1 - l, n) * qnl(psi, qt)));
        }
    }
    return {worst_density <= 1e-10 && worst_factor <= 1e-10,
            fmt("max |dual - density| = %.3g", worst_density) +
                fmt(", max |traceless - (1-l)^N qnl| = %.3g", worst_factor)};
}

Outcome bound_evaluators() {
    using namespace bounds;
    const long double pi = std::numbers::pi_v<long double>;
    std::vector<std::pair<std::string, double>> errs;
    errs.emplace_back("c_dn(3,4)", rel(c_dn(3, 4), 7.0 / 9.0));
    const double h = (1 + std::sqrt(2.0)) / 2;
    errs.emplace_back("chi(0.5)", rel(chi(0.5), h * h));
    const auto p = net_params(2, 2, 0.5);
    errs.emplace_back("epsilon", rel(p.epsilon, 1.0 / 128.0));
    errs.emplace_back("M", p.m == 127 ? 0.0 : 1.0);
    errs.emplace_back("net log10", rel(p.net_size_log10, 16 * std::log10(129.0)));
    const long double ln1 = std::log(2.0L) + 16 * std::log(130.0L) - 0.25L / (9 * pi * pi * pi);
    BoundQuery q{2, 2, 2.0, 0.5, 0.0};
    const double t1 = theorem1_bound(q).tail_bound_log10;
    errs.emplace_back("theorem1 log10", rel(t1, static_cast<double>(ln1 / std::log(10.0L))));
    double worst = 0;
    bool ok = true;
    for (const auto &e : errs) {
        ok = ok && e.second <= 1e-9;
        worst = std::max(worst, e.second);
    }
    double worst_t2 = 0;
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + i % 7;
        const double v = 1.2 + 0.37 * i;
        const double delta = (v - 1.0) * (0.1 + 0.8 * ((i * 7) % 100) / 100.0);
        worst_t2 = std::max(worst_t2, rel(theorem2_log_bound(n, v, delta, 0.0),
                                          theorem1_log_bound(2, n, v, delta)));
    }
    return {ok && worst_t2 <= 1e-12 && std::abs(t1 - 34.12) < 5e-3,
            fmt("max rel err of named values = %.3g", worst) + fmt(" (theorem1 log10 = %.4f)", t1) +
                fmt(", theorem2(0) vs theorem1 max rel = %.3g over 100 points", worst_t2)};
}

harness::ExperimentConfig concentration_config(int n) {
    harness::ExperimentConfig c;
    c.d = 2;
    c.n_sites = n;
    c.trials = 2000;
    c.master_seed = 0xC0C0 + static_cast<std::uint64_t>(n);
    c.mode = harness::SurveyMode::optimized;
    c.workers = 8;
    c.v_grid = {0.5, 1.0, 1.05, 1.1, 1.2, 1.3, 1.4, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 8.0, 12.0};
    return c;
}

std::string survey4_csv;  // shared with the determinism criterion

Outcome tail_consistency() {
    const auto t0 = Clock::now();
    bool ok = true;
    double stds[2] = {0, 0};
    std::string detail;
    int idx = 0;
    for (int n : {4, 8}) {
        const auto c = concentration_config(n);
        const auto t = Clock::now();
        const auto records = harness::run_survey(c);
        const auto s = harness::empirical_tail(records, c.v_grid, c);
        if (n == 4) {
            survey4_csv = harness::records_to_csv(records);
        }
        int violations = 0;
        for (const auto &row : s.tail_table) {
            const double bound = row.bound_applicable
                                     ? std::min(1.0, std::pow(10.0, row.theorem_bound_log10))
                                     : 1.0;
            violations += row.empirical_fraction > bound;
        }
        ok = ok && violations == 0;
        stds[idx++] = s.empirical_std;
        detail += "N=" + std::to_string(n) + fmt(": mean %.4f", s.empirical_mean) +
                  fmt(" std %.4f", s.empirical_std) + ", " + std::to_string(violations) +
                  " tail violations" + fmt(" (%.0f s); ", seconds_since(t));
    }
    const double secs = seconds_since(t0);
    ok = ok && stds[1] < stds[0] && secs < 1800.0;
    return {ok, detail + (stds[1] < stds[0] ? "std(8) < std(4)" : "std(8) >= std(4)") +
                    fmt(", %.0f s total", secs)};
}

Outcome determinism() {
    bool ok = true;
    std::string detail;
    auto check = [&](harness::ExperimentConfig c, const std::string &label,
                     std::string reference) {
        if (reference.empty()) {
            c.workers = 8;
            reference = harness::records_to_csv(harness::run_survey(c));
        }
        for (int w : {1, 3}) {
            c.workers = w;
            const bool same = harness::records_to_csv(harness::run_survey(c)) == reference;
            ok = ok && same;
            detail += label + " workers " + std::to_string(w) + " vs 8: " +
                      (same ? "identical" : "DIFFERENT") + "; ";
        }
    };
    auto opt = concentration_config(4);
    check(opt, "optimized N=4 x2000", survey4_csv);
    harness::ExperimentConfig fixed;
    fixed.d = 3;
    fixed.n_sites = 3;
    fixed.trials = 3000;
    fixed.master_seed = 99;
    fixed.mode = harness::SurveyMode::fixed_settings;
    check(fixed, "fixed d=3 N=3 x3000", "");

    auto noisy = concentration_config(5);
    noisy.trials = 100;
    noisy.seesaw.restarts = 4;
    noisy.noise_lambdas = {0.0, 0.4};
    std::string ref;
    noisy.workers = 8;
    for (const auto &s : harness::noise_sweep(noisy)) {
        ref += harness::records_to_csv(s.records);
    }
    noisy.workers = 1;
    std::string again;
    for (const auto &s : harness::noise_sweep(noisy)) {
        again += harness::records_to_csv(s.records);
    }
    ok = ok && ref == again;
    detail += std::string("noise sweep workers 1 vs 8: ") + (ref == again ? "identical" : "DIFFERENT");
    return {ok, detail};
}

} // namespace

int main(int argc, char **argv) {
    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "ghz_reference", ghz_reference},
        {2, "tsirelson_point", tsirelson_point},
        {3, "classical_bound", classical_bound},
        {4, "haar_moments", haar_moments},
        {5, "expected_value_bound", expected_value_bound},
        {6, "lipschitz", lipschitz},
        {7, "noise_equivalence", noise_equivalence},
        {8, "bound_evaluators", bound_evaluators},
        {9, "tail_consistency_and_concentration", tail_consistency},
        {10, "determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::stoi(argv[i]));
    }
    int failures = 0;
    for (const auto &c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
