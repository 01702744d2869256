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

#include <chrono>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bellviol/optimize.hpp"
#include "oracles.hpp"

using namespace bellviol;
using namespace bellviol::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double trace_pair(const DichotomicPair<double> &p, const EffectiveOperators<double> &g) {
    return (p.a0() * g.g0).trace().real() + (p.a1() * g.g1).trace().real();
}

// Largest CHSH/2 over Alice angles on a grid, Bob optimal in closed form.
// The state alpha|00> + beta|11> has planar correlations diag(2ab, 1) in (x, z).
double planar_grid_chsh(double alpha, double beta, int steps) {
    const double c = 2 * alpha * beta;
    const double pi = std::acos(-1.0);
    double best = 0;
    for (int i = 0; i < steps; ++i) {
        const double t0 = pi * i / steps;
        for (int k = 0; k < steps; ++k) {
            const double t1 = pi * k / steps;
            const double px = c * (std::sin(t0) + std::sin(t1));
            const double pz = std::cos(t0) + std::cos(t1);
            const double mx = c * (std::sin(t0) - std::sin(t1));
            const double mz = std::cos(t0) - std::cos(t1);
            best = std::max(best, 0.5 * (std::hypot(px, pz) + std::hypot(mx, mz)));
        }
    }
    return best;
}

} // namespace

TEST(EffectiveOperators, HermitianAndReconstruction) {
    std::mt19937_64 rng(21);
    for (int d : {2, 3}) {
        const int n = d == 2 ? 4 : 3;
        const auto psi = haar_state<double>(d, n, 5 + d);
        auto q = random_settings(d, n, rng);
        std::vector<int> signs;
        std::uniform_int_distribution<int> coin(0, 1);
        for (int x = 0; x < (1 << n); ++x) {
            signs.push_back(coin(rng) ? 1 : -1);
        }
        const SignFunction s(n, signs);
        for (int site = 0; site < n; ++site) {
            const auto g = effective_operators(psi, q, site, s);
            EXPECT_TRUE(is_hermitian(g.g0));
            EXPECT_TRUE(is_hermitian(g.g1));
            for (int k = 0; k < 100 / n; ++k) {
                const auto pair = random_pair(d, rng);
                q.set_pair(site, pair);
                EXPECT_NEAR(trace_pair(pair, g), linear_value(psi, q, s), 1e-10);
            }
        }
    }
}

TEST(EffectiveOperators, NoisyReconstruction) {
    std::mt19937_64 rng(22);
    const int n = 5;
    const auto psi = haar_state<double>(2, n, 17);
    auto q = random_settings(2, n, rng);
    const NoiseLevel noise(0.3);
    const auto s = SignFunction::signs_of(n, expectation_table(psi, dual_channel_table(q, noise)));
    for (int site = 0; site < n; ++site) {
        const auto g = effective_operators(psi, q, site, s, noise);
        for (int k = 0; k < 10; ++k) {
            const auto pair = random_pair(2, rng);
            q.set_pair(site, pair);
            const auto table = expectation_table(psi, dual_channel_table(q, noise));
            EXPECT_NEAR(trace_pair(pair, g), s.as_vector<double>().dot(table), 1e-10);
        }
    }
}

TEST(EffectiveOperators, ProductStateHandComputation) {
    const auto q = uniform_settings(2, pauli_z<double>(), pauli_z<double>());
    const auto g = effective_operators(basis_state(2, 2, 0), q, 0, SignFunction::constant(2));
    Mat g0 = Mat::Zero(2, 2);
    g0(0, 0) = 1;
    EXPECT_LT((g.g0 - g0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(g.g1.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(effective_operators(basis_state(2, 2, 0), q, 2, SignFunction::constant(2)),
                 ValidationError);
}

TEST(Msign, Examples) {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 3;
    h(1, 1) = -1;
    const Mat a = msign(h);
    EXPECT_LT((a - pauli_z<double>()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR((a * h).trace().real(), 4.0, 1e-12);
    EXPECT_NEAR(trace_norm(h), 4.0, 1e-12);

    EXPECT_TRUE(msign(Mat(Mat::Zero(3, 3))) == Mat::Identity(3, 3));

    const Mat x = 0.2 * pauli_x<double>();
    EXPECT_LT((msign(x) - pauli_x<double>()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR((msign(x) * x).trace().real(), 0.4, 1e-12);

    Mat bad = Mat::Zero(2, 2);
    bad(0, 1) = 1;
    EXPECT_THROW(msign(bad), ValidationError);
}

TEST(Msign, InvolutionAndOptimality) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 200; ++k) {
        const int d = 2 + k % 4;
        const Mat h = random_hermitian<double>(d, rng);
        const Mat a = msign(h);
        EXPECT_TRUE(is_hermitian_involution(a));
        EXPECT_LT((a * a - Mat::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
        const double best = (a * h).trace().real();
        EXPECT_NEAR(best, trace_norm(h), 1e-10);
        const Mat other = random_involution(d, k % (d + 1), rng);
        EXPECT_LE((other * h).trace().real(), best + 1e-10);
    }
}

TEST(Horodecki, Examples) {
    EXPECT_NEAR(horodecki_chsh(ghz_state<double>(kInvSqrt2, kInvSqrt2, 2)), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(horodecki_chsh(basis_state(2, 2, 0)), 1.0, 1e-12);
    for (double alpha : {0.3, 0.6, 0.9}) {
        const double beta = std::sqrt(1 - alpha * alpha);
        const double closed = std::sqrt(1 + 4 * alpha * alpha * beta * beta);
        EXPECT_NEAR(horodecki_chsh(ghz_state<double>(alpha, beta, 2)), closed, 1e-12);
        const double grid = planar_grid_chsh(alpha, beta, 720);
        EXPECT_LE(grid, closed + 1e-12);
        EXPECT_NEAR(grid, closed, 1e-5);
    }
    EXPECT_THROW(horodecki_chsh(basis_state(2, 3, 0)), ValidationError);
}

TEST(Mermin, ClosedFormValues) {
    EXPECT_NEAR(mermin_reference<double>(3).value, 2.0, 1e-12);
    EXPECT_NEAR(mermin_reference<double>(5).value, 4.0, 1e-12);
    EXPECT_NEAR(mermin_reference<double>(2).value, 1.0, 1e-12);
    for (int n = 3; n <= 11; n += 2) {
        EXPECT_NEAR(mermin_closed_form(n), std::pow(2.0, 0.5 * (n - 1)), 1e-9);
    }
    for (int n = 2; n <= 10; ++n) {
        const auto ref = mermin_reference<double>(n);
        EXPECT_NEAR(ref.value, qnl(ghz_state<double>(kInvSqrt2, kInvSqrt2, n), ref.settings), 1e-12)
            << n;
        EXPECT_NEAR(ref.value, ghz_pauli_xy_enumerated(n), 1e-12);
    }
    EXPECT_THROW(mermin_reference<double>(1), ValidationError);
}

TEST(Seesaw, ConfigValidation) {
    SeesawConfig c;
    EXPECT_EQ(c.restarts, 20);
    EXPECT_EQ(c.max_sweeps, 500);
    EXPECT_EQ(c.improvement_tol, 1e-10);
    c.restarts = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = SeesawConfig{};
    c.improvement_tol = 0;
    EXPECT_THROW(seesaw_maximize(basis_state(2, 2, 0), c), ValidationError);
}

TEST(Seesaw, ReferenceStates) {
    SeesawConfig c;
    c.seed = 5;
    const auto bell = seesaw_maximize(ghz_state<double>(kInvSqrt2, kInvSqrt2, 2), c);
    EXPECT_NEAR(bell.value, std::sqrt(2.0), 1e-6);
    const auto ghz3 = seesaw_maximize(ghz_state<double>(kInvSqrt2, kInvSqrt2, 3), c);
    EXPECT_NEAR(ghz3.value, 2.0, 1e-6);
    const auto product = seesaw_maximize(basis_state(2, 4, 0), c);
    EXPECT_NEAR(product.value, 1.0, 1e-9);
    EXPECT_EQ(bell.restarts_used, 20);
    EXPECT_EQ(bell.trajectories.size(), 20u);
}

TEST(Seesaw, ProductStateRandomSearch) {
    // No settings should push a product state above 1.
    std::mt19937_64 rng(24);
    const auto psi = basis_state(2, 4, 5);
    double best = 0;
    for (int k = 0; k < 20000; ++k) {
        best = std::max(best, qnl(psi, random_settings(2, 4, rng)));
    }
    EXPECT_LE(best, 1.0 + 1e-9);
}

TEST(Seesaw, MonotoneSoundAndBelowCeiling) {
    for (int n = 2; n <= 6; ++n) {
        for (int d : {2, 3}) {
            if (d == 3 && n > 4) {
                continue;
            }
            const auto psi = haar_state<double>(d, n, 100 * n + d);
            SeesawConfig c;
            c.restarts = 4;
            c.seed = 77;
            const auto r = seesaw_maximize(psi, c);
            for (const auto &t : r.trajectories) {
                for (std::size_t i = 1; i < t.size(); ++i) {
                    EXPECT_GE(t[i], t[i - 1] - 1e-12);
                }
            }
            EXPECT_NEAR(r.value, qnl(psi, r.settings), 1e-9);
            EXPECT_NEAR(r.value, dense_qnl(psi, r.settings), 1e-9);
            EXPECT_LE(r.value, std::pow(2.0, 0.5 * (n - 1)) + 1e-9);
            EXPECT_GE(r.best_restart, 0);
            EXPECT_LT(r.best_restart, 4);
            EXPECT_GE(r.sweeps_used, 4);
        }
    }
}

TEST(Seesaw, MatchesHorodeckiOnRandomQubitPairs) {
    SeesawConfig c;
    for (int k = 0; k < 20; ++k) {
        const auto psi = haar_state<double>(2, 2, 5000 + k);
        c.seed = static_cast<std::uint64_t>(k);
        const double oracle = horodecki_chsh(psi);
        const double value = seesaw_maximize(psi, c).value;
        EXPECT_LE(value, oracle + 1e-6);
        EXPECT_NEAR(value, oracle, 1e-6) << k;
    }
}

TEST(Seesaw, Deterministic) {
    const auto psi = haar_state<double>(2, 4, 9);
    SeesawConfig c;
    c.restarts = 3;
    c.seed = 1234;
    const auto a = seesaw_maximize(psi, c);
    const auto b = seesaw_maximize(psi, c);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.trajectories, b.trajectories);
    EXPECT_EQ(a.sweeps_used, b.sweeps_used);
}

TEST(Seesaw, NoisyObjective) {
    const auto psi = haar_state<double>(2, 4, 31);
    SeesawConfig c;
    c.restarts = 4;
    c.seed = 8;
    const NoiseLevel noise(0.25);
    const auto r = seesaw_maximize(psi, c, noise);
    EXPECT_NEAR(r.value, qnl_noisy(psi, r.settings, noise), 1e-9);
    for (const auto &t : r.trajectories) {
        for (std::size_t i = 1; i < t.size(); ++i) {
            EXPECT_GE(t[i], t[i - 1] - 1e-12);
        }
    }
    EXPECT_LE(r.value, seesaw_maximize(psi, c).value + 1e-9);
    EXPECT_EQ(seesaw_maximize(psi, c, NoiseLevel(0.0)).value, seesaw_maximize(psi, c).value);
    // Mermin settings give 2 * 0.75^3 < 1 here; dull settings always reach 1.
    const double ghz_noisy =
        seesaw_maximize(ghz_state<double>(kInvSqrt2, kInvSqrt2, 3), SeesawConfig{}, noise).value;
    EXPECT_GE(ghz_noisy, 1.0 - 1e-9);
    EXPECT_LE(ghz_noisy, 2.0 + 1e-9);
    EXPECT_THROW(seesaw_maximize(haar_state<double>(3, 2, 1), c, noise), PreconditionError);
}

TEST(Seesaw, TimingAtEightQubits) {
    const auto psi = haar_state<double>(2, 8, 99);
    SeesawConfig c;
    c.seed = 3;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = seesaw_maximize(psi, c);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    RecordProperty("ms", std::to_string(ms.count()));
    std::printf("N=8 see-saw: %.1f ms, %d sweeps, value %.6f\n", ms.count(), r.sweeps_used, r.value);
    EXPECT_LE(r.value, std::pow(2.0, 3.5) + 1e-9);
}
