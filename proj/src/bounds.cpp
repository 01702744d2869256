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

#include "bellviol/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bellviol/errors.hpp"

namespace bellviol::bounds {

namespace {

constexpr double kLn10 = std::numbers::ln10;

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw PreconditionError(what);
    }
}

void require_lambda(double lambda) {
    require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
}

void require_shape(int d, int n_sites) {
    require(d >= 2, "d must be >= 2");
    require(n_sites >= 1, "n_sites must be >= 1");
}

BoundReport make_report(int d, int n_sites, double lambda, double delta,
                        double log_bound) {
    const NetParams net = net_params(d, n_sites, delta);
    const LipschitzConstants lip = lipschitz_constants(n_sites, lambda);
    BoundReport r{};
    r.c_dn = c_dn(d, n_sites);
    r.chi = chi(lambda);
    r.epsilon = net.epsilon;
    r.net_size_log10 = net.net_size_log10;
    r.lipschitz_state = lip.state;
    r.lipschitz_settings_factor = lip.settings_factor;
    r.lipschitz_noisy = lip.noisy;
    r.tail_bound_log10 = log_bound / kLn10;
    r.tail_bound_is_log10 = r.tail_bound_log10 > 6.0;
    r.tail_bound = r.tail_bound_is_log10 ? r.tail_bound_log10 : std::exp(log_bound);
    r.delta_used = delta;
    return r;
}

} // namespace

double levy_constant() { return 9.0 * std::pow(std::numbers::pi, 3); }

double c_dn(int d, int n_sites) {
    require_shape(d, n_sites);
    if (d == 2) {
        return 1.0;
    }
    return std::pow(std::sqrt(2.0 / d), n_sites) + static_cast<double>(d - 2) / d;
}

double levy_tail(int sphere_dim_n, double epsilon, double lipschitz) {
    require(sphere_dim_n >= 1, "sphere dimension must be >= 1");
    require(epsilon > 0.0, "epsilon must be > 0");
    require(lipschitz > 0.0, "Lipschitz constant must be > 0");
    return 2.0 * std::exp(-(sphere_dim_n + 1.0) * epsilon * epsilon /
                          (levy_constant() * lipschitz * lipschitz));
}

NetParams net_params(int d, int n_sites, double delta) {
    require_shape(d, n_sites);
    require(delta > 0.0, "delta must be > 0");
    // 1/epsilon is formed directly so that exact powers of two stay exact.
    const double inv_eps =
        static_cast<double>(d) * d * n_sites * std::ldexp(1.0, n_sites + 1) / delta;
    const double m_real = std::max(0.0, std::ceil(inv_eps) - 1.0);
    const double coords = 2.0 * d * d * n_sites;
    NetParams p{};
    p.epsilon = 1.0 / inv_eps;
    p.m = static_cast<std::int64_t>(m_real);
    p.net_size_log10 = coords * std::log10(m_real + 2.0);
    p.net_bound_log10 = coords * std::log10(inv_eps + 2.0);
    return p;
}

LipschitzConstants lipschitz_constants(int n_sites, double lambda) {
    require(n_sites >= 1, "n_sites must be >= 1");
    require_lambda(lambda);
    const double base = lambda + (1.0 - lambda) * std::numbers::sqrt2;
    return {std::pow(2.0, 0.5 * (n_sites + 1)), n_sites * std::ldexp(1.0, n_sites),
            std::numbers::sqrt2 * std::pow(base, n_sites)};
}

double chi(double lambda) {
    require_lambda(lambda);
    const double base = lambda + (1.0 - lambda) * std::numbers::sqrt2;
    return base * base;
}

ExpectedValueBounds expected_value_bounds(int d, int n_sites) {
    return {c_dn(d, n_sites), 1.0};
}

double theorem1_log_bound(int d, int n_sites, double v, double delta) {
    const double c = c_dn(d, n_sites);
    require(delta > 0.0, "delta must be > 0");
    require(v > c + delta, "theorem 1 requires v > c_{d,N} + delta (v = " +
                               std::to_string(v) + ", c_{d,N} + delta = " +
                               std::to_string(c + delta) + ")");
    const double dd = static_cast<double>(d) * d;
    const double prefactor = n_sites * std::ldexp(1.0, n_sites + 1) * dd / delta + 2.0;
    const double gap = v - delta - c;
    return std::numbers::ln2 + 2.0 * dd * n_sites * std::log(prefactor) -
           gap * gap * std::pow(0.5 * d, n_sites) / levy_constant();
}

double theorem2_log_bound(int n_sites, double v, double delta, double lambda) {
    require(n_sites >= 1, "n_sites must be >= 1");
    require_lambda(lambda);
    require(delta > 0.0, "delta must be > 0");
    require(v > 1.0 + delta, "theorem 2 requires v > 1 + delta (v = " +
                                 std::to_string(v) + ", 1 + delta = " +
                                 std::to_string(1.0 + delta) + ")");
    const double prefactor = n_sites * std::ldexp(1.0, n_sites + 3) / delta + 2.0;
    const double gap = v - delta - 1.0;
    return std::numbers::ln2 + 8.0 * n_sites * std::log(prefactor) -
           gap * gap * std::pow(2.0 / chi(lambda), n_sites) / levy_constant();
}

double minimize_delta(const std::function<double(double)> &log_bound, double upper) {
    require(upper > 0.0, "no feasible delta: v does not exceed the expected-value bound");
    const double lo = upper * 1e-12;
    const double hi = upper * (1.0 - 1e-9);
    constexpr int kGrid = 256;
    const double ratio = std::pow(hi / lo, 1.0 / (kGrid - 1));
    int best = 0;
    double best_val = log_bound(lo);
    for (int i = 1; i < kGrid; ++i) {
        const double x = (i == kGrid - 1) ? hi : lo * std::pow(ratio, i);
        const double f = log_bound(x);
        if (f < best_val) {
            best_val = f;
            best = i;
        }
    }
    auto grid = [&](int i) {
        return i <= 0 ? lo : (i >= kGrid - 1 ? hi : lo * std::pow(ratio, i));
    };
    double a = grid(best - 1);
    double b = grid(best + 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = log_bound(x1);
    double f2 = log_bound(x2);
    while (b - a > 1e-6 * b) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = log_bound(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = log_bound(x2);
        }
    }
    // Never worse than the best scanned point.
    const double refined = f1 < f2 ? x1 : x2;
    return log_bound(refined) <= best_val ? refined : grid(best);
}

BoundReport theorem1_bound(const BoundQuery &q) {
    require_shape(q.d, q.n_sites);
    require(q.n_sites >= 2, "theorem 1 requires n_sites >= 2");
    const double c = c_dn(q.d, q.n_sites);
    double delta;
    if (q.delta) {
        delta = *q.delta;
    } else {
        require(q.v > c, "theorem 1 requires v > c_{d,N} for some delta > 0");
        delta = minimize_delta(
            [&](double x) { return theorem1_log_bound(q.d, q.n_sites, q.v, x); }, q.v - c);
    }
    const double lb = theorem1_log_bound(q.d, q.n_sites, q.v, delta);
    return make_report(q.d, q.n_sites, q.lambda, delta, lb);
}

BoundReport theorem2_bound(const BoundQuery &q) {
    require(q.d == 2, "theorem 2 is stated for qubits (d = 2)");
    require(q.n_sites >= 2, "theorem 2 requires n_sites >= 2");
    double delta;
    if (q.delta) {
        delta = *q.delta;
    } else {
        require(q.v > 1.0, "theorem 2 requires v > 1 for some delta > 0");
        delta = minimize_delta(
            [&](double x) { return theorem2_log_bound(q.n_sites, q.v, x, q.lambda); },
            q.v - 1.0);
    }
    const double lb = theorem2_log_bound(q.n_sites, q.v, delta, q.lambda);
    return make_report(2, q.n_sites, q.lambda, delta, lb);
}

} // namespace bellviol::bounds
