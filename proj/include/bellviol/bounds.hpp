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
#include <functional>
#include <optional>

// Closed-form constants and probability bounds for the concentration of
// Q_NL over Haar-random states. Quantities that overflow a double at modest
// N (net sizes, prefactors) are carried as log10.

namespace bellviol::bounds {

/// 9 pi^3, the constant in the Levy tail exponent.
double levy_constant();

/// (sqrt(2/d))^N + (d-2)/d: upper bound on E[Q_NL] for fixed non-dull settings.
double c_dn(int d, int n_sites);

/// 2 exp(-(n+1) eps^2 / (9 pi^3 L^2)) for an L-Lipschitz function on S_n.
double levy_tail(int sphere_dim_n, double epsilon, double lipschitz);

struct NetParams {
    double epsilon;          // delta / (d^2 N 2^{N+1})
    std::int64_t m;          // largest integer strictly below 1/epsilon (>= 0)
    double net_size_log10;   // log10 (M+2)^{2 d^2 N}
    double net_bound_log10;  // log10 (1/epsilon + 2)^{2 d^2 N}
};

NetParams net_params(int d, int n_sites, double delta);

struct LipschitzConstants {
    double state;            // 2^{(N+1)/2}
    double settings_factor;  // N 2^N
    double noisy;            // sqrt(2) (lambda + (1-lambda) sqrt(2))^N
};

LipschitzConstants lipschitz_constants(int n_sites, double lambda);

/// (lambda + (1 - lambda) sqrt(2))^2.
double chi(double lambda);

struct ExpectedValueBounds {
    double noiseless;  // c_{d,N}
    double noisy;      // 1
};

ExpectedValueBounds expected_value_bounds(int d, int n_sites);

struct BoundQuery {
    int d = 2;
    int n_sites = 2;
    double v = 0.0;
    std::optional<double> delta;  // empty selects the minimizing delta
    double lambda = 0.0;
};

struct BoundReport {
    double c_dn;
    double chi;
    double epsilon;
    double net_size_log10;
    double lipschitz_state;
    double lipschitz_settings_factor;
    double lipschitz_noisy;
    double tail_bound_log10;
    /// The bound itself when it is at most 1e6, otherwise its log10.
    double tail_bound;
    bool tail_bound_is_log10;
    double delta_used;
};

/// Natural log of 2 (N 2^{N+1} d^2/delta + 2)^{2 d^2 N}
///   exp(-(v - delta - c_{d,N})^2 (d/2)^N / (9 pi^3)).
double theorem1_log_bound(int d, int n_sites, double v, double delta);

/// Natural log of 2 (N 2^{N+3}/delta + 2)^{8N}
///   exp(-(v - delta - 1)^2 (2/chi)^N / (9 pi^3)).
double theorem2_log_bound(int n_sites, double v, double delta, double lambda);

/// Throws PreconditionError when v <= c_{d,N} + delta (or no delta exists).
BoundReport theorem1_bound(const BoundQuery &q);

/// Qubits only. Throws PreconditionError when v <= 1 + delta.
BoundReport theorem2_bound(const BoundQuery &q);

/// Minimizes log_bound over delta in (0, upper) by a log-spaced scan
/// followed by golden-section refinement to 1e-6 relative.
double minimize_delta(const std::function<double(double)> &log_bound, double upper);

} // namespace bellviol::bounds
