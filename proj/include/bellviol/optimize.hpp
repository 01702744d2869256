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

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "bellviol/belleval.hpp"
#include "bellviol/seeding.hpp"

namespace bellviol {

struct SeesawConfig {
    int restarts = 20;
    int max_sweeps = 500;
    double improvement_tol = 1e-10;
    std::uint64_t seed = 0;

    void validate() const {
        if (restarts < 1) {
            throw ValidationError("see-saw needs at least one restart");
        }
        if (max_sweeps < 1) {
            throw ValidationError("see-saw needs max_sweeps >= 1");
        }
        if (!(improvement_tol > 0.0)) {
            throw ValidationError("see-saw improvement tolerance must be > 0");
        }
    }
};

/// Best settings found by the see-saw; value is a lower bound on sup_Q Q_NL.
template <typename Real> struct OptimizationResult {
    Real value;
    MeasurementSettings<Real> settings;
    int sweeps_used = 0;   // summed over restarts
    int restarts_used = 0;
    int best_restart = 0;
    /// Objective after initialization and after every sweep, one row per restart.
    std::vector<std::vector<Real>> trajectories;
};

/// Hermitian G0, G1 with linear_value = Tr(A0 G0) + Tr(A1 G1) for any pair
/// (A0, A1) substituted at `site`.
template <typename Real> struct EffectiveOperators {
    LocalMatrix<Real> g0;
    LocalMatrix<Real> g1;
};

namespace detail {

/// Operator table of the (possibly noisy) objective.
template <typename Real>
BOperatorTable<Real> objective_table(const MeasurementSettings<Real> &settings,
                                     const std::optional<NoiseLevel> &noise) {
    return noise ? dual_channel_table(settings, *noise) : b_table(settings);
}

/// Left/right images of psi under one operator table; yields the full
/// correlator table and, per site, the effective operators.
template <typename Real> class BipartiteEvaluator {
  public:
    BipartiteEvaluator(const PureState<Real> &state, const BOperatorTable<Real> &table)
        : state_(state), table_(table), n_(state.n_sites()),
          nl_(left_block_size(state.n_sites())) {
        if (static_cast<int>(table.size()) != n_) {
            throw ValidationError("operator table and state disagree on n_sites");
        }
        left_ = site_images(state_, table_, site_range(0, nl_));
        right_ = site_images(state_, table_, site_range(nl_, n_));
        refresh_correlators();
    }

    /// Call after the table entries of `site` changed.
    void site_changed(int site) {
        if (site < nl_) {
            left_ = site_images(state_, table_, site_range(0, nl_));
        } else {
            right_ = site_images(state_, table_, site_range(nl_, n_));
        }
        refresh_correlators();
    }

    const RealVector<Real> &correlators() const { return correlators_; }

    EffectiveOperators<Real> effective(int site, const SignFunction &s,
                                       const std::optional<NoiseLevel> &noise) const {
        if (site < 0 || site >= n_) {
            throw ValidationError("site index out of range");
        }
        if (s.n_sites() != n_) {
            throw ValidationError("sign function and state disagree on n_sites");
        }
        const int d = state_.d();
        const int nr = n_ - nl_;
        const bool in_left = site < nl_;
        const int block_sites = in_left ? nl_ : nr;
        const int shift = block_sites - 1 - (in_left ? site : site - nl_);

        const ImageMatrix<Real> own =
            in_left ? site_images(state_, table_, site_range(0, nl_, site))
                    : site_images(state_, table_, site_range(nl_, n_, site));
        // signs(XR, XL) = S(XL * 2^|R| + XR)
        const RealVector<Real> sv = s.as_vector<Real>();
        const Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> signs(
            sv.data(), Eigen::Index{1} << nr, Eigen::Index{1} << nl_);
        // Column X of `weighted` is the sign-weighted sum of the opposite
        // block's images paired with X of this block.
        const ImageMatrix<Real> &other = in_left ? right_ : left_;
        ImageMatrix<Real> weighted(other.rows(), in_left ? signs.cols() : signs.rows());
        Eigen::Map<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> weighted_re(
            reinterpret_cast<Real *>(weighted.data()), 2 * weighted.rows(), weighted.cols());
        if (in_left) {
            weighted_re.noalias() = detail::interleaved(other) * signs;
        } else {
            weighted_re.noalias() = detail::interleaved(other) * signs.transpose();
        }

        std::array<LocalMatrix<Real>, 2> r{LocalMatrix<Real>::Zero(d, d),
                                           LocalMatrix<Real>::Zero(d, d)};
        const std::uint64_t low_mask = (std::uint64_t{1} << shift) - 1;
        for (Eigen::Index y = 0; y < own.cols(); ++y) {
            const auto uy = static_cast<std::uint64_t>(y);
            for (std::uint64_t x = 0; x < 2; ++x) {
                const std::uint64_t idx =
                    ((uy & ~low_mask) << 1) | (x << shift) | (uy & low_mask);
                accumulate_site_gram<Real>(weighted.col(static_cast<Eigen::Index>(idx)),
                                           own.col(y), site, d, n_, r[x]);
            }
        }
        if (noise) {
            r[0] = depolarize(r[0], *noise);
            r[1] = depolarize(r[1], *noise);
        }
        EffectiveOperators<Real> g{(r[0] + r[1]) / Real(2), (r[0] - r[1]) / Real(2)};
        g.g0 = (g.g0 + g.g0.adjoint()).eval() / Real(2);
        g.g1 = (g.g1 + g.g1.adjoint()).eval() / Real(2);
        return g;
    }

  private:
    void refresh_correlators() {
        const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> gram =
            detail::real_gram(right_, left_);
        correlators_ = Eigen::Map<const RealVector<Real>>(gram.data(), gram.size());
    }

    const PureState<Real> &state_;
    const BOperatorTable<Real> &table_;
    int n_;
    int nl_;
    ImageMatrix<Real> left_;
    ImageMatrix<Real> right_;
    RealVector<Real> correlators_;
};

template <typename Real>
void check_shapes(const PureState<Real> &state, const MeasurementSettings<Real> &settings) {
    if (state.d() != settings.d() || state.n_sites() != settings.n_sites()) {
        throw ValidationError("state and settings disagree on shape");
    }
}

} // namespace detail

template <typename Real>
EffectiveOperators<Real> effective_operators(const PureState<Real> &state,
                                             const MeasurementSettings<Real> &settings,
                                             int site, const SignFunction &s) {
    detail::check_shapes(state, settings);
    const BOperatorTable<Real> table = b_table(settings);
    return detail::BipartiteEvaluator<Real>(state, table).effective(site, s, std::nullopt);
}

/// Same, for the noisy objective Q_NL^lambda (qubits only).
template <typename Real>
EffectiveOperators<Real> effective_operators(const PureState<Real> &state,
                                             const MeasurementSettings<Real> &settings,
                                             int site, const SignFunction &s,
                                             const NoiseLevel &noise) {
    detail::check_shapes(state, settings);
    const BOperatorTable<Real> table = dual_channel_table(settings, noise);
    return detail::BipartiteEvaluator<Real>(state, table).effective(site, s, noise);
}

/// Alternating maximization of Q_NL (or Q_NL^lambda when noise is given).
///
/// Each restart starts from sample_settings(seed derived from the restart
/// index). A site step fixes S(X) to the signs of the current correlators
/// and replaces the site's pair by (msign(G0), msign(G1)); this maximizes
/// the linearized objective exactly, so Q_NL never decreases. A sweep visits
/// every site once. The best restart wins, ties going to the lowest index.
template <typename Real>
OptimizationResult<Real> seesaw_maximize(const PureState<Real> &state,
                                         const SeesawConfig &config,
                                         std::optional<NoiseLevel> noise = std::nullopt) {
    config.validate();
    if (noise && noise->lambda() == 0.0) {
        noise.reset();
    }
    if (noise) {
        detail::require_qubits(state.d(), "seesaw_maximize");
    }
    const int n = state.n_sites();
    std::optional<OptimizationResult<Real>> best;
    int total_sweeps = 0;
    std::vector<std::vector<Real>> trajectories;

    for (int restart = 0; restart < config.restarts; ++restart) {
        MeasurementSettings<Real> settings = sample_settings<Real>(
            state.d(), n, derive_seed(config.seed, static_cast<std::uint64_t>(restart)),
            false);
        BOperatorTable<Real> table = detail::objective_table(settings, noise);
        detail::BipartiteEvaluator<Real> eval(state, table);
        auto value = [&] { return eval.correlators().cwiseAbs().sum(); };
        Real current = value();
        std::vector<Real> trajectory{current};
        int sweeps = 0;
        while (sweeps < config.max_sweeps) {
            for (int site = 0; site < n; ++site) {
                const SignFunction s = SignFunction::signs_of(n, eval.correlators());
                const EffectiveOperators<Real> g = eval.effective(site, s, noise);
                settings.set_pair(site, DichotomicPair<Real>(msign(g.g0), msign(g.g1)));
                auto &row = table[static_cast<std::size_t>(site)];
                row = {b_operator(settings[site], 0), b_operator(settings[site], 1)};
                if (noise) {
                    row[0] = depolarize(row[0], *noise);
                    row[1] = depolarize(row[1], *noise);
                }
                eval.site_changed(site);
            }
            ++sweeps;
            const Real next = value();
            trajectory.push_back(next);
            const Real gain = next - current;
            current = next;
            if (gain < Real(config.improvement_tol)) {
                break;
            }
        }
        total_sweeps += sweeps;
        trajectories.push_back(trajectory);
        if (!best || current > best->value) {
            best = OptimizationResult<Real>{current, settings, 0, 0, restart, {}};
        }
    }
    best->value = noise ? qnl_noisy(state, best->settings, *noise)
                        : qnl(state, best->settings);
    best->sweeps_used = total_sweeps;
    best->restarts_used = config.restarts;
    best->trajectories = std::move(trajectories);
    return *best;
}

/// Two-qubit closed form sqrt(s1^2 + s2^2) from the two largest singular
/// values of the correlation matrix T_ab = <psi| sigma_a (x) sigma_b |psi>.
template <typename Real> Real horodecki_chsh(const PureState<Real> &state) {
    if (state.d() != 2 || state.n_sites() != 2) {
        throw ValidationError("horodecki_chsh needs a two-qubit state");
    }
    const std::array<LocalMatrix<Real>, 3> sigma{pauli_x<Real>(), pauli_y<Real>(),
                                                 pauli_z<Real>()};
    const auto &psi = state.amplitudes();
    Eigen::Matrix<Real, 3, 3> t;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const LocalMatrix<Real> op = Eigen::kroneckerProduct(sigma[a], sigma[b]);
            t(a, b) = psi.dot(op * psi).real();
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix<Real, 3, 3>> svd(t);
    const auto &s = svd.singularValues();
    return std::sqrt(s(0) * s(0) + s(1) * s(1));
}

/// 2^{-N/2} sum_k C(N,k) |cos((N-2k) pi/4)|: Q_NL of the balanced GHZ state
/// with A0 = sigma_x, A1 = sigma_y at every site.
inline double mermin_closed_form(int n_sites) {
    if (n_sites < 1) {
        throw ValidationError("mermin_closed_form needs n_sites >= 1");
    }
    const double quarter_pi = std::atan(1.0);
    double binom = 1.0;
    double total = 0.0;
    for (int k = 0; k <= n_sites; ++k) {
        total += binom * std::abs(std::cos((n_sites - 2 * k) * quarter_pi));
        binom = binom * (n_sites - k) / (k + 1);
    }
    return total * std::pow(2.0, -0.5 * n_sites);
}

template <typename Real> struct MerminReference {
    MeasurementSettings<Real> settings;
    Real value;
};

/// Pauli-x / Pauli-y at every site together with the closed-form value.
template <typename Real> MerminReference<Real> mermin_reference(int n_sites) {
    if (n_sites < 2) {
        throw ValidationError("mermin_reference needs n_sites >= 2");
    }
    return {MeasurementSettings<Real>::uniform(
                n_sites, DichotomicPair<Real>(pauli_x<Real>(), pauli_y<Real>())),
            Real(mermin_closed_form(n_sites))};
}

} // namespace bellviol
