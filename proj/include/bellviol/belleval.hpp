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

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "bellviol/tensor_kernels.hpp"

namespace bellviol {

/// Largest register for which dense d^N x d^N density operators are built.
inline constexpr int kMaxDenseSites = 6;

/// A labeling S : {0,1}^N -> {+1,-1}; one linear full-correlation inequality.
class SignFunction {
  public:
    SignFunction(int n_sites, std::vector<int> signs) : n_sites_(n_sites) {
        if (n_sites < 1 || n_sites > 30) {
            throw ValidationError("sign function: n_sites out of range");
        }
        if (signs.size() != (std::size_t{1} << n_sites)) {
            throw ValidationError("sign function needs 2^n_sites entries");
        }
        signs_.reserve(signs.size());
        for (int s : signs) {
            if (s != 1 && s != -1) {
                throw ValidationError("sign function entries must be +1 or -1");
            }
            signs_.push_back(static_cast<signed char>(s));
        }
    }

    static SignFunction constant(int n_sites, int sign = 1) {
        return SignFunction(n_sites, std::vector<int>(std::size_t{1} << n_sites, sign));
    }

    /// Pointwise sign of a table over X, with sign(0) = +1.
    template <typename Derived>
    static SignFunction signs_of(int n_sites, const Eigen::DenseBase<Derived> &values) {
        std::vector<int> s(static_cast<std::size_t>(values.size()));
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            s[static_cast<std::size_t>(i)] = values(i) >= 0 ? 1 : -1;
        }
        return SignFunction(n_sites, std::move(s));
    }

    int n_sites() const { return n_sites_; }
    std::size_t size() const { return signs_.size(); }
    int operator()(std::uint64_t x) const { return signs_.at(x); }
    bool operator==(const SignFunction &) const = default;

    template <typename Real> RealVector<Real> as_vector() const {
        RealVector<Real> v(static_cast<Eigen::Index>(signs_.size()));
        for (std::size_t i = 0; i < signs_.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = Real(signs_[i]);
        }
        return v;
    }

  private:
    int n_sites_;
    std::vector<signed char> signs_;
};

/// Local white-noise strength lambda in [0, 1].
class NoiseLevel {
  public:
    explicit NoiseLevel(double lambda) : lambda_(lambda) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw ValidationError("noise level must lie in [0, 1]");
        }
    }
    double lambda() const { return lambda_; }

  private:
    double lambda_;
};

/// Dense density operator; only built for small registers.
template <typename Real> class DensityOperator {
  public:
    DensityOperator(int d, int n_sites, LocalMatrix<Real> entries)
        : d_(d), n_sites_(n_sites), entries_(std::move(entries)) {
        if (n_sites > kMaxDenseSites) {
            throw CapacityError("density operators are limited to " +
                                std::to_string(kMaxDenseSites) + " sites");
        }
        const Eigen::Index dim =
            static_cast<Eigen::Index>(checked_dimension(d, n_sites));
        if (entries_.rows() != dim || entries_.cols() != dim) {
            throw ValidationError("density operator has the wrong shape");
        }
        if (!is_hermitian(entries_)) {
            throw ValidationError("density operator is not Hermitian");
        }
        if (std::abs(entries_.trace().real() - Real(1)) > Real(kStructuralTol)) {
            throw ValidationError("density operator does not have unit trace");
        }
        Eigen::SelfAdjointEigenSolver<LocalMatrix<Real>> solver(
            entries_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -Real(kStructuralTol)) {
            throw ValidationError("density operator is not positive semidefinite");
        }
    }

    static DensityOperator pure(const PureState<Real> &state) {
        const auto &a = state.amplitudes();
        return DensityOperator(state.d(), state.n_sites(), a * a.adjoint());
    }

    int d() const { return d_; }
    int n_sites() const { return n_sites_; }
    const LocalMatrix<Real> &entries() const { return entries_; }

  private:
    int d_;
    int n_sites_;
    LocalMatrix<Real> entries_;
};

/// Q_NL = sum_X |<psi| (x)_j B_{j,x_j} |psi>| for an explicit operator table.
template <typename Real>
Real qnl(const PureState<Real> &state, const BOperatorTable<Real> &table) {
    return expectation_table(state, table).cwiseAbs().sum();
}

template <typename Real>
Real qnl(const PureState<Real> &state, const MeasurementSettings<Real> &settings) {
    return expectation_table(state, settings).cwiseAbs().sum();
}

/// sum_X S(X) <psi| (x)_j B_{j,x_j} |psi>.
template <typename Real>
Real linear_value(const PureState<Real> &state,
                  const MeasurementSettings<Real> &settings, const SignFunction &s) {
    if (s.n_sites() != state.n_sites()) {
        throw ValidationError("sign function and state disagree on n_sites");
    }
    return expectation_table(state, settings).dot(s.as_vector<Real>());
}

/// Local hidden-variable value of the nonlinear functional for a
/// deterministic assignment (A_0^j, A_1^j) in {+1,-1}^2 per site.
inline double classical_nl_value(const std::vector<std::array<int, 2>> &assignment) {
    const int n = static_cast<int>(assignment.size());
    if (n < 1 || n > 30) {
        throw ValidationError("classical assignment: n_sites out of range");
    }
    for (const auto &a : assignment) {
        for (int v : a) {
            if (v != 1 && v != -1) {
                throw ValidationError("classical outcomes must be +1 or -1");
            }
        }
    }
    double total = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        double prod = 1.0;
        for (int j = 0; j < n; ++j) {
            const int bit = static_cast<int>((x >> (n - 1 - j)) & 1U);
            const auto &a = assignment[static_cast<std::size_t>(j)];
            prod *= 0.5 * (a[0] + (bit == 0 ? a[1] : -a[1]));
        }
        total += std::abs(prod);
    }
    return total;
}

/// Local depolarizing map on a qubit operator: M -> (1-l) M + l Tr(M)/2 I.
/// It is self-adjoint, so it acts identically on states and observables.
template <typename Real>
LocalMatrix<Real> depolarize(const LocalMatrix<Real> &m, const NoiseLevel &noise) {
    const Real lambda = Real(noise.lambda());
    if (lambda == Real(0)) {
        return m;
    }
    return (Real(1) - lambda) * m +
           (lambda * m.trace() / Real(2)) * LocalMatrix<Real>::Identity(2, 2);
}

namespace detail {
inline void require_qubits(int d, const char *what) {
    if (d != 2) {
        throw PreconditionError(std::string(what) +
                                ": the noise model is defined for qubits only (d = 2)");
    }
}
} // namespace detail

/// B'_{j,x} = (1-l) B_{j,x} + l (Tr B_{j,x}/2) I: the noise channel moved
/// onto the observables.
template <typename Real>
BOperatorTable<Real> dual_channel_table(const MeasurementSettings<Real> &settings,
                                        const NoiseLevel &noise) {
    detail::require_qubits(settings.d(), "dual_channel_table");
    BOperatorTable<Real> table = b_table(settings);
    for (auto &ops : table) {
        for (auto &b : ops) {
            b = depolarize(b, noise);
        }
    }
    return table;
}

/// Q_NL of the locally depolarized state, evaluated through the dual channel.
template <typename Real>
Real qnl_noisy(const PureState<Real> &state, const MeasurementSettings<Real> &settings,
               const NoiseLevel &noise) {
    detail::require_qubits(state.d(), "qnl_noisy");
    return qnl(state, dual_channel_table(settings, noise));
}

/// rho_{psi,l} as the explicit sum over traced-out subsets P^c:
///   sum_k l^k (1-l)^{N-k} sum_{|P^c|=k} Tr_{P^c}|psi><psi| (x) I_{P^c}/2^k.
template <typename Real>
DensityOperator<Real> noisy_density(const PureState<Real> &state,
                                    const NoiseLevel &noise) {
    detail::require_qubits(state.d(), "noisy_density");
    const int n = state.n_sites();
    if (n > kMaxDenseSites) {
        throw CapacityError("noisy_density is limited to " +
                            std::to_string(kMaxDenseSites) + " sites");
    }
    const Real lambda = Real(noise.lambda());
    const auto &psi = state.amplitudes();
    const std::uint64_t dim = std::uint64_t{1} << n;
    const LocalMatrix<Real> pure = psi * psi.adjoint();
    LocalMatrix<Real> rho = LocalMatrix<Real>::Zero(static_cast<Eigen::Index>(dim),
                                                    static_cast<Eigen::Index>(dim));
    // Site j is bit (n-1-j) of the amplitude index.
    for (std::uint64_t traced = 0; traced < dim; ++traced) {
        const int k = std::popcount(traced);
        const Real weight = std::pow(lambda, k) * std::pow(Real(1) - lambda, n - k);
        if (weight == Real(0)) {
            continue;
        }
        const Real scale = weight / Real(std::uint64_t{1} << k);
        for (std::uint64_t i = 0; i < dim; ++i) {
            for (std::uint64_t j = 0; j < dim; ++j) {
                if (((i ^ j) & traced) != 0) {
                    continue;
                }
                Complex<Real> acc(0);
                // Enumerate all values t of the traced bits.
                std::uint64_t t = 0;
                do {
                    acc += pure(static_cast<Eigen::Index>((i & ~traced) | t),
                                static_cast<Eigen::Index>((j & ~traced) | t));
                    t = (t - traced) & traced;
                } while (t != 0);
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    scale * acc;
            }
        }
    }
    return DensityOperator<Real>(2, n, std::move(rho));
}

/// sum_X |Tr((x)_j B_{j,x_j} rho)| by dense Kronecker products.
template <typename Real>
Real qnl_density(const DensityOperator<Real> &rho,
                 const MeasurementSettings<Real> &settings) {
    if (rho.d() != settings.d() || rho.n_sites() != settings.n_sites()) {
        throw ValidationError("qnl_density: shape mismatch");
    }
    const int n = rho.n_sites();
    const BOperatorTable<Real> table = b_table(settings);
    Real total = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        LocalMatrix<Real> op = table[0][(x >> (n - 1)) & 1U];
        for (int j = 1; j < n; ++j) {
            const LocalMatrix<Real> next = Eigen::kroneckerProduct(
                op, table[static_cast<std::size_t>(j)][(x >> (n - 1 - j)) & 1U]);
            op = next;
        }
        total += std::abs((op * rho.entries()).trace().real());
    }
    return total;
}

} // namespace bellviol
