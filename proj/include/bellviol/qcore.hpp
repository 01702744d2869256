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
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bellviol/errors.hpp"
#include "bellviol/matrix_functions.hpp"

namespace bellviol {

/// Default cap on the number of amplitudes of a register (2^24).
inline constexpr std::size_t kDefaultMaxAmplitudes = std::size_t{1} << 24;

/// d^n_sites, validated against the amplitude cap.
inline std::size_t checked_dimension(int d, int n_sites,
                                     std::size_t cap = kDefaultMaxAmplitudes) {
    if (d < 2) {
        throw ValidationError("local dimension must be >= 2, got " +
                              std::to_string(d));
    }
    if (n_sites < 1) {
        throw ValidationError("number of sites must be >= 1, got " +
                              std::to_string(n_sites));
    }
    std::size_t dim = 1;
    for (int j = 0; j < n_sites; ++j) {
        if (dim > cap / static_cast<std::size_t>(d)) {
            throw CapacityError("register of " + std::to_string(n_sites) +
                                " sites with d=" + std::to_string(d) +
                                " exceeds the cap of " + std::to_string(cap) +
                                " amplitudes");
        }
        dim *= static_cast<std::size_t>(d);
    }
    return dim;
}

/// Unit vector in (C^d)^{\otimes n}. Site 0 is the most significant base-d
/// digit of the amplitude index.
template <typename Real> class PureState {
  public:
    /// Wraps amplitudes that are already normalized (to kNormTol).
    static PureState from_amplitudes(int d, int n_sites,
                                     StateVector<Real> amplitudes,
                                     std::size_t cap = kDefaultMaxAmplitudes) {
        const std::size_t dim = checked_dimension(d, n_sites, cap);
        if (static_cast<std::size_t>(amplitudes.size()) != dim) {
            throw ValidationError("expected " + std::to_string(dim) +
                                  " amplitudes, got " +
                                  std::to_string(amplitudes.size()));
        }
        const Real norm2 = amplitudes.squaredNorm();
        if (!(std::abs(norm2 - Real(1)) <= Real(kNormTol))) {
            throw ValidationError("state is not normalized: sum |a|^2 = " +
                                  std::to_string(norm2));
        }
        return PureState(d, n_sites, std::move(amplitudes));
    }

    /// Rescales a non-zero vector onto the unit sphere.
    static PureState normalized(int d, int n_sites, StateVector<Real> vec,
                                std::size_t cap = kDefaultMaxAmplitudes) {
        const Real norm = vec.norm();
        if (!(norm > Real(0)) || !std::isfinite(norm)) {
            throw ValidationError("cannot normalize a zero or non-finite vector");
        }
        vec /= norm;
        return from_amplitudes(d, n_sites, std::move(vec), cap);
    }

    int d() const { return d_; }
    int n_sites() const { return n_sites_; }
    Eigen::Index dimension() const { return amplitudes_.size(); }
    const StateVector<Real> &amplitudes() const { return amplitudes_; }

  private:
    PureState(int d, int n_sites, StateVector<Real> amplitudes)
        : d_(d), n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {}

    int d_;
    int n_sites_;
    StateVector<Real> amplitudes_;
};

/// The two dichotomic observables (Hermitian involutions) measured at a site.
template <typename Real> class DichotomicPair {
  public:
    DichotomicPair(LocalMatrix<Real> a0, LocalMatrix<Real> a1)
        : a0_(std::move(a0)), a1_(std::move(a1)) {
        if (a0_.rows() != a1_.rows() || a0_.rows() < 2) {
            throw ValidationError(
                "dichotomic pair needs two square matrices of equal size >= 2");
        }
        if (!is_hermitian_involution(a0_) || !is_hermitian_involution(a1_)) {
            throw ValidationError(
                "dichotomic observables must be Hermitian involutions");
        }
    }

    int d() const { return static_cast<int>(a0_.rows()); }
    const LocalMatrix<Real> &a0() const { return a0_; }
    const LocalMatrix<Real> &a1() const { return a1_; }
    const LocalMatrix<Real> &operator[](int i) const { return i == 0 ? a0_ : a1_; }

    /// Both observables have eigenvalues +1 and -1, i.e. |Tr A| <= d - 2.
    bool nondull() const {
        const Real bound = Real(d()) - Real(1.5);
        return std::abs(a0_.trace().real()) < bound &&
               std::abs(a1_.trace().real()) < bound;
    }

  private:
    LocalMatrix<Real> a0_;
    LocalMatrix<Real> a1_;
};

/// (A0 + (-1)^x A1) / 2.
template <typename Real>
LocalMatrix<Real> b_operator(const DichotomicPair<Real> &pair, int x) {
    if (x != 0 && x != 1) {
        throw ValidationError("setting bit must be 0 or 1");
    }
    return x == 0 ? LocalMatrix<Real>((pair.a0() + pair.a1()) / Real(2))
                  : LocalMatrix<Real>((pair.a0() - pair.a1()) / Real(2));
}

/// One dichotomic pair per site.
template <typename Real> class MeasurementSettings {
  public:
    explicit MeasurementSettings(std::vector<DichotomicPair<Real>> pairs)
        : pairs_(std::move(pairs)) {
        if (pairs_.empty()) {
            throw ValidationError("measurement settings need at least one site");
        }
        d_ = pairs_.front().d();
        for (const auto &p : pairs_) {
            if (p.d() != d_) {
                throw ValidationError(
                    "all sites must share the same local dimension");
            }
        }
    }

    /// Same pair at every site.
    static MeasurementSettings uniform(int n_sites,
                                       const DichotomicPair<Real> &pair) {
        if (n_sites < 1) {
            throw ValidationError("number of sites must be >= 1");
        }
        return MeasurementSettings(
            std::vector<DichotomicPair<Real>>(static_cast<std::size_t>(n_sites), pair));
    }

    int d() const { return d_; }
    int n_sites() const { return static_cast<int>(pairs_.size()); }
    const DichotomicPair<Real> &operator[](int site) const {
        return pairs_.at(static_cast<std::size_t>(site));
    }
    const std::vector<DichotomicPair<Real>> &pairs() const { return pairs_; }

    void set_pair(int site, DichotomicPair<Real> pair) {
        if (pair.d() != d_) {
            throw ValidationError("replacement pair has the wrong dimension");
        }
        pairs_.at(static_cast<std::size_t>(site)) = std::move(pair);
    }

    /// At least one site measures a non-dull pair.
    bool nondull() const {
        for (const auto &p : pairs_) {
            if (p.nondull()) {
                return true;
            }
        }
        return false;
    }

  private:
    int d_ = 0;
    std::vector<DichotomicPair<Real>> pairs_;
};

/// X = (x_1, ..., x_N), stored with x_1 as the most significant bit so that
/// tables over X are indexed by the binary integer x_1 x_2 ... x_N.
class SettingIndex {
  public:
    SettingIndex(int n_sites, std::uint64_t value) : n_sites_(n_sites), value_(value) {
        if (n_sites < 1 || n_sites > 63 || (value >> n_sites) != 0) {
            throw ValidationError("setting index out of range");
        }
    }

    static SettingIndex from_bits(const std::vector<int> &bits) {
        std::uint64_t v = 0;
        for (int b : bits) {
            if (b != 0 && b != 1) {
                throw ValidationError("setting bits must be 0 or 1");
            }
            v = (v << 1) | static_cast<std::uint64_t>(b);
        }
        return SettingIndex(static_cast<int>(bits.size()), v);
    }

    int n_sites() const { return n_sites_; }
    std::uint64_t value() const { return value_; }
    int bit(int site) const {
        return static_cast<int>((value_ >> (n_sites_ - 1 - site)) & 1U);
    }

  private:
    int n_sites_;
    std::uint64_t value_;
};

/// B_{j,x} for every site j and x in {0,1}.
template <typename Real>
using BOperatorTable = std::vector<std::array<LocalMatrix<Real>, 2>>;

template <typename Real>
BOperatorTable<Real> b_table(const MeasurementSettings<Real> &settings) {
    BOperatorTable<Real> table;
    table.reserve(settings.pairs().size());
    for (const auto &pair : settings.pairs()) {
        table.push_back({b_operator(pair, 0), b_operator(pair, 1)});
    }
    return table;
}

/// sup over sites and i in {0,1} of the operator norm of A_i^j - A~_i^j.
template <typename Real>
Real settings_distance(const MeasurementSettings<Real> &q,
                       const MeasurementSettings<Real> &q2) {
    if (q.d() != q2.d() || q.n_sites() != q2.n_sites()) {
        throw ValidationError("settings_distance: shape mismatch");
    }
    Real dist = 0;
    for (int j = 0; j < q.n_sites(); ++j) {
        for (int i = 0; i < 2; ++i) {
            const LocalMatrix<Real> diff = q[j][i] - q2[j][i];
            dist = std::max(dist, hermitian_operator_norm<Real>(diff));
        }
    }
    return dist;
}

/// Uniform (Haar) random state: i.i.d. standard complex Gaussians, normalized.
template <typename Real>
PureState<Real> haar_state(int d, int n_sites, std::uint64_t seed,
                           std::size_t cap = kDefaultMaxAmplitudes) {
    const std::size_t dim = checked_dimension(d, n_sites, cap);
    std::mt19937_64 rng(seed);
    std::normal_distribution<Real> gauss;
    StateVector<Real> v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Real re = gauss(rng);
        const Real im = gauss(rng);
        v(i) = Complex<Real>(re, im);
    }
    return PureState<Real>::normalized(d, n_sites, std::move(v), cap);
}

/// alpha |0...0> + beta |1...1> on qubits.
template <typename Real>
PureState<Real> ghz_state(Complex<Real> alpha, Complex<Real> beta, int n_sites) {
    if (n_sites < 2) {
        throw ValidationError("GHZ state needs at least 2 sites");
    }
    const Real norm2 = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(norm2 - Real(1)) <= Real(kStructuralTol))) {
        throw ValidationError("GHZ coefficients are not normalized: |alpha|^2 + "
                              "|beta|^2 = " + std::to_string(norm2));
    }
    const std::size_t dim = checked_dimension(2, n_sites);
    StateVector<Real> v = StateVector<Real>::Zero(static_cast<Eigen::Index>(dim));
    v(0) = alpha;
    v(v.size() - 1) = beta;
    if (std::abs(norm2 - Real(1)) > Real(kNormTol)) {
        return PureState<Real>::normalized(2, n_sites, std::move(v));
    }
    return PureState<Real>::from_amplitudes(2, n_sites, std::move(v));
}

/// Gaussian Hermitian matrix: (G + G^dagger)/2 with standard complex
/// Gaussian entries.
template <typename Real, typename Rng>
LocalMatrix<Real> random_hermitian(int d, Rng &rng) {
    std::normal_distribution<Real> gauss;
    LocalMatrix<Real> g(d, d);
    for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
            const Real re = gauss(rng);
            const Real im = gauss(rng);
            g(r, c) = Complex<Real>(re, im);
        }
    }
    return (g + g.adjoint()) / Real(2);
}

/// Random settings with observables msign(H), H Gaussian Hermitian. With
/// require_nondull, whole draws without a non-dull site are rejected; the
/// number of rejected draws is written to *resamples when given.
template <typename Real>
MeasurementSettings<Real> sample_settings(int d, int n_sites, std::uint64_t seed,
                                          bool require_nondull,
                                          int *resamples = nullptr) {
    if (d < 2 || n_sites < 1) {
        throw ValidationError("sample_settings: need d >= 2 and n_sites >= 1");
    }
    std::mt19937_64 rng(seed);
    int rejected = 0;
    for (;;) {
        std::vector<DichotomicPair<Real>> pairs;
        pairs.reserve(static_cast<std::size_t>(n_sites));
        for (int j = 0; j < n_sites; ++j) {
            LocalMatrix<Real> a0 = msign<Real>(random_hermitian<Real>(d, rng));
            LocalMatrix<Real> a1 = msign<Real>(random_hermitian<Real>(d, rng));
            pairs.emplace_back(std::move(a0), std::move(a1));
        }
        MeasurementSettings<Real> settings(std::move(pairs));
        if (!require_nondull || settings.nondull()) {
            if (resamples != nullptr) {
                *resamples = rejected;
            }
            return settings;
        }
        ++rejected;
    }
}

} // namespace bellviol
