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
#include <vector>

#include "bellviol/qcore.hpp"

// Tensor-product kernels. A d^N x d^N operator is never materialized: local
// operators are applied site by site, and the table of all 2^N correlators
// <psi| B_{1,x_1} (x) ... (x) B_{N,x_N} |psi> is obtained from a bipartition
// of the sites into a left block L and a right block R:
//
//   <psi| B_XL (x) B_XR |psi> = < (B_XL (x) I) psi , (I (x) B_XR) psi >,
//
// so the whole table is one Gram product P^dagger Q between the 2^|L| left
// images and the 2^|R| right images of psi.

namespace bellviol {

template <typename Real>
using ImageMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace detail {

/// Complex column-major matrix seen as a real one with interleaved (re, im) rows.
template <typename Real>
Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>>
interleaved(const ImageMatrix<Real> &m) {
    return {reinterpret_cast<const Real *>(m.data()), 2 * m.rows(), m.cols()};
}

/// Re(a^dagger b), computed as a real product.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> real_gram(const ImageMatrix<Real> &a,
                                                              const ImageMatrix<Real> &b) {
    return interleaved(a).transpose() * interleaved(b);
}

inline Eigen::Index int_pow(int base, int exp) {
    Eigen::Index r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

} // namespace detail

namespace detail {

// Views of a site-major vector, index = l * d * right + k * right + r.
// fixed_l: right x d block for one l. fixed_r: d x left, strided, for one r.
template <typename Scalar>
using StridedMap = Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>, 0,
                              Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
template <typename Scalar>
using ConstStridedMap =
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>, 0,
               Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

struct SiteLayout {
    Eigen::Index right;
    Eigen::Index block;
    Eigen::Index left;
    int d;
};

inline SiteLayout site_layout(int site, int d, int n_sites, Eigen::Index size) {
    const Eigen::Index right = int_pow(d, n_sites - 1 - site);
    return {right, right * d, size / (right * d), d};
}

template <typename Scalar>
ConstStridedMap<Scalar> view_fixed_l(const Scalar *p, const SiteLayout &g, Eigen::Index l) {
    return {p + l * g.block, g.right, g.d, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(g.right, 1)};
}
template <typename Scalar>
ConstStridedMap<Scalar> view_fixed_r(const Scalar *p, const SiteLayout &g, Eigen::Index r) {
    return {p + r, g.d, g.left, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(g.block, g.right)};
}
template <typename Scalar>
StridedMap<Scalar> view_fixed_l(Scalar *p, const SiteLayout &g, Eigen::Index l) {
    return {p + l * g.block, g.right, g.d, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(g.right, 1)};
}
template <typename Scalar>
StridedMap<Scalar> view_fixed_r(Scalar *p, const SiteLayout &g, Eigen::Index r) {
    return {p + r, g.d, g.left, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(g.block, g.right)};
}

} // namespace detail

/// out = (I (x) op_site (x) I) in. Both vectors must be contiguous.
template <typename Real, typename InVec, typename OutVec>
void apply_site(const LocalMatrix<Real> &op, int site, int d, int n_sites,
                const Eigen::MatrixBase<InVec> &in, Eigen::MatrixBase<OutVec> &out) {
    using C = Complex<Real>;
    const detail::SiteLayout g = detail::site_layout(site, d, n_sites, in.size());
    const C *src = in.derived().data();
    C *dst = out.derived().data();
    if (g.left <= g.right) {
        for (Eigen::Index l = 0; l < g.left; ++l) {
            detail::view_fixed_l(dst, g, l).noalias() =
                detail::view_fixed_l(src, g, l).lazyProduct(op.transpose());
        }
    } else {
        for (Eigen::Index r = 0; r < g.right; ++r) {
            detail::view_fixed_r(dst, g, r).noalias() = op.lazyProduct(detail::view_fixed_r(src, g, r));
        }
    }
}

/// Columns (B_{s_1,x_1} (x) ... (x) B_{s_m,x_m}) psi for every assignment of
/// the listed sites, column index = binary x_1...x_m with x_1 most
/// significant. Sites not listed are left untouched.
template <typename Real>
ImageMatrix<Real> site_images(const PureState<Real> &state,
                              const BOperatorTable<Real> &table,
                              const std::vector<int> &sites) {
    const int d = state.d();
    const int n = state.n_sites();
    const int m = static_cast<int>(sites.size());
    const Eigen::Index dim = state.dimension();
    ImageMatrix<Real> out(dim, Eigen::Index{1} << m);
    if (m == 0) {
        out.col(0) = state.amplitudes();
        return out;
    }
    std::vector<StateVector<Real>> stack(static_cast<std::size_t>(m) - 1,
                                         StateVector<Real>(dim));
    // Depth-first over the assignment tree; each level owns one buffer.
    auto visit = [&](auto &self, int level, std::uint64_t prefix,
                     const StateVector<Real> &current) -> void {
        for (int x = 0; x < 2; ++x) {
            const std::uint64_t index = (prefix << 1) | static_cast<std::uint64_t>(x);
            const auto &op = table[static_cast<std::size_t>(sites[level])][x];
            if (level == m - 1) {
                auto col = out.col(static_cast<Eigen::Index>(index));
                apply_site<Real>(op, sites[level], d, n, current, col);
            } else {
                auto &next = stack[static_cast<std::size_t>(level)];
                apply_site<Real>(op, sites[level], d, n, current, next);
                self(self, level + 1, index, next);
            }
        }
    };
    visit(visit, 0, 0, state.amplitudes());
    return out;
}

/// Split point of the bipartition: sites [0, left_block_size) form L.
inline int left_block_size(int n_sites) { return n_sites / 2; }

inline std::vector<int> site_range(int first, int last, int skip = -1) {
    std::vector<int> sites;
    for (int j = first; j < last; ++j) {
        if (j != skip) {
            sites.push_back(j);
        }
    }
    return sites;
}

/// All 2^N correlators <psi| (x)_j B_{j,x_j} |psi>, indexed by X as a binary
/// integer with x_1 most significant.
template <typename Real>
RealVector<Real> expectation_table(const PureState<Real> &state,
                                   const BOperatorTable<Real> &table) {
    const int n = state.n_sites();
    if (static_cast<int>(table.size()) != n) {
        throw ValidationError("operator table has " + std::to_string(table.size()) +
                              " sites, state has " + std::to_string(n));
    }
    for (const auto &ops : table) {
        if (ops[0].rows() != state.d() || ops[1].rows() != state.d()) {
            throw ValidationError("operator table and state disagree on d");
        }
    }
    const int nl = left_block_size(n);
    const ImageMatrix<Real> left = site_images(state, table, site_range(0, nl));
    const ImageMatrix<Real> right = site_images(state, table, site_range(nl, n));
    // (Q^dagger P)(XR, XL) stored column-major is exactly index XL*2^|R| + XR.
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> gram =
        detail::real_gram(right, left);
    return Eigen::Map<const RealVector<Real>>(gram.data(), gram.size());
}

template <typename Real>
RealVector<Real> expectation_table(const PureState<Real> &state,
                                   const MeasurementSettings<Real> &settings) {
    if (settings.d() != state.d()) {
        throw ValidationError("settings and state disagree on d");
    }
    return expectation_table(state, b_table(settings));
}

/// <psi| (x)_j B_{j,x_j} |psi> for one X, by sequential application.
template <typename Real>
Real product_expectation(const PureState<Real> &state,
                         const MeasurementSettings<Real> &settings,
                         const SettingIndex &x) {
    if (settings.d() != state.d() || settings.n_sites() != state.n_sites() ||
        x.n_sites() != state.n_sites()) {
        throw ValidationError("product_expectation: dimension mismatch");
    }
    const int n = state.n_sites();
    StateVector<Real> a = state.amplitudes();
    StateVector<Real> b(a.size());
    for (int j = 0; j < n; ++j) {
        apply_site<Real>(b_operator(settings[j], x.bit(j)), j, state.d(), n, a, b);
        a.swap(b);
    }
    return state.amplitudes().dot(a).real();
}

/// Adds to m the d x d matrix M with <u| (I (x) C_site (x) I) |w> = Tr(C M)
/// for all C. Both vectors must be contiguous.
template <typename Real, typename WVec, typename UVec>
void accumulate_site_gram(const Eigen::MatrixBase<WVec> &w, const Eigen::MatrixBase<UVec> &u,
                          int site, int d, int n_sites, LocalMatrix<Real> &m) {
    using C = Complex<Real>;
    const detail::SiteLayout g = detail::site_layout(site, d, n_sites, w.size());
    const C *pw = w.derived().data();
    const C *pu = u.derived().data();
    // M(b, a) = sum_{l,r} conj(u[l,a,r]) w[l,b,r]
    if (g.left <= g.right) {
        for (Eigen::Index l = 0; l < g.left; ++l) {
            m.noalias() += detail::view_fixed_l(pw, g, l).transpose().lazyProduct(
                detail::view_fixed_l(pu, g, l).conjugate());
        }
    } else {
        for (Eigen::Index r = 0; r < g.right; ++r) {
            m.noalias() +=
                detail::view_fixed_r(pw, g, r).lazyProduct(detail::view_fixed_r(pu, g, r).adjoint());
        }
    }
}

template <typename Real, typename WVec, typename UVec>
LocalMatrix<Real> site_gram(const Eigen::MatrixBase<WVec> &w,
                            const Eigen::MatrixBase<UVec> &u, int site, int d,
                            int n_sites) {
    LocalMatrix<Real> m = LocalMatrix<Real>::Zero(d, d);
    accumulate_site_gram<Real>(w, u, site, d, n_sites, m);
    return m;
}

} // namespace bellviol
