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
#include <complex>

#include <Eigen/Dense>

#include "bellviol/errors.hpp"

namespace bellviol {

template <typename Real> using Complex = std::complex<Real>;

/// Dense d x d operator acting on a single site.
template <typename Real>
using LocalMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Amplitude vector of the full register.
template <typename Real>
using StateVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

/// Tolerance for structural identities (Hermiticity, involution, traces).
inline constexpr double kStructuralTol = 1e-10;
/// Tolerance for unit norm of state vectors.
inline constexpr double kNormTol = 1e-12;

template <typename Real> LocalMatrix<Real> pauli_x() {
    LocalMatrix<Real> m(2, 2);
    m << Real(0), Real(1), Real(1), Real(0);
    return m;
}

template <typename Real> LocalMatrix<Real> pauli_y() {
    LocalMatrix<Real> m(2, 2);
    m << Real(0), Complex<Real>(0, -1), Complex<Real>(0, 1), Real(0);
    return m;
}

template <typename Real> LocalMatrix<Real> pauli_z() {
    LocalMatrix<Real> m(2, 2);
    m << Real(1), Real(0), Real(0), Real(-1);
    return m;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived> &m,
                  double tol = kStructuralTol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// True when m is Hermitian and m*m = I within tol.
template <typename Derived>
bool is_hermitian_involution(const Eigen::MatrixBase<Derived> &m,
                             double tol = kStructuralTol) {
    if (!is_hermitian(m, tol)) {
        return false;
    }
    using Matrix = typename Derived::PlainObject;
    const Matrix square = m * m;
    return (square - Matrix::Identity(m.rows(), m.cols()))
               .cwiseAbs()
               .maxCoeff() <= tol;
}

/// Largest |eigenvalue| of a Hermitian matrix (its operator norm).
template <typename Real>
Real hermitian_operator_norm(const LocalMatrix<Real> &h) {
    const LocalMatrix<Real> sym = (h + h.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<LocalMatrix<Real>> solver(
        sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Sum of |eigenvalues| of a Hermitian matrix.
template <typename Real> Real trace_norm(const LocalMatrix<Real> &h) {
    const LocalMatrix<Real> sym = (h + h.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<LocalMatrix<Real>> solver(
        sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

/// Matrix sign of a Hermitian matrix, with sign(0) = +1.
///
/// The result is the Hermitian involution A maximizing Re Tr(A h); the
/// maximum equals the trace norm of h.
template <typename Real> LocalMatrix<Real> msign(const LocalMatrix<Real> &h) {
    const Real scale = std::max<Real>(Real(1), h.cwiseAbs().maxCoeff());
    if (!is_hermitian(h, kStructuralTol * scale)) {
        throw ValidationError("msign: input matrix is not Hermitian");
    }
    const LocalMatrix<Real> sym = (h + h.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<LocalMatrix<Real>> solver(sym);
    const auto &mu = solver.eigenvalues();
    Eigen::Matrix<Real, Eigen::Dynamic, 1> signs(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        signs(i) = mu(i) >= Real(0) ? Real(1) : Real(-1);
    }
    const auto &v = solver.eigenvectors();
    LocalMatrix<Real> a =
        v * signs.template cast<Complex<Real>>().asDiagonal() * v.adjoint();
    return (a + a.adjoint()) / Real(2);
}

} // namespace bellviol
