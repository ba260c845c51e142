// Copyright 2026 The qdi Authors
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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qdi/linear.hpp"

namespace qdi {

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascend and
/// eigenvectors[i] belongs to eigenvalues[i].
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    std::vector<StateVector> eigenvectors;

    /// sum_i eigenvalues[i] |v_i><v_i|
    ComplexMatrix reconstruct() const {
        std::size_t n = eigenvectors.empty() ? 0 : eigenvectors.front().dim();
        ComplexMatrix out(n, n);
        for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
            const auto &v = eigenvectors[k];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out(i, j) += eigenvalues[k] * v[i] * std::conj(v[j]);
        }
        return out;
    }
};

inline constexpr std::size_t MAX_EIGEN_DIM = 64;
inline constexpr int MAX_JACOBI_SWEEPS = 100;
inline constexpr double JACOBI_REL_TOL = 1e-12;

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix &a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

/// Applies a <- U^dagger a U and v <- v U for the unitary U acting on
/// coordinates (p, q) that annihilates a(p, q).
inline void jacobi_rotate(ComplexMatrix &a, ComplexMatrix &v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const Complex phase = apq / mag;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    // Real symmetric rotation on [[app, mag], [mag, aqq]].
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
    const Complex u_pp = c;
    const Complex u_pq = s;
    const Complex u_qp = -s * std::conj(phase);
    const Complex u_qq = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {  // a <- a U
        const Complex akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * u_pp + akq * u_qp;
        a(k, q) = akp * u_pq + akq * u_qq;
    }
    for (std::size_t k = 0; k < n; ++k) {  // a <- U^dagger a
        const Complex apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
        a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * u_pp + vkq * u_qp;
        v(k, q) = vkp * u_pq + vkq * u_qq;
    }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for dense Hermitian matrices up to 64x64.
/// Sweeps until the off-diagonal Frobenius norm drops to 1e-12 of the input's
/// Frobenius norm. Eigenvectors are returned in canonical phase.
inline EigenDecomposition hermitian_eigen(const ComplexMatrix &m) {
    if (!m.is_square()) throw DimensionError("hermitian_eigen: matrix is not square");
    if (m.rows() > MAX_EIGEN_DIM) throw DimensionError("hermitian_eigen: dimension exceeds 64");
    if (!is_hermitian(m, HERMITIAN_TOL)) throw NotHermitianError("hermitian_eigen: matrix is not Hermitian");

    const std::size_t n = m.rows();
    // Symmetrize so rounding in the input cannot leak into the rotations.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double threshold = JACOBI_REL_TOL * m.frobenius_norm();
    int sweep = 0;
    while (detail::off_diagonal_norm(a) > threshold) {
        if (sweep++ == MAX_JACOBI_SWEEPS) {
            throw ConvergenceError("hermitian_eigen: no convergence after 100 sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenDecomposition out;
    out.eigenvalues.reserve(n);
    out.eigenvectors.reserve(n);
    for (auto k : order) {
        out.eigenvalues.push_back(a(k, k).real());
        out.eigenvectors.push_back(normalize(v.column(k)));
    }
    return out;
}

}  // namespace qdi
