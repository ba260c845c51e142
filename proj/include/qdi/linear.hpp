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

// Dense complex vectors and matrices at the small dimensions used by the
// simulator (a few to a few dozen outcomes).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdi/errors.hpp"

namespace qdi {

using Complex = std::complex<double>;

/// Squared-norm tolerance for anything treated as a physical state.
inline constexpr double NORM_TOL = 1e-9;
/// Pairwise inner-product tolerance for orthonormal bases.
inline constexpr double ORTHO_TOL = 1e-9;
/// Moduli below this are treated as zero when fixing the global phase.
inline constexpr double CANON_TOL = 1e-12;
/// Max entry-wise deviation from A = A^dagger accepted as Hermitian.
inline constexpr double HERMITIAN_TOL = 1e-10;

namespace detail {
inline bool all_finite(std::span<const Complex> values) {
    return std::all_of(values.begin(), values.end(),
                       [](const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}
}  // namespace detail

/// Complex amplitude vector. Not necessarily normalized; use normalize() to get
/// the canonical representative of a physical state.
class StateVector {
   public:
    StateVector() = default;

    explicit StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.empty()) {
            throw DimensionError("StateVector: dimension must be positive");
        }
        if (!detail::all_finite(amps_)) {
            throw DomainError("StateVector: non-finite amplitude");
        }
    }

    StateVector(std::initializer_list<Complex> amplitudes) : StateVector(std::vector<Complex>(amplitudes)) {}

    /// Standard basis vector e_k.
    static StateVector basis(std::size_t dim, std::size_t k) {
        if (k >= dim) {
            throw DimensionError("StateVector::basis: index out of range");
        }
        std::vector<Complex> amps(dim, Complex{0.0, 0.0});
        amps[k] = 1.0;
        return StateVector(std::move(amps));
    }

    std::size_t dim() const { return amps_.size(); }
    const Complex &operator[](std::size_t k) const { return amps_[k]; }
    std::span<const Complex> amplitudes() const { return amps_; }
    auto begin() const { return amps_.begin(); }
    auto end() const { return amps_.end(); }

    StateVector operator-() const {
        auto out = amps_;
        for (auto &z : out) z = -z;
        return StateVector(std::move(out));
    }

    StateVector scaled(Complex factor) const {
        auto out = amps_;
        for (auto &z : out) z *= factor;
        return StateVector(std::move(out));
    }

    bool operator==(const StateVector &) const = default;

   private:
    std::vector<Complex> amps_;
};

/// <a|b> = sum_k conj(a_k) b_k; conjugate-linear in the first argument.
inline Complex inner_product(const StateVector &a, const StateVector &b) {
    require_same_dim(a.dim(), b.dim(), "inner_product");
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.dim(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

inline double squared_norm(const StateVector &a) {
    double acc = 0.0;
    for (const auto &z : a) acc += std::norm(z);
    return acc;
}

inline bool is_unit(const StateVector &a, double tol = NORM_TOL) { return std::abs(squared_norm(a) - 1.0) <= tol; }

/// Rotates the global phase so the first component with modulus above
/// CANON_TOL is real and positive. Leaves the norm untouched.
inline StateVector canonical_phase(const StateVector &a) {
    for (const auto &z : a) {
        double mod = std::abs(z);
        if (mod > CANON_TOL) {
            auto out = a.scaled(std::conj(z) / mod);
            // Kill the rounding residue on the pivot so canonicalization is idempotent.
            std::vector<Complex> amps(out.begin(), out.end());
            for (std::size_t k = 0; k < amps.size(); ++k) {
                if (std::abs(a[k]) > CANON_TOL) {
                    amps[k] = Complex{std::abs(amps[k]), 0.0};
                    break;
                }
            }
            return StateVector(std::move(amps));
        }
    }
    return a;
}

/// Unit norm plus canonical global phase.
inline StateVector normalize(const StateVector &a) {
    double n2 = squared_norm(a);
    if (!(n2 > CANON_TOL * CANON_TOL)) {
        throw ZeroVectorError("normalize: zero vector");
    }
    return canonical_phase(a.scaled(1.0 / std::sqrt(n2)));
}

inline double max_abs_diff(const StateVector &a, const StateVector &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

/// True when a and b describe the same physical state (equal up to global phase).
inline bool same_ray(const StateVector &a, const StateVector &b, double tol = NORM_TOL) {
    return std::abs(std::norm(inner_product(a, b)) - squared_norm(a) * squared_norm(b)) <= tol;
}

/// Row-major dense complex matrix.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("ComplexMatrix: dimensions must be positive");
        }
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows == 0 || cols == 0 || entries_.size() != rows * cols) {
            throw DimensionError("ComplexMatrix: rows*cols must equal the number of entries");
        }
        if (!detail::all_finite(entries_)) {
            throw DomainError("ComplexMatrix: non-finite entry");
        }
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        for (const auto &r : rows) {
            if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
            entries_.insert(entries_.end(), r.begin(), r.end());
        }
        if (rows_ == 0 || cols_ == 0) throw DimensionError("ComplexMatrix: dimensions must be positive");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// Matrix whose j-th column is columns[j].
    static ComplexMatrix from_columns(std::span<const StateVector> columns) {
        if (columns.empty()) throw DimensionError("from_columns: no columns");
        std::size_t n = columns.front().dim();
        ComplexMatrix m(n, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            require_same_dim(columns[j].dim(), n, "from_columns");
            for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    std::span<const Complex> entries() const { return entries_; }

    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    StateVector column(std::size_t c) const {
        std::vector<Complex> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return StateVector(std::move(out));
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto &z : entries_) acc += std::norm(z);
        return std::sqrt(acc);
    }

    bool operator==(const ComplexMatrix &) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

inline ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a.cols(), b.rows(), "matrix product");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline StateVector operator*(const ComplexMatrix &m, const StateVector &v) {
    require_same_dim(m.cols(), v.dim(), "matrix-vector product");
    std::vector<Complex> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return StateVector(std::move(out));
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return worst;
}

/// Max entry-wise deviation of m^dagger m from the identity is at most tol.
inline bool is_unitary(const ComplexMatrix &m, double tol) {
    if (!m.is_square()) throw DimensionError("is_unitary: matrix is not square");
    return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) <= tol;
}

inline bool is_hermitian(const ComplexMatrix &m, double tol = HERMITIAN_TOL) {
    if (!m.is_square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

/// Outer product |a><b|.
inline ComplexMatrix outer(const StateVector &a, const StateVector &b) {
    ComplexMatrix out(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

}  // namespace qdi
