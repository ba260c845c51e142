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

#include "qdi/linear.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "qdi/random.hpp"

namespace qdi {
namespace {

const double kHalfRoot2 = std::sqrt(2.0) / 2.0;

TEST(InnerProduct, unit_vector_with_itself_is_one) {
    RandomStream rng(1);
    for (int i = 0; i < 20; ++i) {
        auto v = haar_random_state(5, rng);
        auto z = inner_product(v, v);
        EXPECT_NEAR(z.real(), 1.0, 1e-12);
        EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    }
}

TEST(InnerProduct, standard_basis_is_orthogonal) {
    EXPECT_EQ(inner_product(StateVector::basis(2, 0), StateVector::basis(2, 1)), Complex(0.0, 0.0));
}

TEST(InnerProduct, z_up_against_x_up) {
    StateVector z_up{1.0, 0.0};
    StateVector x_up{kHalfRoot2, kHalfRoot2};
    auto z = inner_product(z_up, x_up);
    EXPECT_NEAR(z.real(), 0.70710678, 1e-8);
    EXPECT_EQ(z.imag(), 0.0);
}

TEST(InnerProduct, conjugate_linear_in_first_argument) {
    StateVector a{Complex(0.0, 1.0), 0.0};
    StateVector b{1.0, 0.0};
    EXPECT_EQ(inner_product(a, b), Complex(0.0, -1.0));
}

TEST(InnerProduct, dimension_mismatch_throws) {
    EXPECT_THROW(inner_product(StateVector::basis(2, 0), StateVector::basis(3, 0)), DimensionError);
}

TEST(InnerProduct, conjugate_symmetric_and_linear_in_second_argument) {
    RandomStream rng(7);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + i % 6;
        auto a = haar_random_state(n, rng), b = haar_random_state(n, rng), c = haar_random_state(n, rng);
        Complex alpha{rng.normal(), rng.normal()}, beta{rng.normal(), rng.normal()};
        EXPECT_LT(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 1e-12);
        std::vector<Complex> mix(n);
        for (std::size_t k = 0; k < n; ++k) mix[k] = alpha * b[k] + beta * c[k];
        auto lhs = inner_product(a, StateVector(mix));
        auto rhs = alpha * inner_product(a, b) + beta * inner_product(a, c);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12);
    }
}

TEST(SquaredNorm, examples) {
    EXPECT_EQ(squared_norm(StateVector{1.0, 0.0}), 1.0);
    EXPECT_NEAR(squared_norm(StateVector{kHalfRoot2, kHalfRoot2}), 1.0, 1e-15);
    EXPECT_NEAR(squared_norm(StateVector{0.6, Complex(0.0, 0.8)}), 1.0, 1e-15);
}

TEST(Normalize, examples) {
    EXPECT_EQ(normalize(StateVector{2.0, 0.0}), (StateVector{1.0, 0.0}));
    auto v = normalize(StateVector{0.0, Complex(0.0, 3.0)});
    EXPECT_EQ(v[0], Complex(0.0, 0.0));
    EXPECT_EQ(v[1], Complex(1.0, 0.0));
    auto w = normalize(StateVector{1.0, 1.0});
    EXPECT_NEAR(w[0].real(), kHalfRoot2, 1e-15);
    EXPECT_NEAR(w[1].real(), kHalfRoot2, 1e-15);
}

TEST(Normalize, zero_vector_throws) {
    EXPECT_THROW(normalize(StateVector{0.0, 0.0}), ZeroVectorError);
    EXPECT_THROW(normalize(StateVector{1e-13, 0.0}), ZeroVectorError);
}

TEST(Normalize, canonical_form_and_idempotence) {
    RandomStream rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<Complex> amps(4);
        for (auto &z : amps) z = Complex(rng.normal(), rng.normal());
        auto once = normalize(StateVector(amps));
        auto twice = normalize(once);
        EXPECT_NEAR(squared_norm(once), 1.0, NORM_TOL);
        EXPECT_GT(once[0].real(), 0.0);
        EXPECT_EQ(once[0].imag(), 0.0);
        EXPECT_LE(max_abs_diff(once, twice), 1e-12);
    }
}

TEST(Normalize, global_phase_is_removed) {
    RandomStream rng(11);
    auto v = haar_random_state(3, rng);
    auto rotated = v.scaled(std::polar(1.0, 1.234));
    EXPECT_LE(max_abs_diff(normalize(rotated), v), 1e-12);
    EXPECT_TRUE(same_ray(rotated, v));
}

TEST(StateVector, rejects_non_finite) {
    EXPECT_THROW(StateVector({std::nan(""), 0.0}), DomainError);
    EXPECT_THROW(StateVector(std::vector<Complex>{}), DimensionError);
}

TEST(IsUnitary, examples) {
    ComplexMatrix eq1{{kHalfRoot2, kHalfRoot2}, {-kHalfRoot2, kHalfRoot2}};
    EXPECT_TRUE(is_unitary(eq1, 1e-12));
    EXPECT_TRUE(is_unitary(ComplexMatrix::identity(7), 0.0));
    ComplexMatrix shear{{1.0, 1.0}, {0.0, 1.0}};
    EXPECT_FALSE(is_unitary(shear, 1e-9));
}

TEST(IsUnitary, non_square_throws) { EXPECT_THROW(is_unitary(ComplexMatrix(2, 3), 1e-9), DimensionError); }

TEST(ComplexMatrix, shape_invariant) {
    EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
    ComplexMatrix m(2, 3);
    EXPECT_EQ(m.entries().size(), 6U);
}

TEST(Completeness, probabilities_over_any_orthonormal_basis_sum_to_one) {
    RandomStream rng(5);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + i % 8;
        auto u = haar_random_unitary(n, rng);
        auto s = haar_random_state(n, rng);
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) total += std::norm(inner_product(s, u.column(k)));
        EXPECT_NEAR(total, 1.0, 1e-9);
        EXPECT_TRUE(is_unitary(u, 1e-12));
    }
}

}  // namespace
}  // namespace qdi
