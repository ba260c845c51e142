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

#include "qdi/measurement.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "qdi/scenario.hpp"

namespace qdi {
namespace {

const double kHalfRoot2 = std::sqrt(2.0) / 2.0;

Measurement measurement_a() { return standard_measurement("A", {"a+", "a-"}, {1.0, -1.0}); }

/// Hadamard-rotated basis: b+ = (1, 1)/sqrt 2, b- = (-1, 1)/sqrt 2.
Measurement measurement_b() {
    return Measurement("B", {{"b+", 1.0, StateVector{kHalfRoot2, kHalfRoot2}},
                             {"b-", -1.0, StateVector{-kHalfRoot2, kHalfRoot2}}});
}

const StateVector kZUp{1.0, 0.0};
const StateVector kXUp{kHalfRoot2, kHalfRoot2};

TEST(Measurement, validates_basis) {
    EXPECT_THROW(Measurement("M", {{"x", 1.0, StateVector{1.0, 0.0}}, {"y", 2.0, StateVector{kHalfRoot2, kHalfRoot2}}}),
                 DefinitionError);
    EXPECT_THROW(Measurement("M", {{"x", 1.0, StateVector{1.0, 0.0}}, {"x", 2.0, StateVector{0.0, 1.0}}}),
                 DefinitionError);
    EXPECT_THROW(Measurement("M", {{"x", 1.0, StateVector{2.0, 0.0}}, {"y", 2.0, StateVector{0.0, 1.0}}}),
                 DefinitionError);
    EXPECT_THROW(Measurement("M", {{"x", 1.0, StateVector{1.0, 0.0, 0.0}}}), DimensionError);
    // Equal values are allowed at construction.
    EXPECT_NO_THROW(standard_measurement("M", {"x", "y"}, {1.0, 1.0}));
}

TEST(TransitionProbability, examples) {
    EXPECT_NEAR(transition_probability(kXUp, kXUp), 1.0, 1e-15);
    EXPECT_EQ(transition_probability(kZUp, StateVector{0.0, 1.0}), 0.0);
    EXPECT_NEAR(transition_probability(kZUp, kXUp), 0.5, 1e-15);
    EXPECT_THROW(transition_probability(kZUp, StateVector::basis(3, 0)), DimensionError);
}

TEST(TransitionProbability, symmetric) {
    RandomStream rng(8);
    for (int i = 0; i < 100; ++i) {
        auto a = haar_random_state(4, rng), b = haar_random_state(4, rng);
        EXPECT_NEAR(transition_probability(a, b), transition_probability(b, a), 1e-15);
    }
}

TEST(Predict, examples) {
    auto b = measurement_b();
    auto d = predict(b.outcome(1).eigenstate, b);
    EXPECT_NEAR(d[0], 0.0, 1e-15);
    EXPECT_NEAR(d[1], 1.0, 1e-15);

    auto from_x = predict(kXUp, measurement_a());
    EXPECT_NEAR(from_x[0], 0.5, 1e-15);
    EXPECT_NEAR(from_x[1], 0.5, 1e-15);
    EXPECT_EQ(from_x.entries[0].label, "a+");

    EXPECT_THROW(predict(StateVector::basis(3, 0), measurement_a()), DimensionError);
}

TEST(Predict, sums_to_one_and_matches_projector_route) {
    RandomStream rng(9);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = 2 + i % 7;
        auto s = haar_random_state(n, rng);
        auto m = random_measurement(n, rng);
        auto d = predict(s, m);
        EXPECT_NEAR(d.total(), 1.0, 1e-9);
        for (std::size_t k = 0; k < n; ++k) {
            auto proj = outer(m.outcome(k).eigenstate, m.outcome(k).eigenstate);
            EXPECT_NEAR(inner_product(s, proj * s).real(), d[k], 1e-9);
        }
    }
}

TEST(Predict, unitary_invariance) {
    RandomStream rng(10);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + i % 5;
        auto s = haar_random_state(n, rng);
        auto m = random_measurement(n, rng);
        auto u = haar_random_unitary(n, rng);
        std::vector<Outcome> rotated;
        for (const auto &o : m.outcomes()) rotated.push_back({o.label, o.value, u * o.eigenstate});
        auto d1 = predict(s, m);
        auto d2 = predict(u * s, Measurement("R'", rotated));
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(d1[k], d2[k], 1e-9);
    }
}

TEST(Collapse, examples) {
    auto a = measurement_a();
    RandomStream rng(12);
    auto s = haar_random_state(2, rng);
    EXPECT_EQ(collapse(s, a, 1), a.outcome(1).eigenstate);
    EXPECT_EQ(collapse(kXUp, a, 0), kZUp);
    auto once = collapse(kZUp, measurement_b(), 1);
    EXPECT_EQ(collapse(once, measurement_b(), 1), once);
}

TEST(Collapse, impossible_outcome_throws) {
    EXPECT_THROW(collapse(kZUp, measurement_a(), 1), ImpossibleOutcomeError);
}

TEST(Sample, eigenstate_always_reproduced) {
    auto b = measurement_b();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomStream rng(seed);
        EXPECT_EQ(sample(b.outcome(1).eigenstate, b, rng).index, 1U);
    }
}

TEST(Sample, frequency_within_binomial_bound) {
    // 10^4 draws of x-up under A; 3 sigma of a fair coin.
    RandomStream rng(42);
    auto a = measurement_a();
    int plus = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) plus += sample(kXUp, a, rng).index == 0 ? 1 : 0;
    EXPECT_NEAR(plus / static_cast<double>(draws), 0.5, 3.0 * std::sqrt(0.25 / draws));
}

TEST(Sample, repeatability_is_structural) {
    RandomStream rng(13);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 2 + i % 7;
        auto s = haar_random_state(n, rng);
        auto m = random_measurement(n, rng);
        auto first = sample(s, m, rng);
        auto second = sample(first.state, m, rng);
        ASSERT_EQ(first.index, second.index);
        EXPECT_NEAR(second.probability, 1.0, 1e-12);
    }
}

TEST(Sample, deterministic_given_stream) {
    auto m = measurement_b();
    RandomStream r1(77), r2(77);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sample(kZUp, m, r1).index, sample(kZUp, m, r2).index);
}

TEST(Sample, inverse_cdf_in_declared_order) {
    // P = (0.25, 0.75); u below 0.25 picks the first outcome.
    StateVector s{0.5, std::sqrt(0.75)};
    auto a = measurement_a();
    int first = 0;
    RandomStream rng(5);
    RandomStream probe(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = probe.uniform();
        const auto idx = sample(s, a, rng).index;
        EXPECT_EQ(idx, u < 0.25 ? 0U : 1U);
        first += idx == 0;
    }
    EXPECT_GT(first, 0);
}

TEST(AreCompatible, examples) {
    auto a = measurement_a();
    auto b = measurement_b();
    EXPECT_TRUE(are_compatible(a, a));
    EXPECT_FALSE(are_compatible(a, b));
    EXPECT_FALSE(are_compatible(b, a));
    EXPECT_TRUE(are_compatible(a, a.with_values("A2", {2.0, -2.0})));
    // Reordered outcomes still share final states.
    EXPECT_TRUE(are_compatible(a, standard_measurement("A'", {"x", "y"}, {5.0, 6.0})));
    EXPECT_THROW(are_compatible(a, fourier_basis(3)), DimensionError);
}

TEST(AreCompatible, reflexive_and_symmetric_on_random_pairs) {
    RandomStream rng(14);
    for (int i = 0; i < 50; ++i) {
        auto m1 = random_measurement(3, rng), m2 = random_measurement(3, rng);
        EXPECT_TRUE(are_compatible(m1, m1));
        EXPECT_EQ(are_compatible(m1, m2), are_compatible(m2, m1));
    }
}

TEST(BuildOperator, examples) {
    auto op_a = build_operator(measurement_a());
    EXPECT_LE(max_abs_diff(op_a.matrix(), ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}), 1e-15);
    auto op_b = build_operator(measurement_b());
    EXPECT_LE(max_abs_diff(op_b.matrix(), ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}), 1e-15);
}

TEST(BuildOperator, eigen_action_and_round_trip) {
    RandomStream rng(15);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 2 + i % 7;
        auto m = random_measurement(n, rng);
        auto op = build_operator(m);
        for (const auto &o : m.outcomes()) {
            EXPECT_LE(max_abs_diff(op.matrix() * o.eigenstate, o.eigenstate.scaled(o.value)), 1e-9);
        }
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < n; ++k) labels.push_back("k" + std::to_string(k));
        auto back = measurement_from_operator(op, labels);
        EXPECT_LE(max_abs_diff(build_operator(back).matrix(), op.matrix()), 1e-8);
        for (const auto &o : back.outcomes()) {
            bool found = false;
            for (const auto &orig : m.outcomes()) {
                if (std::abs(orig.value - o.value) < 1e-8) {
                    EXPECT_TRUE(same_ray(orig.eigenstate, o.eigenstate, 1e-8));
                    found = true;
                }
            }
            EXPECT_TRUE(found);
        }
    }
}

TEST(MeasurementFromOperator, examples) {
    auto diag = measurement_from_operator(HermitianOperator(ComplexMatrix{{5.0, 0.0}, {0.0, 7.0}}), {"five", "seven"});
    EXPECT_EQ(diag.outcome(0).value, 5.0);
    EXPECT_EQ(diag.outcome(1).value, 7.0);
    EXPECT_EQ(diag.outcome(0).eigenstate, StateVector::basis(2, 0));

    auto pauli = measurement_from_operator(HermitianOperator(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}), {"-", "+"});
    EXPECT_NEAR(pauli.outcome(0).value, -1.0, 1e-12);
    EXPECT_NEAR(pauli.outcome(1).value, 1.0, 1e-12);
    EXPECT_TRUE(same_ray(pauli.outcome(1).eigenstate, kXUp, 1e-12));
    EXPECT_TRUE(are_compatible(pauli, measurement_b()));
}

TEST(MeasurementFromOperator, errors) {
    EXPECT_THROW(measurement_from_operator(HermitianOperator(ComplexMatrix::identity(2)), {"x", "y"}),
                 DegenerateSpectrumError);
    EXPECT_THROW(measurement_from_operator(HermitianOperator(ComplexMatrix::identity(2)), {"x"}), DimensionError);
    EXPECT_THROW(HermitianOperator(ComplexMatrix{{0.0, 1.0}, {2.0, 0.0}}), NotHermitianError);
}

TEST(Expectation, examples) {
    auto a = measurement_a();
    EXPECT_NEAR(expectation(a.outcome(1).eigenstate, build_operator(a)), -1.0, 1e-15);
    EXPECT_NEAR(expectation(kXUp, build_operator(a)), 0.0, 1e-15);
    StateVector s{std::sqrt(0.36), std::sqrt(0.64)};
    auto op = HermitianOperator(ComplexMatrix{{2.0, 0.0}, {0.0, 5.0}});
    EXPECT_NEAR(expectation(s, op), 3.92, 1e-12);
    EXPECT_THROW(expectation(StateVector::basis(3, 0), op), DimensionError);
}

TEST(Expectation, two_routes_agree) {
    RandomStream rng(16);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = 2 + i % 7;
        auto s = haar_random_state(n, rng);
        auto m = random_measurement(n, rng);
        auto d = predict(s, m);
        double weighted = 0.0;
        for (std::size_t k = 0; k < n; ++k) weighted += m.outcome(k).value * d[k];
        EXPECT_NEAR(expectation(s, build_operator(m)), weighted, 1e-9);
    }
}

}  // namespace
}  // namespace qdi
