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

#include "qdi/simulator.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "path_oracle.hpp"

namespace qdi {
namespace {

double sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

/// Three-outcome scenario whose bases are neither equal nor unbiased.
Scenario skewed_scenario() {
    RandomStream rng(314);
    auto a = standard_measurement("A", {"a0", "a1", "a2"}, {0.0, 1.0, 2.0});
    auto b = random_measurement(3, rng, "B");
    auto c = random_measurement(3, rng, "C");
    auto initial = normalize(StateVector{1.0, Complex(0.4, 0.3), -0.7});
    return Scenario("skewed", {a, b, c}, initial);
}

void expect_matches_oracle(const Scenario &scenario, const std::string &script_text, std::size_t trials,
                           std::uint64_t seed, double sigmas) {
    auto script = ExperimentScript::parse(script_text);
    auto report = run(scenario, script, Mode::interaction, trials, seed);
    auto paths = testing::enumerate_interaction(scenario, script.steps);
    auto exact = testing::step_marginals(scenario, script.steps, paths);
    for (std::size_t s = 0; s < exact.size(); ++s) {
        double total = 0.0;
        for (std::size_t k = 0; k < exact[s].size(); ++k) {
            total += report.step_frequencies[s][k];
            EXPECT_NEAR(report.step_frequencies[s][k], exact[s][k], sigmas * sigma(exact[s][k], trials) + 1e-12)
                << script_text << " step " << s << " outcome " << k;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(Run, observation_mode_never_invalidates) {
    auto report = run(table1_pair_scenario(), ExperimentScript::parse("A,B,A,B"), Mode::observation, 5000, 3);
    EXPECT_EQ(report.total_invalidations, 0U);
    for (const auto &[key, stat] : report.invalidation) EXPECT_EQ(stat.rate(), 0.0) << key;
    ASSERT_TRUE(report.invalidation.count("A|B"));
    EXPECT_EQ(report.invalidation.at("A|B").opportunities, 5000U);
    for (std::size_t t = 0; t < 50; ++t)
        for (const auto &e : report.events(t)) EXPECT_TRUE(e.invalidated.empty());
}

TEST(Run, observation_mode_any_scenario_any_seed) {
    auto skewed = skewed_scenario();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto report = run(skewed, ExperimentScript::parse("A,B,C,A,C,B,A"), Mode::observation, 500, seed);
        EXPECT_EQ(report.total_invalidations, 0U);
    }
}

TEST(Run, mub_pair_aba_invalidates_half_the_time) {
    auto scenario = table1_pair_scenario();
    const std::vector<std::string> script = {"A", "B", "A"};
    const double exact = testing::flip_probability(script, testing::enumerate_interaction(scenario, script), 2);
    EXPECT_NEAR(exact, 0.5, 1e-12);
    const std::size_t trials = 10000;
    auto report = run(scenario, ExperimentScript{script}, Mode::interaction, trials, 42);
    EXPECT_NEAR(report.invalidation.at("A|B").rate(), exact, 3.0 * sigma(exact, trials));
    std::size_t flagged = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        auto events = report.events(t);
        if (!events[2].invalidated.empty()) {
            ++flagged;
            EXPECT_EQ(events[2].invalidated[0].old_label, events[0].outcome_label);
            EXPECT_EQ(events[2].invalidated[0].new_label, events[2].outcome_label);
        }
    }
    EXPECT_EQ(flagged, report.total_invalidations);
}

TEST(Run, repeated_measurement_never_invalidates) {
    auto report = run(table1_pair_scenario(), ExperimentScript::parse("A,A,A"), Mode::interaction, 10000, 9);
    EXPECT_EQ(report.total_invalidations, 0U);
    EXPECT_EQ(report.invalidation.at("A|A").opportunities, 20000U);
}

TEST(Run, same_seed_same_log) {
    auto scenario = skewed_scenario();
    auto script = ExperimentScript::parse("A,B,C,B");
    auto r1 = run(scenario, script, Mode::interaction, 2000, 77);
    auto r2 = run(scenario, script, Mode::interaction, 2000, 77);
    for (std::size_t t = 0; t < 2000; ++t) ASSERT_EQ(r1.events(t), r2.events(t));
    EXPECT_EQ(r1.step_frequencies, r2.step_frequencies);
    auto r3 = run(scenario, script, Mode::interaction, 2000, 78);
    bool differs = false;
    for (std::size_t t = 0; t < 2000 && !differs; ++t) differs = r1.events(t) != r3.events(t);
    EXPECT_TRUE(differs);
}

TEST(Run, frequencies_match_exhaustive_oracle) {
    expect_matches_oracle(table1_pair_scenario(), "A,B,A,B,B,A", 10000, 5, 3.0);
    expect_matches_oracle(skewed_scenario(), "A,B,C,A,B,A", 10000, 6, 3.0);
    expect_matches_oracle(fourier_n_scenario(4), "B,A,B,A", 10000, 7, 3.0);
    auto pinned = table1_pair_scenario(normalize(StateVector{std::cos(0.3), std::polar(std::sin(0.3), 0.7)}));
    expect_matches_oracle(pinned, "B,A,B", 10000, 8, 3.0);
}

TEST(Run, compatible_measurements_reproduce_observation_statistics) {
    auto a = standard_measurement("A", {"a0", "a1", "a2"}, {0.0, 1.0, 2.0});
    auto initial = normalize(StateVector{0.2, Complex(0.5, 0.5), 0.6});
    Scenario compatible("compatible", {a, a.with_values("A2", {5.0, 6.0, 7.0})}, initial);
    auto script = ExperimentScript::parse("A,A2,A,A2");
    const std::size_t trials = 10000;
    auto inter = run(compatible, script, Mode::interaction, trials, 10);
    auto obs = run(compatible, script, Mode::observation, trials, 11);
    EXPECT_EQ(inter.total_invalidations, 0U);
    for (std::size_t s = 0; s < script.steps.size(); ++s)
        for (std::size_t k = 0; k < 3; ++k) {
            const double p = predict(initial, a)[k];
            EXPECT_NEAR(inter.step_frequencies[s][k], p, 3.0 * sigma(p, trials));
            EXPECT_NEAR(obs.step_frequencies[s][k], p, 3.0 * sigma(p, trials));
        }
    EXPECT_FALSE(classical_fit_check(inter));
}

TEST(Run, errors) {
    auto scenario = table1_pair_scenario();
    EXPECT_THROW(run(scenario, ExperimentScript::parse("A,Q"), Mode::interaction, 10, 0), ScriptError);
    EXPECT_THROW(run(scenario, ExperimentScript{}, Mode::interaction, 10, 0), ScriptError);
    EXPECT_THROW(run(scenario, ExperimentScript::parse("A"), Mode::interaction, 0, 0), DomainError);
    EXPECT_THROW(ExperimentScript::parse("A,,B"), ScriptError);
    EXPECT_THROW(parse_mode("quantum"), ScriptError);
}

TEST(OrderEffect, same_measurement_is_zero) {
    EXPECT_EQ(order_effect(table1_pair_scenario(), "A", "A", "B", 2000, 1), 0.0);
}

TEST(OrderEffect, compatible_pair_is_zero_within_noise) {
    auto a = standard_measurement("A", {"a0", "a1", "a2"}, {0.0, 1.0, 2.0});
    Scenario compatible("compatible", {a, a.with_values("A2", {5.0, 6.0, 7.0})});
    const std::size_t trials = 10000;
    // Both orders leave the probe in one of three equally likely eigenstates.
    const double bound = 0.5 * 3 * 2 * 3.0 * sigma(1.0 / 3.0, trials);
    EXPECT_LE(order_effect(compatible, "A", "A2", "A", trials, 2), bound);
}

double exact_order_effect(const Scenario &scenario, const std::string &m1, const std::string &m2,
                          const std::string &probe) {
    auto forward = testing::step_marginals(scenario, {m1, m2, probe},
                                           testing::enumerate_interaction(scenario, {m1, m2, probe}));
    auto backward = testing::step_marginals(scenario, {m2, m1, probe},
                                            testing::enumerate_interaction(scenario, {m2, m1, probe}));
    double tv = 0.0;
    for (std::size_t k = 0; k < forward[2].size(); ++k) tv += std::abs(forward[2][k] - backward[2][k]);
    return 0.5 * tv;
}

TEST(OrderEffect, table1_pair_from_x_up) {
    auto scenario = table1_pair_scenario(normalize(StateVector{1.0, 1.0}));
    const double exact = exact_order_effect(scenario, "A", "B", "A");
    EXPECT_NEAR(exact, 0.0, 1e-12);
    const std::size_t trials = 10000;
    EXPECT_LE(order_effect(scenario, "A", "B", "A", trials, 3), exact + 0.5 * 4 * 3.0 * sigma(0.5, trials));
}

TEST(OrderEffect, skewed_bases_match_oracle) {
    auto scenario = skewed_scenario();
    const double exact = exact_order_effect(scenario, "B", "C", "B");
    EXPECT_GT(exact, 0.01);
    const std::size_t trials = 20000;
    const double measured = order_effect(scenario, "B", "C", "B", trials, 4);
    EXPECT_NEAR(measured, exact, 0.5 * 6 * 3.0 * sigma(0.5, trials));
}

TEST(ClassicalFitCheck, examples) {
    auto scenario = table1_pair_scenario();
    auto script = ExperimentScript::parse("A,B,A");
    EXPECT_FALSE(classical_fit_check(run(scenario, script, Mode::observation, 10000, 1)));
    EXPECT_TRUE(classical_fit_check(run(scenario, script, Mode::interaction, 10000, 1)));
    // Only repeats of one measurement: nothing to reject.
    EXPECT_FALSE(classical_fit_check(run(scenario, ExperimentScript::parse("A,A,A"), Mode::interaction, 10000, 1)));
}

TEST(RunReport, order_effect_map_covers_used_pairs) {
    auto report = run(skewed_scenario(), ExperimentScript::parse("A,B,C"), Mode::interaction, 500, 1);
    EXPECT_EQ(report.order_effect.size(), 3U);
    EXPECT_TRUE(report.order_effect.count("A,B"));
    auto obs = run(skewed_scenario(), ExperimentScript::parse("A,B,C"), Mode::observation, 500, 1);
    for (const auto &[key, tv] : obs.order_effect) EXPECT_EQ(tv, 0.0) << key;
}

}  // namespace
}  // namespace qdi
