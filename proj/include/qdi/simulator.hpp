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

// Monte-Carlo engine for scripted measurement sequences. Observation mode
// freezes one value per measurement per trial (nothing is ever disturbed);
// interaction mode samples with collapse, so incompatible measurements can
// invalidate earlier results.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "qdi/measurement.hpp"
#include "qdi/random.hpp"
#include "qdi/scenario.hpp"

namespace qdi {

enum class Mode { observation, interaction };

inline const char *to_string(Mode mode) { return mode == Mode::observation ? "observation" : "interaction"; }

inline Mode parse_mode(const std::string &text) {
    if (text == "observation") return Mode::observation;
    if (text == "interaction") return Mode::interaction;
    throw ScriptError("unknown mode '" + text + "' (expected observation or interaction)");
}

/// Compact per-trial record: outcome index and the overwritten outcome index
/// (or -1) for every step.
struct TrialLog {
    std::vector<std::uint16_t> outcomes;
    std::vector<double> probabilities;
    std::vector<int> invalidated_from;
};

struct PairStatistic {
    std::uint64_t opportunities = 0;
    std::uint64_t invalidations = 0;
    double rate() const { return opportunities == 0 ? 0.0 : static_cast<double>(invalidations) / opportunities; }
};

struct RunReport {
    Mode mode = Mode::interaction;
    std::string scenario;
    std::vector<std::string> script;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    /// Outcome labels and values of the measurement at each step.
    std::vector<std::vector<std::string>> step_labels;
    std::vector<std::vector<double>> step_values;
    std::vector<TrialLog> logs;
    /// step_frequencies[s][k]: fraction of trials with outcome k at step s.
    std::vector<std::vector<double>> step_frequencies;
    /// Keyed "X|Y": re-measurements of X with Y measured in between ("X|X"
    /// for immediate repeats).
    std::map<std::string, PairStatistic> invalidation;
    /// Keyed "X,Y": total-variation distance of X's outcome distribution after
    /// (X, Y, X) vs (Y, X, X).
    std::map<std::string, double> order_effect;
    std::uint64_t total_invalidations = 0;

    std::vector<MeasurementEvent> events(std::size_t trial) const {
        const auto &log = logs.at(trial);
        std::vector<MeasurementEvent> out;
        for (std::size_t s = 0; s < script.size(); ++s) {
            MeasurementEvent e;
            e.step_index = s;
            e.measurement = script[s];
            e.outcome_label = step_labels[s][log.outcomes[s]];
            e.value = step_values[s][log.outcomes[s]];
            e.probability = log.probabilities[s];
            if (log.invalidated_from[s] >= 0) {
                e.invalidated.push_back({script[s], step_labels[s][log.invalidated_from[s]], e.outcome_label});
            }
            out.push_back(std::move(e));
        }
        return out;
    }
};

namespace detail {

inline TrialLog run_trial(const Scenario &scenario, const std::vector<std::size_t> &steps, Mode mode,
                          std::uint64_t seed, std::uint64_t trial) {
    auto rng = RandomStream::substream(seed, trial);
    StateVector state = scenario.initial_state ? *scenario.initial_state : haar_random_state(scenario.dim, rng);

    TrialLog log;
    log.outcomes.reserve(steps.size());
    log.probabilities.reserve(steps.size());
    log.invalidated_from.reserve(steps.size());
    std::vector<int> last(scenario.measurements.size(), -1);

    if (mode == Mode::observation) {
        // Every measurement family gets one hidden value, frozen for the trial.
        std::vector<SampledOutcome> hidden;
        for (const auto &m : scenario.measurements) hidden.push_back(sample(state, m, rng));
        for (auto k : steps) {
            const bool first = last[k] < 0;
            log.outcomes.push_back(static_cast<std::uint16_t>(hidden[k].index));
            log.probabilities.push_back(first ? hidden[k].probability : 1.0);
            log.invalidated_from.push_back(-1);
            last[k] = static_cast<int>(hidden[k].index);
        }
        return log;
    }

    for (auto k : steps) {
        auto drawn = sample(state, scenario.measurements[k], rng);
        state = drawn.state;
        const int idx = static_cast<int>(drawn.index);
        log.outcomes.push_back(static_cast<std::uint16_t>(drawn.index));
        log.probabilities.push_back(drawn.probability);
        log.invalidated_from.push_back(last[k] >= 0 && last[k] != idx ? last[k] : -1);
        last[k] = idx;
    }
    return log;
}

inline std::vector<TrialLog> run_trials(const Scenario &scenario, const std::vector<std::size_t> &steps, Mode mode,
                                        std::size_t trials, std::uint64_t seed) {
    std::vector<TrialLog> logs(trials);
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, trials / 1000));
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) logs[t] = run_trial(scenario, steps, mode, seed, t);
        return logs;
    }
    // Each worker owns a contiguous slice; trial streams depend only on (seed, t).
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t t = w * trials / workers; t < (w + 1) * trials / workers; ++t) {
                logs[t] = run_trial(scenario, steps, mode, seed, t);
            }
        });
    }
    for (auto &th : pool) th.join();
    return logs;
}

inline double total_variation(const std::vector<double> &p, const std::vector<double> &q) {
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) acc += std::abs(p[k] - q[k]);
    return 0.5 * acc;
}

inline std::vector<double> probe_frequencies(const Scenario &scenario, const std::vector<std::size_t> &steps,
                                             Mode mode, std::size_t trials, std::uint64_t seed) {
    auto logs = run_trials(scenario, steps, mode, trials, seed);
    std::vector<double> freq(scenario.measurements[steps.back()].dim(), 0.0);
    for (const auto &log : logs) freq[log.outcomes.back()] += 1.0;
    for (auto &f : freq) f /= static_cast<double>(trials);
    return freq;
}

}  // namespace detail

/// Total-variation distance between the probe's outcome distribution after
/// (m1, m2, probe) and after (m2, m1, probe), both from the scenario's initial
/// state and with the same seed.
inline double order_effect(const Scenario &scenario, const std::string &m1, const std::string &m2,
                           const std::string &probe, std::size_t trials, std::uint64_t seed,
                           Mode mode = Mode::interaction) {
    if (trials == 0) throw DomainError("order_effect: trials must be at least 1");
    auto forward = ExperimentScript{{m1, m2, probe}}.resolve(scenario);
    auto backward = ExperimentScript{{m2, m1, probe}}.resolve(scenario);
    return detail::total_variation(detail::probe_frequencies(scenario, forward, mode, trials, seed),
                                   detail::probe_frequencies(scenario, backward, mode, trials, seed));
}

/// Runs `trials` independent repetitions of the script. Trial t draws from
/// RandomStream::substream(seed, t), so the report is a pure function of its
/// arguments.
inline RunReport run(const Scenario &scenario, const ExperimentScript &script, Mode mode, std::size_t trials,
                     std::uint64_t seed) {
    if (trials == 0) throw DomainError("run: trials must be at least 1");
    const auto steps = script.resolve(scenario);

    RunReport report;
    report.mode = mode;
    report.scenario = scenario.name;
    report.script = script.steps;
    report.trials = trials;
    report.seed = seed;
    for (auto k : steps) {
        std::vector<std::string> labels;
        std::vector<double> values;
        for (const auto &o : scenario.measurements[k].outcomes()) {
            labels.push_back(o.label);
            values.push_back(o.value);
        }
        report.step_labels.push_back(std::move(labels));
        report.step_values.push_back(std::move(values));
    }
    report.logs = detail::run_trials(scenario, steps, mode, trials, seed);

    std::vector<std::vector<std::uint64_t>> counts;
    for (auto k : steps) counts.emplace_back(scenario.measurements[k].dim(), 0);
    for (const auto &log : report.logs) {
        std::vector<std::size_t> last_step(scenario.measurements.size(), steps.size());
        for (std::size_t s = 0; s < steps.size(); ++s) {
            ++counts[s][log.outcomes[s]];
            const auto k = steps[s];
            if (last_step[k] != steps.size()) {
                std::set<std::size_t> between;
                for (std::size_t r = last_step[k] + 1; r < s; ++r)
                    if (steps[r] != k) between.insert(steps[r]);
                if (between.empty()) between.insert(k);
                const bool flipped = log.invalidated_from[s] >= 0;
                for (auto y : between) {
                    auto &stat = report.invalidation[scenario.measurements[k].name() + "|" +
                                                     scenario.measurements[y].name()];
                    ++stat.opportunities;
                    if (flipped) ++stat.invalidations;
                }
                if (flipped) ++report.total_invalidations;
            }
            last_step[k] = s;
        }
    }
    for (const auto &row : counts) {
        std::vector<double> freq;
        for (auto c : row) freq.push_back(static_cast<double>(c) / static_cast<double>(trials));
        report.step_frequencies.push_back(std::move(freq));
    }

    std::vector<std::size_t> used(steps.begin(), steps.end());
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (std::size_t i = 0; i < used.size(); ++i)
        for (std::size_t j = i + 1; j < used.size(); ++j) {
            const auto &x = scenario.measurements[used[i]].name();
            const auto &y = scenario.measurements[used[j]].name();
            report.order_effect[x + "," + y] = order_effect(scenario, x, y, x, trials, mix_seed(seed ^ 0x0de5), mode);
        }
    return report;
}

/// True when an interaction-mode report cannot come from any fixed-value
/// model: some pair of distinct measurements shows an invalidation rate more
/// than five binomial standard errors above zero. Fixed-value models never
/// invalidate, so observation-mode reports always fit.
inline bool classical_fit_check(const RunReport &report) {
    if (report.mode == Mode::observation) return false;
    for (const auto &[key, stat] : report.invalidation) {
        const auto bar = key.find('|');
        if (key.substr(0, bar) == key.substr(bar + 1)) continue;
        if (stat.opportunities == 0 || stat.invalidations == 0) continue;
        const double rate = stat.rate();
        const double sigma = std::sqrt(rate * (1.0 - rate) / static_cast<double>(stat.opportunities));
        if (rate > 5.0 * sigma) return true;
    }
    return false;
}

}  // namespace qdi
