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

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdi/errors.hpp"
#include "qdi/incompatibility.hpp"
#include "qdi/measurement.hpp"

namespace qdi {

/// A system plus the measurements that can be performed on it.
struct Scenario {
    std::string name;
    std::size_t dim = 0;
    std::vector<Measurement> measurements;
    /// Pinned initial state; empty means a Haar-random state is drawn.
    std::optional<StateVector> initial_state;

    Scenario() = default;

    Scenario(std::string name_, std::vector<Measurement> ms, std::optional<StateVector> initial = std::nullopt)
        : name(std::move(name_)), measurements(std::move(ms)), initial_state(std::move(initial)) {
        if (measurements.empty()) throw DefinitionError("Scenario '" + name + "': no measurements");
        dim = measurements.front().dim();
        std::set<std::string> names;
        for (const auto &m : measurements) {
            if (m.dim() != dim) throw DefinitionError("Scenario '" + name + "': measurements differ in dimension");
            if (!names.insert(m.name()).second) {
                throw DefinitionError("Scenario '" + name + "': duplicate measurement '" + m.name() + "'");
            }
        }
        if (initial_state) {
            if (initial_state->dim() != dim) throw DefinitionError("Scenario '" + name + "': initial state dimension");
            if (!is_unit(*initial_state)) throw DefinitionError("Scenario '" + name + "': initial state is not unit norm");
            initial_state = normalize(*initial_state);
        }
    }

    std::optional<std::size_t> index_of(const std::string &measurement) const {
        for (std::size_t k = 0; k < measurements.size(); ++k)
            if (measurements[k].name() == measurement) return k;
        return std::nullopt;
    }

    const Measurement &measurement(const std::string &name_) const {
        auto k = index_of(name_);
        if (!k) throw ScriptError("unknown measurement '" + name_ + "' in scenario '" + name + "'");
        return measurements[*k];
    }
};

/// Ordered measurement names; repeats allowed.
struct ExperimentScript {
    std::vector<std::string> steps;

    /// "A,B,A" -> {A, B, A}
    static ExperimentScript parse(const std::string &text) {
        ExperimentScript script;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            auto first = item.find_first_not_of(" \t");
            auto last = item.find_last_not_of(" \t");
            if (first == std::string::npos) throw ScriptError("empty step in script '" + text + "'");
            script.steps.push_back(item.substr(first, last - first + 1));
        }
        if (script.steps.empty()) throw ScriptError("empty script");
        return script;
    }

    /// Resolves every step to a measurement index in `scenario`.
    std::vector<std::size_t> resolve(const Scenario &scenario) const {
        if (steps.empty()) throw ScriptError("empty script");
        std::vector<std::size_t> out;
        for (const auto &s : steps) {
            auto k = scenario.index_of(s);
            if (!k) throw ScriptError("unknown measurement '" + s + "' in scenario '" + scenario.name + "'");
            out.push_back(*k);
        }
        return out;
    }
};

struct Invalidation {
    std::string measurement;
    std::string old_label;
    std::string new_label;
    bool operator==(const Invalidation &) const = default;
};

struct MeasurementEvent {
    std::size_t step_index = 0;
    std::string measurement;
    std::string outcome_label;
    double value = 0.0;
    /// Probability of this outcome just before it was obtained.
    double probability = 0.0;
    std::vector<Invalidation> invalidated;
    bool operator==(const MeasurementEvent &) const = default;
};

// ---------------------------------------------------------------------------
// Built-in scenarios

inline Scenario table1_pair_scenario(std::optional<StateVector> initial = std::nullopt) {
    auto a = standard_measurement("A", {"a+", "a-"}, {1.0, -1.0});
    auto b = fourier_basis(2, "B", {"b+", "b-"}).with_values("B", {1.0, -1.0});
    return Scenario("table1-pair", {a, b}, std::move(initial));
}

/// Spin-1/2 restricted to the Z-X plane; values in units of hbar/2.
inline Scenario spin_zx_scenario(std::optional<StateVector> initial = std::nullopt) {
    auto z = standard_measurement("Z", {"z-up", "z-down"}, {1.0, -1.0});
    auto x = Measurement("X", {{"x-up", 1.0, spin_state(90.0)}, {"x-down", -1.0, spin_state(270.0)}});
    return Scenario("spin-zx", {z, x}, std::move(initial));
}

inline Scenario fourier_n_scenario(std::size_t n, std::optional<StateVector> initial = std::nullopt) {
    if (n < 2 || n > MAX_EIGEN_DIM) throw DomainError("fourier-n: dim must be in [2, 64]");
    std::vector<std::string> a_labels, b_labels;
    std::vector<double> values;
    for (std::size_t k = 0; k < n; ++k) {
        a_labels.push_back("a" + std::to_string(k));
        b_labels.push_back("b" + std::to_string(k));
        values.push_back(static_cast<double>(k));
    }
    auto a = standard_measurement("A", a_labels, values);
    auto b = fourier_basis(n, "B", b_labels);
    return Scenario("fourier-n", {a, b}, std::move(initial));
}

struct ScenarioDescriptor {
    std::string name;
    std::string description;
    bool takes_dim = false;
    std::size_t default_dim = 2;
};

inline std::vector<ScenarioDescriptor> list_scenarios() {
    return {
        {"table1-pair", "Two maximally incompatible binary measurements A and B (bases at 45 degrees).", false, 2},
        {"spin-zx", "Spin-1/2 measured along Z or X; disregards the Y axis.", false, 2},
        {"fourier-n", "Standard basis A against its discrete Fourier partner B in dimension dim.", true, 3},
    };
}

/// Looks up a built-in scenario; `dim` only applies to fourier-n.
inline std::optional<Scenario> find_builtin_scenario(const std::string &name, std::optional<std::size_t> dim = {}) {
    if (name == "table1-pair") return table1_pair_scenario();
    if (name == "spin-zx") return spin_zx_scenario();
    if (name == "fourier-n") return fourier_n_scenario(dim.value_or(3));
    return std::nullopt;
}

}  // namespace qdi
