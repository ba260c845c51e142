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

// JSON and CSV encodings of the library's values and reports. Complex
// numbers encode as [re, im] pairs.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdi/incompatibility.hpp"
#include "qdi/scenario.hpp"
#include "qdi/simulator.hpp"

namespace qdi::io {

using nlohmann::json;

/// Thrown for JSON that does not match the expected shape.
struct FormatError : Error {
    using Error::Error;
};

inline json to_json(const Complex &z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json &j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("expected a complex number as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const StateVector &v) {
    json out = json::array();
    for (const auto &z : v) out.push_back(to_json(z));
    return out;
}

inline StateVector state_from_json(const json &j) {
    if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty array of amplitudes");
    std::vector<Complex> amps;
    for (const auto &z : j) amps.push_back(complex_from_json(z));
    return StateVector(std::move(amps));
}

inline json to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw FormatError("expected a matrix as an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    std::vector<Complex> entries;
    for (const auto &row : j) {
        if (!row.is_array() || row.size() != cols) throw FormatError("matrix rows differ in length");
        for (const auto &z : row) entries.push_back(complex_from_json(z));
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

inline json to_json(const Measurement &m) {
    json outs = json::array();
    for (const auto &o : m.outcomes()) {
        outs.push_back({{"label", o.label}, {"value", o.value}, {"eigenstate", to_json(o.eigenstate)}});
    }
    return {{"name", m.name()}, {"outcomes", std::move(outs)}};
}

inline Measurement measurement_from_json(const json &j) {
    if (!j.is_object() || !j.contains("name") || !j.contains("outcomes") || !j["outcomes"].is_array()) {
        throw FormatError("measurement needs 'name' and 'outcomes'");
    }
    std::vector<Outcome> outs;
    for (const auto &o : j["outcomes"]) {
        if (!o.contains("label") || !o.contains("value") || !o.contains("eigenstate")) {
            throw FormatError("outcome needs 'label', 'value' and 'eigenstate'");
        }
        outs.push_back({o["label"].get<std::string>(), o["value"].get<double>(), state_from_json(o["eigenstate"])});
    }
    return Measurement(j["name"].get<std::string>(), std::move(outs));
}

/// Full definition, enough to rebuild the scenario.
inline json to_json(const Scenario &s) {
    json ms = json::array();
    for (const auto &m : s.measurements) ms.push_back(to_json(m));
    json out = {{"name", s.name}, {"dim", s.dim}, {"measurements", std::move(ms)}};
    out["initial_state"] = s.initial_state ? to_json(*s.initial_state) : json("haar_random");
    return out;
}

inline Scenario scenario_from_json(const json &j) {
    if (!j.is_object() || !j.contains("name") || !j.contains("measurements") || !j["measurements"].is_array()) {
        throw FormatError("scenario needs 'name' and 'measurements'");
    }
    std::vector<Measurement> ms;
    for (const auto &m : j["measurements"]) ms.push_back(measurement_from_json(m));
    std::optional<StateVector> initial;
    if (j.contains("initial_state") && !(j["initial_state"].is_string() && j["initial_state"] == "haar_random")) {
        initial = state_from_json(j["initial_state"]);
    }
    Scenario s(j["name"].get<std::string>(), std::move(ms), std::move(initial));
    if (j.contains("dim") && j["dim"].get<std::size_t>() != s.dim) throw FormatError("scenario 'dim' mismatch");
    return s;
}

inline json to_json(const MeasurementEvent &e) {
    json inv = json::array();
    for (const auto &i : e.invalidated) {
        inv.push_back({{"measurement", i.measurement}, {"old_label", i.old_label}, {"new_label", i.new_label}});
    }
    return {{"step", e.step_index},          {"measurement", e.measurement}, {"outcome", e.outcome_label},
            {"value", e.value},              {"probability", e.probability}, {"invalidated", std::move(inv)}};
}

inline json to_json(const std::vector<MeasurementEvent> &history) {
    json out = json::array();
    for (const auto &e : history) out.push_back(to_json(e));
    return out;
}

inline json to_json(const OutcomeDistribution &d) {
    json out = json::array();
    for (const auto &e : d.entries) out.push_back({{"label", e.label}, {"probability", e.probability}});
    return out;
}

inline json to_json(const ConditionalTable &t) {
    return {{"row_labels", t.row_labels}, {"col_labels", t.col_labels}, {"col_groups", t.col_groups}, {"p", t.p}};
}

inline json to_json(const ScanReport &r) {
    return {{"kind", "classical_mixture_scan"},
            {"parameters", {{"grid_steps", r.grid_steps}}},
            {"findings",
             {{"sup_b_probability", r.sup_b_probability},
              {"argmax_lambda", r.argmax_lambda},
              {"endpoint_deviation", r.endpoint_deviation},
              {"superposition_b_probability", r.superposition_b_probability}}},
            {"booleans", {{"reaches_determinism", r.reaches_determinism}}}};
}

inline json to_json(const SearchReport &r) {
    return {{"kind", "real_equal_modulus_search"},
            {"parameters", {{"n", r.n}}},
            {"findings",
             {{"candidates", r.candidates},
              {"orthogonal_count", r.orthogonal_count},
              {"equivalence_classes", r.equivalence_classes},
              {"representatives", r.representatives}}},
            {"booleans", {{"feasible", r.feasible}}}};
}

inline json to_json(const PhaseSolution &s, const PhaseRetrievalProblem &p, std::size_t restarts, std::uint64_t seed) {
    return {{"kind", "phase_solution"},
            {"parameters", {{"n", p.n()}, {"restarts", restarts}, {"seed", seed}}},
            {"findings", {{"phases", s.phases}, {"restarts_used", s.restarts_used}}},
            {"residuals", {{"residual", s.residual}, {"threshold", PHASE_RESIDUAL_TOL}}},
            {"booleans", {{"converged", s.converged}}}};
}

/// Accepts "basis_change" as a matrix of [re, im] pairs or the string "fourier".
inline PhaseRetrievalProblem phase_problem_from_json(const json &j) {
    if (!j.is_object() || !j.contains("moduli_a") || !j.contains("moduli_b") || !j.contains("basis_change")) {
        throw FormatError("phase problem needs 'moduli_a', 'moduli_b' and 'basis_change'");
    }
    PhaseRetrievalProblem p;
    p.moduli_a = j["moduli_a"].get<std::vector<double>>();
    p.moduli_b = j["moduli_b"].get<std::vector<double>>();
    const auto &bc = j["basis_change"];
    if (bc.is_string()) {
        if (bc != "fourier") throw FormatError("basis_change must be a matrix or \"fourier\"");
        p.basis_change = eigenbasis_matrix(fourier_basis(p.moduli_a.size())).adjoint();
    } else {
        p.basis_change = matrix_from_json(bc);
    }
    p.validate();
    return p;
}

inline json to_json(const PhaseRetrievalProblem &p) {
    return {{"moduli_a", p.moduli_a}, {"moduli_b", p.moduli_b}, {"basis_change", to_json(p.basis_change)}};
}

/// JSON RunReport; per-trial event logs are included when `with_events`.
inline json to_json(const RunReport &r, bool with_events = true) {
    json steps = json::array();
    for (std::size_t s = 0; s < r.script.size(); ++s) {
        json freq = json::object();
        for (std::size_t k = 0; k < r.step_labels[s].size(); ++k) freq[r.step_labels[s][k]] = r.step_frequencies[s][k];
        steps.push_back({{"step", s}, {"measurement", r.script[s]}, {"frequencies", std::move(freq)}});
    }
    json inv = json::object();
    for (const auto &[key, stat] : r.invalidation) {
        inv[key] = {{"rate", stat.rate()}, {"opportunities", stat.opportunities}, {"invalidations", stat.invalidations}};
    }
    json out = {{"kind", "run_report"},
                {"parameters",
                 {{"scenario", r.scenario},
                  {"script", r.script},
                  {"mode", to_string(r.mode)},
                  {"trials", r.trials},
                  {"seed", r.seed}}},
                {"aggregate", std::move(steps)},
                {"invalidation_rate", std::move(inv)},
                {"order_effect", r.order_effect},
                {"total_invalidations", r.total_invalidations}};
    if (with_events) {
        json trials = json::array();
        for (std::size_t t = 0; t < r.trials; ++t) trials.push_back({{"trial", t}, {"events", to_json(r.events(t))}});
        out["events"] = std::move(trials);
    }
    return out;
}

inline constexpr const char *RUN_CSV_HEADER = "trial,step,measurement,outcome,value,invalidated_count";

/// One row per event; LF line endings.
inline void write_csv(std::ostream &os, const RunReport &r) {
    os << RUN_CSV_HEADER << '\n';
    for (std::size_t t = 0; t < r.trials; ++t) {
        for (const auto &e : r.events(t)) {
            os << t << ',' << e.step_index << ',' << e.measurement << ',' << e.outcome_label << ','
               << json(e.value).dump() << ',' << e.invalidated.size() << '\n';
        }
    }
}

}  // namespace qdi::io
