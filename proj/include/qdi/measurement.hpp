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

// Measurements as value-labeled orthonormal bases, and the Born-rule
// machinery built on them: transition probabilities, prediction, collapse,
// sampling, compatibility and the Hermitian operator view.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdi/eigen.hpp"
#include "qdi/linear.hpp"
#include "qdi/random.hpp"

namespace qdi {

/// Outcome probabilities at or below this are treated as impossible.
inline constexpr double IMPOSSIBLE_TOL = 1e-12;
/// Minimum separation of eigenvalues for a non-degenerate spectrum.
inline constexpr double DEGENERACY_TOL = 1e-8;

struct Outcome {
    std::string label;
    double value = 0.0;
    StateVector eigenstate;
};

class Measurement {
   public:
    Measurement() = default;

    /// Validates that the eigenstates form an orthonormal basis and that labels
    /// are unique. Eigenstates are stored in canonical phase.
    Measurement(std::string name, std::vector<Outcome> outcomes) : name_(std::move(name)), outcomes_(std::move(outcomes)) {
        if (outcomes_.empty()) throw DefinitionError("Measurement '" + name_ + "': no outcomes");
        const std::size_t n = outcomes_.size();
        std::set<std::string> labels;
        for (auto &o : outcomes_) {
            if (o.eigenstate.dim() != n) {
                throw DimensionError("Measurement '" + name_ + "': eigenstate dimension must equal outcome count");
            }
            if (!std::isfinite(o.value)) throw DefinitionError("Measurement '" + name_ + "': non-finite value");
            if (!labels.insert(o.label).second) {
                throw DefinitionError("Measurement '" + name_ + "': duplicate outcome label '" + o.label + "'");
            }
            if (!is_unit(o.eigenstate, ORTHO_TOL)) {
                throw DefinitionError("Measurement '" + name_ + "': eigenstate '" + o.label + "' is not unit norm");
            }
            o.eigenstate = canonical_phase(o.eigenstate);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(inner_product(outcomes_[i].eigenstate, outcomes_[j].eigenstate)) > ORTHO_TOL) {
                    throw DefinitionError("Measurement '" + name_ + "': eigenstates '" + outcomes_[i].label +
                                          "' and '" + outcomes_[j].label + "' are not orthogonal");
                }
    }

    const std::string &name() const { return name_; }
    std::size_t dim() const { return outcomes_.size(); }
    const std::vector<Outcome> &outcomes() const { return outcomes_; }
    const Outcome &outcome(std::size_t k) const { return outcomes_.at(k); }

    std::optional<std::size_t> index_of(const std::string &label) const {
        for (std::size_t k = 0; k < outcomes_.size(); ++k)
            if (outcomes_[k].label == label) return k;
        return std::nullopt;
    }

    /// Same final states, different name/values/labels.
    Measurement with_values(std::string name, std::vector<double> values) const {
        if (values.size() != dim()) throw DimensionError("with_values: one value per outcome required");
        auto outs = outcomes_;
        for (std::size_t k = 0; k < outs.size(); ++k) outs[k].value = values[k];
        return Measurement(std::move(name), std::move(outs));
    }

   private:
    std::string name_;
    std::vector<Outcome> outcomes_;
};

class HermitianOperator {
   public:
    explicit HermitianOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
        if (!matrix_.is_square()) throw DimensionError("HermitianOperator: matrix is not square");
        if (!is_hermitian(matrix_, HERMITIAN_TOL)) throw NotHermitianError("HermitianOperator: matrix is not Hermitian");
    }
    const ComplexMatrix &matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

   private:
    ComplexMatrix matrix_;
};

struct OutcomeDistribution {
    struct Entry {
        std::string label;
        double probability = 0.0;
    };
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }
    double operator[](std::size_t k) const { return entries.at(k).probability; }

    double total() const {
        double acc = 0.0;
        for (const auto &e : entries) acc += e.probability;
        return acc;
    }
};

/// |<to|from>|^2, clamped to [0, 1].
inline double transition_probability(const StateVector &from, const StateVector &to) {
    return std::clamp(std::norm(inner_product(to, from)), 0.0, 1.0);
}

inline OutcomeDistribution predict(const StateVector &state, const Measurement &m) {
    require_same_dim(state.dim(), m.dim(), "predict");
    OutcomeDistribution out;
    out.entries.reserve(m.dim());
    for (const auto &o : m.outcomes()) {
        out.entries.push_back({o.label, transition_probability(state, o.eigenstate)});
    }
    return out;
}

/// Post-measurement state for outcome k. Throws if the outcome cannot occur.
inline StateVector collapse(const StateVector &state, const Measurement &m, std::size_t outcome_index) {
    require_same_dim(state.dim(), m.dim(), "collapse");
    const auto &o = m.outcome(outcome_index);
    if (transition_probability(state, o.eigenstate) <= IMPOSSIBLE_TOL) {
        throw ImpossibleOutcomeError("collapse: outcome '" + o.label + "' of '" + m.name() + "' has zero probability");
    }
    return o.eigenstate;
}

struct SampledOutcome {
    std::size_t index = 0;
    double probability = 0.0;
    StateVector state;
};

/// Draws an outcome by inverse CDF over outcomes in declared order. Each
/// outcome k owns the half-open interval [c_{k-1}, c_k) of the cumulative
/// distribution; probabilities at or below IMPOSSIBLE_TOL are dropped first
/// so that an eigenstate is always reproduced exactly.
inline SampledOutcome sample(const StateVector &state, const Measurement &m, RandomStream &rng) {
    auto dist = predict(state, m);
    std::vector<double> p(dist.size());
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = dist[k] > IMPOSSIBLE_TOL ? dist[k] : 0.0;
        total += p[k];
    }
    const double u = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t chosen = p.size();
    std::size_t last_possible = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0) continue;
        last_possible = k;
        cumulative += p[k];
        if (u < cumulative) {
            chosen = k;
            break;
        }
    }
    if (chosen == p.size()) chosen = last_possible;  // u landed on the rounding gap at the top
    return {chosen, dist[chosen], m.outcome(chosen).eigenstate};
}

/// Compatible iff the eigenstates can be matched one-to-one with squared
/// overlap at least 1 - tol.
inline bool are_compatible(const Measurement &m1, const Measurement &m2, double tol = 1e-9) {
    require_same_dim(m1.dim(), m2.dim(), "are_compatible");
    std::vector<bool> used(m2.dim(), false);
    for (const auto &a : m1.outcomes()) {
        bool matched = false;
        for (std::size_t j = 0; j < m2.dim(); ++j) {
            if (used[j]) continue;
            if (transition_probability(a.eigenstate, m2.outcome(j).eigenstate) >= 1.0 - tol) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

/// sum_i a_i |psi_i><psi_i|
inline HermitianOperator build_operator(const Measurement &m) {
    const std::size_t n = m.dim();
    ComplexMatrix out(n, n);
    for (const auto &o : m.outcomes()) {
        const auto &v = o.eigenstate;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += o.value * v[i] * std::conj(v[j]);
    }
    // Exact Hermitian symmetry regardless of rounding order.
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = out(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) out(j, i) = std::conj(out(i, j));
    }
    return HermitianOperator(std::move(out));
}

/// Measurement whose outcomes are the operator's eigenpairs in ascending
/// eigenvalue order, labeled by `labels`. Refuses degenerate spectra.
inline Measurement measurement_from_operator(const HermitianOperator &op, const std::vector<std::string> &labels,
                                             std::string name = "M") {
    if (labels.size() != op.dim()) throw DimensionError("measurement_from_operator: one label per eigenvalue required");
    if (op.dim() > MAX_EIGEN_DIM) throw DimensionError("measurement_from_operator: dimension exceeds 64");
    auto eig = hermitian_eigen(op.matrix());
    for (std::size_t k = 1; k < eig.eigenvalues.size(); ++k) {
        if (eig.eigenvalues[k] - eig.eigenvalues[k - 1] <= DEGENERACY_TOL) {
            throw DegenerateSpectrumError("measurement_from_operator: eigenvalues " +
                                          std::to_string(eig.eigenvalues[k - 1]) + " and " +
                                          std::to_string(eig.eigenvalues[k]) + " are degenerate");
        }
    }
    std::vector<Outcome> outs;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        outs.push_back({labels[k], eig.eigenvalues[k], eig.eigenvectors[k]});
    }
    return Measurement(std::move(name), std::move(outs));
}

/// <psi|A|psi>
inline double expectation(const StateVector &state, const HermitianOperator &op) {
    require_same_dim(state.dim(), op.dim(), "expectation");
    return inner_product(state, op.matrix() * state).real();
}

/// Measurement diagonal in the standard basis.
inline Measurement standard_measurement(std::string name, std::vector<std::string> labels, std::vector<double> values) {
    if (labels.size() != values.size()) throw DimensionError("standard_measurement: labels/values length mismatch");
    std::vector<Outcome> outs;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        outs.push_back({labels[k], values[k], StateVector::basis(labels.size(), k)});
    }
    return Measurement(std::move(name), std::move(outs));
}

/// Matrix with the measurement's eigenstates as columns.
inline ComplexMatrix eigenbasis_matrix(const Measurement &m) {
    std::vector<StateVector> cols;
    for (const auto &o : m.outcomes()) cols.push_back(o.eigenstate);
    return ComplexMatrix::from_columns(cols);
}

/// Measurement on a Haar-random basis with values drawn uniformly from [-5, 5).
inline Measurement random_measurement(std::size_t dim, RandomStream &rng, std::string name = "R") {
    auto u = haar_random_unitary(dim, rng);
    std::vector<Outcome> outs;
    for (std::size_t k = 0; k < dim; ++k) {
        outs.push_back({"r" + std::to_string(k), -5.0 + 10.0 * rng.uniform(), u.column(k)});
    }
    return Measurement(std::move(name), std::move(outs));
}

}  // namespace qdi
