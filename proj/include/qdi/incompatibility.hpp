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

// Executable versions of the structural arguments about incompatible
// measurements: conditional tables, classical mixtures, Fourier bases, the
// search for real equal-modulus orthogonal matrices, phase retrieval and the
// half-angle spin picture.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "qdi/linear.hpp"
#include "qdi/measurement.hpp"
#include "qdi/random.hpp"

namespace qdi {

// ---------------------------------------------------------------------------
// Conditional tables

/// p[i][j] = P(col_j | row_i). Columns are grouped by measurement; within each
/// group every row sums to one.
struct ConditionalTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    /// Number of consecutive columns belonging to each measurement.
    std::vector<std::size_t> col_groups;
    std::vector<std::vector<double>> p;

    void validate(double tol = 1e-9) const {
        if (p.size() != row_labels.size()) throw TableError("ConditionalTable: row count mismatch");
        std::size_t group_total = std::accumulate(col_groups.begin(), col_groups.end(), std::size_t{0});
        if (group_total != col_labels.size()) throw TableError("ConditionalTable: column groups do not cover columns");
        for (const auto &row : p) {
            if (row.size() != col_labels.size()) throw TableError("ConditionalTable: ragged row");
            std::size_t start = 0;
            for (auto width : col_groups) {
                double sum = 0.0;
                for (std::size_t j = start; j < start + width; ++j) {
                    if (!(row[j] >= -tol && row[j] <= 1.0 + tol)) {
                        throw TableError("ConditionalTable: entry outside [0, 1]");
                    }
                    sum += row[j];
                }
                if (std::abs(sum - 1.0) > tol) throw TableError("ConditionalTable: row block does not sum to 1");
                start += width;
            }
        }
    }
};

/// Conditional probabilities between the final states of the given
/// measurements; rows and columns both enumerate every outcome.
inline ConditionalTable conditional_table(const std::vector<Measurement> &ms) {
    ConditionalTable t;
    std::vector<const Outcome *> all;
    for (const auto &m : ms) {
        if (m.dim() != ms.front().dim()) throw DimensionError("conditional_table: measurements differ in dimension");
        t.col_groups.push_back(m.dim());
        for (const auto &o : m.outcomes()) {
            t.row_labels.push_back(o.label);
            all.push_back(&o);
        }
    }
    t.col_labels = t.row_labels;
    for (const auto *from : all) {
        std::vector<double> row;
        for (const auto *to : all) row.push_back(transition_probability(from->eigenstate, to->eigenstate));
        t.p.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Fourier bases

/// Discrete Fourier basis: v_j[k] = exp(2 pi i j k / n) / sqrt(n), values 0..n-1.
/// Unbiased with respect to the standard basis.
inline Measurement fourier_basis(std::size_t n, std::string name = "F", std::vector<std::string> labels = {}) {
    if (n < 2 || n > MAX_EIGEN_DIM) throw DomainError("fourier_basis: n must be in [2, 64]");
    if (labels.empty()) {
        for (std::size_t j = 0; j < n; ++j) labels.push_back("f" + std::to_string(j));
    }
    if (labels.size() != n) throw DimensionError("fourier_basis: one label per outcome required");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Outcome> outs;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Complex> amps(n);
        for (std::size_t k = 0; k < n; ++k) {
            // Reduce jk mod n before scaling so large products keep full precision.
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            amps[k] = std::polar(scale, angle);
        }
        outs.push_back({labels[j], static_cast<double>(j), StateVector(std::move(amps))});
    }
    return Measurement(std::move(name), std::move(outs));
}

/// Standard basis (A) against its Fourier partner (B): a 2n x 2n table with
/// Kronecker deltas inside each basis and 1/n across.
inline ConditionalTable table_for_mub_pair(std::size_t n) {
    if (n < 2) throw DomainError("table_for_mub_pair: n must be at least 2");
    std::vector<std::string> a_labels, b_labels;
    std::vector<double> values;
    if (n == 2) {
        a_labels = {"a+", "a-"};
        b_labels = {"b+", "b-"};
        values = {1.0, -1.0};
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            a_labels.push_back("a" + std::to_string(k));
            b_labels.push_back("b" + std::to_string(k));
            values.push_back(static_cast<double>(k));
        }
    }
    auto a = standard_measurement("A", a_labels, values);
    auto b = fourier_basis(n, "B", b_labels).with_values("B", values);
    return conditional_table({a, b});
}

// ---------------------------------------------------------------------------
// Classical mixtures

struct ScanReport {
    std::size_t grid_steps = 0;
    /// Largest B-outcome probability reached by any classical mixture.
    double sup_b_probability = 0.0;
    double argmax_lambda = 0.0;
    bool reaches_determinism = false;
    /// Max deviation of the lambda = 1 mixture from the first A row.
    double endpoint_deviation = 0.0;
    /// P(b+) for the superposition (a+ + a-)/sqrt(2).
    double superposition_b_probability = 0.0;
};

/// Mixes the two A rows of an n = 2 table classically over a uniform lambda
/// grid and records how close any mixture comes to a definite B outcome.
inline ScanReport classical_mixture_scan(const ConditionalTable &table, std::size_t grid_steps) {
    table.validate();
    if (table.col_groups.size() != 2 || table.col_groups[0] != 2 || table.col_groups[1] != 2 ||
        table.row_labels.size() != 4) {
        throw TableError("classical_mixture_scan: expected the 4x4 table of two binary measurements");
    }
    if (grid_steps < 2) throw DomainError("classical_mixture_scan: grid_steps must be at least 2");

    const auto &row_plus = table.p[0];
    const auto &row_minus = table.p[1];
    ScanReport report;
    report.grid_steps = grid_steps;
    for (std::size_t i = 0; i < grid_steps; ++i) {
        const double lambda = static_cast<double>(i) / static_cast<double>(grid_steps - 1);
        for (std::size_t j = 2; j < 4; ++j) {
            const double mixed = lambda * row_plus[j] + (1.0 - lambda) * row_minus[j];
            if (mixed > report.sup_b_probability) {
                report.sup_b_probability = mixed;
                report.argmax_lambda = lambda;
            }
            if (std::abs(mixed - 1.0) <= 1e-12) report.reaches_determinism = true;
        }
        if (i + 1 == grid_steps) {
            for (std::size_t j = 0; j < 4; ++j) {
                const double mixed = lambda * row_plus[j] + (1.0 - lambda) * row_minus[j];
                report.endpoint_deviation = std::max(report.endpoint_deviation, std::abs(mixed - row_plus[j]));
            }
        }
    }

    auto superposition = normalize(StateVector{1.0, 1.0});
    report.superposition_b_probability = predict(superposition, fourier_basis(2))[0];
    return report;
}

// ---------------------------------------------------------------------------
// Real equal-modulus search

inline constexpr std::size_t MAX_SIGN_SEARCH_DIM = 5;

struct SearchReport {
    std::size_t n = 0;
    std::uint64_t candidates = 0;
    /// Sign matrices whose 1/sqrt(n) scaling is orthogonal.
    std::uint64_t orthogonal_count = 0;
    /// Classes under row/column permutation and negation.
    std::size_t equivalence_classes = 0;
    bool feasible = false;
    /// One normalized representative (entries +-1) per class.
    std::vector<std::vector<std::vector<int>>> representatives;
};

namespace detail {

/// Row i of the sign matrix occupies bits [i n, (i + 1) n); a set bit is -1.
inline std::vector<std::vector<int>> decode_signs(std::uint64_t bits, std::size_t n) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = ((bits >> (i * n + j)) & 1U) ? -1 : 1;
    return m;
}

inline bool scaled_is_orthogonal(const std::vector<std::vector<int>> &signs) {
    const std::size_t n = signs.size();
    ComplexMatrix m(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = scale * signs[i][j];
    return max_abs_diff(m * m.adjoint(), ComplexMatrix::identity(n)) <= 1e-9;
}

/// Smallest encoding over all row/column permutations after making the first
/// row and first column positive.
inline std::uint64_t canonical_sign_class(const std::vector<std::vector<int>> &signs) {
    const std::size_t n = signs.size();
    std::vector<std::size_t> rows(n), cols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::uint64_t best = ~std::uint64_t{0};
    std::vector<std::vector<int>> work(n, std::vector<int>(n));
    do {
        std::iota(cols.begin(), cols.end(), 0);
        do {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) work[i][j] = signs[rows[i]][cols[j]];
            for (std::size_t j = 0; j < n; ++j)
                if (work[0][j] < 0)
                    for (std::size_t i = 0; i < n; ++i) work[i][j] = -work[i][j];
            for (std::size_t i = 1; i < n; ++i)
                if (work[i][0] < 0)
                    for (std::size_t j = 0; j < n; ++j) work[i][j] = -work[i][j];
            std::uint64_t code = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (work[i][j] < 0) code |= std::uint64_t{1} << (i * n + j);
            best = std::min(best, code);
        } while (std::next_permutation(cols.begin(), cols.end()));
    } while (std::next_permutation(rows.begin(), rows.end()));
    return best;
}

}  // namespace detail

/// Exhaustively enumerates every n x n matrix of +-1 entries and reports those
/// whose 1/sqrt(n) scaling is orthogonal.
inline SearchReport real_equal_modulus_search(std::size_t n) {
    if (n < 2 || n > MAX_SIGN_SEARCH_DIM) throw DomainError("real_equal_modulus_search: n must be in [2, 5]");
    SearchReport report;
    report.n = n;
    report.candidates = std::uint64_t{1} << (n * n);
    const std::uint64_t row_mask = (std::uint64_t{1} << n) - 1;
    std::vector<std::uint64_t> classes;

    for (std::uint64_t bits = 0; bits < report.candidates; ++bits) {
        // Rows r, s of a sign matrix have inner product n - 2 * popcount(r ^ s).
        bool orthogonal = true;
        for (std::size_t i = 0; orthogonal && i < n; ++i) {
            const std::uint64_t ri = (bits >> (i * n)) & row_mask;
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::uint64_t rj = (bits >> (j * n)) & row_mask;
                if (2 * static_cast<std::size_t>(std::popcount(ri ^ rj)) != n) {
                    orthogonal = false;
                    break;
                }
            }
        }
        if (!orthogonal) continue;
        auto signs = detail::decode_signs(bits, n);
        if (!detail::scaled_is_orthogonal(signs)) continue;
        ++report.orthogonal_count;
        classes.push_back(detail::canonical_sign_class(signs));
    }

    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    report.equivalence_classes = classes.size();
    report.feasible = report.orthogonal_count > 0;
    for (auto code : classes) report.representatives.push_back(detail::decode_signs(code, n));
    return report;
}

// ---------------------------------------------------------------------------
// Phase retrieval

inline constexpr std::size_t MAX_PHASE_DIM = 8;
inline constexpr double PHASE_RESIDUAL_TOL = 1e-9;

struct PhaseRetrievalProblem {
    std::vector<double> moduli_a;
    std::vector<double> moduli_b;
    ComplexMatrix basis_change;

    std::size_t n() const { return moduli_a.size(); }

    void validate() const {
        const std::size_t n = moduli_a.size();
        if (n == 0 || n > MAX_PHASE_DIM) throw DomainError("PhaseRetrievalProblem: n must be in [1, 8]");
        if (moduli_b.size() != n || basis_change.rows() != n || basis_change.cols() != n) {
            throw DimensionError("PhaseRetrievalProblem: inconsistent sizes");
        }
        for (const auto *mod : {&moduli_a, &moduli_b}) {
            double sum = 0.0;
            for (double x : *mod) {
                if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("PhaseRetrievalProblem: moduli must be >= 0");
                sum += x * x;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw DomainError("PhaseRetrievalProblem: squared moduli must sum to 1");
        }
        if (!is_unitary(basis_change, 1e-9)) throw DomainError("PhaseRetrievalProblem: basis_change is not unitary");
    }
};

struct PhaseSolution {
    /// Phase angles in radians, wrapped to (-pi, pi]; the first is fixed to 0.
    std::vector<double> phases;
    /// sum_k (|(U x)_k| - moduli_b_k)^2 at the returned phases.
    double residual = 0.0;
    bool converged = false;
    std::size_t restarts_used = 0;
};

namespace detail {

inline StateVector phased(const std::vector<double> &moduli, const std::vector<double> &phases) {
    std::vector<Complex> x(moduli.size());
    for (std::size_t j = 0; j < moduli.size(); ++j) x[j] = std::polar(moduli[j], phases[j]);
    return StateVector(std::move(x));
}

inline double moduli_residual(const PhaseRetrievalProblem &prob, const std::vector<double> &phases) {
    auto y = prob.basis_change * phased(prob.moduli_a, phases);
    double acc = 0.0;
    for (std::size_t k = 0; k < y.dim(); ++k) {
        const double d = std::abs(y[k]) - prob.moduli_b[k];
        acc += d * d;
    }
    return acc;
}

/// Solves (a) x = b for a small symmetric positive definite a (Cholesky).
inline std::vector<double> solve_spd(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        d = std::sqrt(std::max(d, 1e-300));
        a[j][j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            a[i][j] = s / d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= a[i][k] * b[k];
        b[i] /= a[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) b[i] -= a[k][i] * b[k];
        b[i] /= a[i][i];
    }
    return b;
}

/// Levenberg-Marquardt on r_k = |(U x)_k|^2 - b_k^2 over phases 1..n-1.
inline std::vector<double> refine_phases(const PhaseRetrievalProblem &prob, std::vector<double> phases) {
    const std::size_t n = prob.n();
    const std::size_t unknowns = n - 1;
    if (unknowns == 0) return phases;
    const auto &u = prob.basis_change;

    auto evaluate = [&](const std::vector<double> &ph, std::vector<double> &r, std::vector<std::vector<double>> *jac) {
        auto x = phased(prob.moduli_a, ph);
        auto y = u * x;
        double cost = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = std::norm(y[k]) - prob.moduli_b[k] * prob.moduli_b[k];
            cost += r[k] * r[k];
            if (jac) {
                for (std::size_t j = 1; j < n; ++j) {
                    const Complex dy = u(k, j) * x[j] * Complex{0.0, 1.0};
                    (*jac)[k][j - 1] = 2.0 * (std::conj(y[k]) * dy).real();
                }
            }
        }
        return cost;
    };

    std::vector<double> r(n), r_trial(n);
    std::vector<std::vector<double>> jac(n, std::vector<double>(unknowns));
    double cost = evaluate(phases, r, &jac);
    double damping = 1e-3;
    for (int iter = 0; iter < 500 && cost > 1e-32; ++iter) {
        std::vector<std::vector<double>> normal(unknowns, std::vector<double>(unknowns, 0.0));
        std::vector<double> gradient(unknowns, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t a = 0; a < unknowns; ++a) {
                gradient[a] += jac[k][a] * r[k];
                for (std::size_t b = 0; b < unknowns; ++b) normal[a][b] += jac[k][a] * jac[k][b];
            }
        bool improved = false;
        while (!improved && damping < 1e12) {
            auto lhs = normal;
            for (std::size_t a = 0; a < unknowns; ++a) lhs[a][a] += damping * (1.0 + normal[a][a]);
            std::vector<double> rhs(unknowns);
            for (std::size_t a = 0; a < unknowns; ++a) rhs[a] = -gradient[a];
            auto step = solve_spd(lhs, rhs);
            auto trial = phases;
            for (std::size_t a = 0; a < unknowns; ++a) trial[a + 1] += step[a];
            double trial_cost = evaluate(trial, r_trial, nullptr);
            if (trial_cost < cost) {
                phases = std::move(trial);
                cost = evaluate(phases, r, &jac);
                damping = std::max(damping * 0.3, 1e-15);
                improved = true;
            } else {
                damping *= 10.0;
            }
        }
        if (!improved) break;
    }
    return phases;
}

inline double wrap_angle(double phi) {
    double w = std::remainder(phi, 2.0 * std::numbers::pi);
    return w <= -std::numbers::pi ? w + 2.0 * std::numbers::pi : w;
}

}  // namespace detail

/// Recovers the phases of the A-basis amplitudes from the moduli in both
/// bases, by Levenberg-Marquardt from up to `restarts` random starts. Stops at
/// the first start reaching PHASE_RESIDUAL_TOL; otherwise returns the best.
inline PhaseSolution retrieve_phases(const PhaseRetrievalProblem &problem, std::size_t restarts, RandomStream &rng) {
    problem.validate();
    const std::size_t n = problem.n();
    PhaseSolution best;
    best.phases.assign(n, 0.0);
    best.residual = detail::moduli_residual(problem, best.phases);
    const std::size_t attempts = std::max<std::size_t>(restarts, 1);
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        std::vector<double> start(n, 0.0);
        for (std::size_t j = 1; j < n; ++j) start[j] = 2.0 * std::numbers::pi * rng.uniform();
        auto phases = detail::refine_phases(problem, start);
        const double residual = detail::moduli_residual(problem, phases);
        if (attempt == 0 || residual < best.residual) {
            best.phases = phases;
            best.residual = residual;
        }
        best.restarts_used = attempt + 1;
        if (best.residual <= PHASE_RESIDUAL_TOL) break;
    }
    for (auto &phi : best.phases) phi = detail::wrap_angle(phi);
    best.converged = best.residual <= PHASE_RESIDUAL_TOL;
    return best;
}

// ---------------------------------------------------------------------------
// Spin in the Z-X plane

/// Phase-space vector in the (z-up, z-down) plane for a spin pointing at
/// `theta_physical_degrees` from +z towards +x. The phase-space angle is half
/// the physical one, so 360 degrees gives the negated vector.
inline StateVector spin_state(double theta_physical_degrees) {
    const double half = theta_physical_degrees * std::numbers::pi / 360.0;
    return StateVector{std::cos(half), std::sin(half)};
}

/// Probability of finding z-up: cos^2(theta / 2).
inline double spin_transition(double theta_physical_degrees) {
    return transition_probability(spin_state(theta_physical_degrees), StateVector::basis(2, 0));
}

}  // namespace qdi
