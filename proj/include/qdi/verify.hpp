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

// Self-checks over the library's invariants, grouped into named suites. The
// CLI's `verify` subcommand prints these.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qdi/eigen.hpp"
#include "qdi/incompatibility.hpp"
#include "qdi/measurement.hpp"
#include "qdi/random.hpp"
#include "qdi/scenario.hpp"
#include "qdi/simulator.hpp"

namespace qdi::verify {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names = {"born", "mub", "real-search", "phase", "spin", "simulator"};
    return names;
}

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

inline std::vector<CheckResult> born_suite() {
    std::vector<CheckResult> out;
    RandomStream rng(2024);

    double worst_sum = 0.0, worst_expect = 0.0, worst_trace = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t dim = 2 + static_cast<std::size_t>(i % 7);
        auto s = haar_random_state(dim, rng);
        auto m = random_measurement(dim, rng);
        auto dist = predict(s, m);
        worst_sum = std::max(worst_sum, std::abs(dist.total() - 1.0));
        double weighted = 0.0;
        for (std::size_t k = 0; k < dim; ++k) weighted += m.outcome(k).value * dist[k];
        worst_expect = std::max(worst_expect, std::abs(expectation(s, build_operator(m)) - weighted));
        // Projector route: <s|P_k|s> with P_k = |v_k><v_k|.
        for (std::size_t k = 0; k < dim; ++k) {
            auto proj = outer(m.outcome(k).eigenstate, m.outcome(k).eigenstate);
            worst_trace = std::max(worst_trace, std::abs(inner_product(s, proj * s).real() - dist[k]));
        }
    }
    out.push_back({"born", "predictions sum to 1 (1000 random pairs, dims 2-8)", worst_sum <= 1e-9,
                   "max deviation " + fmt(worst_sum)});
    out.push_back({"born", "<psi|A|psi> equals sum of value * probability", worst_expect <= 1e-9,
                   "max deviation " + fmt(worst_expect)});
    out.push_back({"born", "inner-product and projector routes agree", worst_trace <= 1e-9,
                   "max deviation " + fmt(worst_trace)});

    std::size_t agree = 0;
    const std::size_t pairs = 10000;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t dim = 2 + i % 7;
        auto s = haar_random_state(dim, rng);
        auto m = random_measurement(dim, rng);
        auto first = sample(s, m, rng);
        auto second = sample(first.state, m, rng);
        if (first.index == second.index) ++agree;
    }
    out.push_back({"born", "immediate re-measurement repeats (10^4 pairs)", agree == pairs,
                   std::to_string(agree) + "/" + std::to_string(pairs)});

    double worst_spec = 0.0, worst_rec = 0.0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t dim = 2 + static_cast<std::size_t>(i % 15);
        auto u = haar_random_unitary(dim, rng);
        std::vector<double> planted(dim);
        for (auto &x : planted) x = -10.0 + 20.0 * rng.uniform();
        ComplexMatrix a(dim, dim);
        for (std::size_t k = 0; k < dim; ++k) {
            auto v = u.column(k);
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c) a(r, c) += planted[k] * v[r] * std::conj(v[c]);
        }
        auto eig = hermitian_eigen(a);
        std::sort(planted.begin(), planted.end());
        for (std::size_t k = 0; k < dim; ++k) worst_spec = std::max(worst_spec, std::abs(eig.eigenvalues[k] - planted[k]));
        worst_rec = std::max(worst_rec, max_abs_diff(eig.reconstruct(), a));
    }
    out.push_back({"born", "eigensolver recovers planted spectra (500 matrices, dims 2-16)",
                   worst_spec <= 1e-8 && worst_rec <= 1e-8,
                   "spectrum " + fmt(worst_spec) + ", reconstruction " + fmt(worst_rec)});
    return out;
}

inline std::vector<CheckResult> mub_suite() {
    std::vector<CheckResult> out;
    double worst = 0.0;
    for (std::size_t n = 2; n <= 64; ++n) {
        auto f = fourier_basis(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double p = transition_probability(f.outcome(j).eigenstate, StateVector::basis(n, k));
                worst = std::max(worst, std::abs(p - 1.0 / static_cast<double>(n)));
            }
    }
    out.push_back({"mub", "Fourier basis unbiased against standard basis, n = 2..64", worst <= 1e-9,
                   "max deviation " + fmt(worst)});

    static const double table1[4][4] = {
        {1.0, 0.0, 0.5, 0.5}, {0.0, 1.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 0.0}, {0.5, 0.5, 0.0, 1.0}};
    auto scenario = table1_pair_scenario();
    auto table = conditional_table(scenario.measurements);
    double worst_table = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) worst_table = std::max(worst_table, std::abs(table.p[i][j] - table1[i][j]));
    out.push_back({"mub", "table1-pair reproduces the 1 / 0 / 1/2 conditional table", worst_table <= 1e-12,
                   "max deviation " + fmt(worst_table)});

    auto scan = classical_mixture_scan(table, 100000);
    out.push_back({"mub", "classical mixtures of A rows never make B definite",
                   std::abs(scan.sup_b_probability - 0.5) <= 1e-12 && !scan.reaches_determinism,
                   "sup P(b) = " + fmt(scan.sup_b_probability)});
    out.push_back({"mub", "superposition (a+ + a-)/sqrt(2) gives b+ with certainty",
                   std::abs(scan.superposition_b_probability - 1.0) <= 1e-12,
                   "P(b+) = " + fmt(scan.superposition_b_probability)});
    return out;
}

inline std::vector<CheckResult> real_search_suite() {
    std::vector<CheckResult> out;
    const bool expected[] = {true, false, true, false};
    std::string table;
    bool all_match = true;
    for (std::size_t n = 2; n <= 5; ++n) {
        auto report = real_equal_modulus_search(n);
        table += (n > 2 ? ", " : "") + std::string("n=") + std::to_string(n) + ": " + (report.feasible ? "yes" : "no");
        all_match = all_match && report.feasible == expected[n - 2];
    }
    out.push_back({"real-search", "real equal-modulus orthogonal matrices exist for n = 2..5 as yes,no,yes,no",
                   all_match, table});
    return out;
}

inline std::vector<CheckResult> phase_suite() {
    std::vector<CheckResult> out;
    RandomStream rng(99);
    for (std::size_t n = 2; n <= 4; ++n) {
        std::size_t converged = 0;
        for (int i = 0; i < 100; ++i) {
            PhaseRetrievalProblem p;
            p.basis_change = eigenbasis_matrix(fourier_basis(n)).adjoint();
            auto x = haar_random_state(n, rng);
            auto y = p.basis_change * x;
            for (std::size_t k = 0; k < n; ++k) {
                p.moduli_a.push_back(std::abs(x[k]));
                p.moduli_b.push_back(std::abs(y[k]));
            }
            if (retrieve_phases(p, 50, rng).converged) ++converged;
        }
        out.push_back({"phase", "planted problems converge, n = " + std::to_string(n), converged >= 99,
                       std::to_string(converged) + "/100"});
    }
    return out;
}

inline std::vector<CheckResult> spin_suite() {
    std::vector<CheckResult> out;
    double worst = 0.0, worst_complement = 0.0;
    for (int deg = 0; deg <= 720; ++deg) {
        const double half = deg * std::numbers::pi / 360.0;
        worst = std::max(worst, std::abs(spin_transition(deg) - std::cos(half) * std::cos(half)));
        worst_complement = std::max(worst_complement, std::abs(spin_transition(deg) + spin_transition(180.0 - deg) - 1.0));
    }
    out.push_back({"spin", "P(z-up) = cos^2(theta/2) at 1 degree steps over [0, 720]", worst <= 1e-12,
                   "max deviation " + fmt(worst)});
    out.push_back({"spin", "P(z-up) + P(z-down) = 1", worst_complement <= 1e-12, "max deviation " + fmt(worst_complement)});
    const double flip = max_abs_diff(spin_state(360.0), -spin_state(0.0));
    out.push_back({"spin", "a 360 degree turn negates the phase-space vector", flip <= 1e-12,
                   "deviation " + fmt(flip)});
    const double back = max_abs_diff(spin_state(720.0), spin_state(0.0));
    out.push_back({"spin", "a 720 degree turn restores it", back <= 1e-12, "deviation " + fmt(back)});
    return out;
}

inline std::vector<CheckResult> simulator_suite() {
    std::vector<CheckResult> out;
    auto scenario = table1_pair_scenario();
    const std::size_t trials = 10000;

    auto obs = run(scenario, ExperimentScript::parse("A,B,A,B"), Mode::observation, trials, 1);
    out.push_back({"simulator", "observation mode never invalidates", obs.total_invalidations == 0,
                   std::to_string(obs.total_invalidations) + " invalidations"});

    auto inter = run(scenario, ExperimentScript::parse("A,B,A"), Mode::interaction, trials, 42);
    const double rate = inter.invalidation.at("A|B").rate();
    const double sigma = std::sqrt(0.25 / trials);
    out.push_back({"simulator", "A,B,A invalidates A with probability 1/2", std::abs(rate - 0.5) <= 3.0 * sigma,
                   "rate " + fmt(rate)});
    out.push_back({"simulator", "interaction-mode statistics reject every fixed-value model",
                   classical_fit_check(inter) && !classical_fit_check(obs), ""});

    auto repeat = run(scenario, ExperimentScript::parse("A,A,A"), Mode::interaction, trials, 42);
    out.push_back({"simulator", "A,A,A never invalidates", repeat.total_invalidations == 0,
                   std::to_string(repeat.total_invalidations) + " invalidations"});

    auto again = run(scenario, ExperimentScript::parse("A,B,A"), Mode::interaction, trials, 42);
    bool same = true;
    for (std::size_t t = 0; t < trials && same; ++t) same = again.events(t) == inter.events(t);
    out.push_back({"simulator", "same seed reproduces the event log", same, ""});
    return out;
}

}  // namespace detail

/// Runs one suite by name, or every suite for "all". Throws DomainError for
/// an unknown name.
inline std::vector<CheckResult> run_suite(const std::string &suite) {
    using Fn = std::vector<CheckResult> (*)();
    const std::vector<std::pair<std::string, Fn>> table = {
        {"born", detail::born_suite},     {"mub", detail::mub_suite},   {"real-search", detail::real_search_suite},
        {"phase", detail::phase_suite},   {"spin", detail::spin_suite}, {"simulator", detail::simulator_suite},
    };
    std::vector<CheckResult> out;
    bool found = false;
    for (const auto &[name, fn] : table) {
        if (suite == "all" || suite == name) {
            found = true;
            auto results = fn();
            out.insert(out.end(), results.begin(), results.end());
        }
    }
    if (!found) throw DomainError("unknown suite '" + suite + "'");
    return out;
}

}  // namespace qdi::verify
