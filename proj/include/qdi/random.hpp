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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qdi/linear.hpp"

namespace qdi {

/// splitmix64 finalizer; used to derive independent seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Explicit source of randomness. Owned by one caller at a time.
class RandomStream {
   public:
    explicit RandomStream(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    /// Independent stream for (seed, index), e.g. one per Monte-Carlo trial.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(mix_seed(seed) ^ mix_seed(~index));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() { return normal_(engine_); }

    std::uint64_t next_u64() { return engine_(); }

    std::mt19937_64 &engine() { return engine_; }

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Unitarily invariant (Haar) random unit state: normalized complex Gaussian.
inline StateVector haar_random_state(std::size_t dim, RandomStream &rng) {
    std::vector<Complex> amps(dim);
    for (auto &z : amps) {
        double re = rng.normal();
        double im = rng.normal();
        z = Complex{re, im};
    }
    return normalize(StateVector(std::move(amps)));
}

/// Haar random unitary via Gram-Schmidt on a complex Gaussian matrix.
inline ComplexMatrix haar_random_unitary(std::size_t dim, RandomStream &rng) {
    std::vector<StateVector> cols;
    cols.reserve(dim);
    while (cols.size() < dim) {
        std::vector<Complex> amps(dim);
        for (auto &z : amps) {
            double re = rng.normal();
            double im = rng.normal();
            z = Complex{re, im};
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &c : cols) {
                Complex proj = inner_product(c, StateVector(amps));
                for (std::size_t k = 0; k < dim; ++k) amps[k] -= proj * c[k];
            }
        }
        StateVector v(std::move(amps));
        double n2 = squared_norm(v);
        if (n2 < 1e-12) continue;
        cols.push_back(v.scaled(1.0 / std::sqrt(n2)));
    }
    return ComplexMatrix::from_columns(cols);
}

}  // namespace qdi
