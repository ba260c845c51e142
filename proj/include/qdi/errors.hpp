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

#include <stdexcept>
#include <string>

namespace qdi {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ZeroVectorError : Error { using Error::Error; };
struct NotHermitianError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct ImpossibleOutcomeError : Error { using Error::Error; };
struct DegenerateSpectrumError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct TableError : Error { using Error::Error; };
struct ScriptError : Error { using Error::Error; };
struct ModeError : Error { using Error::Error; };
/// Malformed measurement or scenario definition.
struct DefinitionError : Error { using Error::Error; };

inline void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

}  // namespace qdi
