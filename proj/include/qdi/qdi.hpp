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

// Umbrella header for the in-process library (everything except the HTTP
// front end, which lives in qdi/service.hpp).

#pragma once

#include "qdi/eigen.hpp"
#include "qdi/errors.hpp"
#include "qdi/incompatibility.hpp"
#include "qdi/json_io.hpp"
#include "qdi/linear.hpp"
#include "qdi/measurement.hpp"
#include "qdi/random.hpp"
#include "qdi/scenario.hpp"
#include "qdi/session.hpp"
#include "qdi/simulator.hpp"
#include "qdi/verify.hpp"
