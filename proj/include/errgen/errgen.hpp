// Copyright 2026 The errgen Authors
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


// Convenience header pulling in the whole library.

#pragma once

#include "errgen/circuit.hpp"
#include "errgen/clifford.hpp"
#include "errgen/errorgen.hpp"
#include "errgen/expand.hpp"
#include "errgen/generators.hpp"
#include "errgen/noise_model.hpp"
#include "errgen/oracle.hpp"
#include "errgen/parallel.hpp"
#include "errgen/pauli.hpp"
#include "errgen/propagate.hpp"
#include "errgen/sensitivity.hpp"
#include "errgen/stabilizer.hpp"

namespace errgen {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace errgen
