// Copyright 2026 The Gatesmith Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "gatesmith/circuit.hpp"
#include "gatesmith/gates.hpp"

namespace testing {

inline gatesmith::Circuit circuit(
    int n, std::initializer_list<std::pair<gatesmith::GatePtr, std::vector<int>>> steps) {
    gatesmith::Circuit c;
    c.n_qubits = n;
    for (const auto &[g, q] : steps) {
        c.placements.push_back(gatesmith::Placement{g, q});
    }
    return c;
}

} // namespace testing
