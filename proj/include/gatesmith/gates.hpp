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

#include <string_view>
#include <vector>

#include "gatesmith/circuit.hpp"

/// Standard discrete gates. Names are the lower-case surface names used in
/// programs. Two-qubit controlled gates take (control, target).
namespace gatesmith::gates {

GatePtr h();
GatePtr t();
GatePtr tdg();
GatePtr s();
GatePtr x();
GatePtr y();
GatePtr z();
GatePtr sx();
GatePtr sxdg();
GatePtr cnot();
GatePtr cy();
GatePtr cz();
GatePtr cs();
GatePtr ch();
GatePtr swap();
GatePtr iswap();

/// {h, t, tdg, cnot}
std::vector<GatePtr> elementary_set();
/// The 16-gate high-level set used to generate tasks.
std::vector<GatePtr> task_set();
/// Look up any of the gates above by name; null when unknown.
GatePtr by_name(std::string_view name);

} // namespace gatesmith::gates
