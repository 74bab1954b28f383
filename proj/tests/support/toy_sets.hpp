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

#include <random>
#include <string>

#include "gatesmith/enumerator.hpp"
#include "gatesmith/gates.hpp"

namespace testing {

// Random circuit over G0 on two qubits together with equivalent variants
// obtained by inserting identities.
inline gatesmith::SolutionSet random_set(std::mt19937_64 &rng, const std::string &id) {
    using namespace gatesmith;
    using namespace gatesmith::gates;
    std::uniform_int_distribution<int> gate(0, 3);
    std::uniform_int_distribution<int> wire(0, 1);
    std::uniform_int_distribution<int> len(1, 5);
    Circuit c;
    c.n_qubits = 2;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
        const int g = gate(rng);
        const int q = wire(rng);
        if (g == 3) {
            c.placements.push_back({cnot(), {q, 1 - q}});
        } else {
            c.placements.push_back({g == 0 ? h() : g == 1 ? t() : tdg(), {q}});
        }
    }
    SolutionSet set{id, {{c, 0.0}}};
    const int variants = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int v = 0; v < variants; ++v) {
        Circuit d = c;
        const auto at = d.placements.begin() +
                        std::uniform_int_distribution<long>(0, static_cast<long>(d.size()))(rng);
        const int q = wire(rng);
        if (v == 0) {
            d.placements.insert(at, {{h(), {q}}, {h(), {q}}});
        } else {
            d.placements.insert(at, {{t(), {q}}, {tdg(), {q}}});
        }
        set.circuits.push_back({d, 0.0});
    }
    return set;
}

inline gatesmith::SolutionStore random_store(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    gatesmith::SolutionStore store;
    const int tasks = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < tasks; ++i) {
        const std::string id = "r" + std::to_string(i);
        store[id] = random_set(rng, id);
    }
    return store;
}

} // namespace testing
