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

#include <cstdint>
#include <random>
#include <stdexcept>

namespace gatesmith {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n). Unlike std::uniform_int_distribution the
/// sequence is the same on every standard library.
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform_index: empty range");
    }
    const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
    std::uint64_t v = rng();
    while (v > limit) {
        v = rng();
    }
    return v % n;
}

} // namespace gatesmith
