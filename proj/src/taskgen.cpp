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
#include "gatesmith/taskgen.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "gatesmith/random.hpp"

namespace gatesmith {

namespace {

struct Seen {
    // Ordering data from the first (most probable) visit.
    std::int64_t first_cost = 0;
    int first_depth = 0;
    std::vector<std::uint32_t> first_moves;
    // Shortest generator.
    int depth = 0;
    std::vector<std::uint32_t> moves;
    Circuit circuit;
};

bool before(std::int64_t cost_a, int depth_a, const std::vector<std::uint32_t> &moves_a,
            std::int64_t cost_b, int depth_b, const std::vector<std::uint32_t> &moves_b) {
    if (cost_a != cost_b) {
        return cost_a < cost_b;
    }
    if (depth_a != depth_b) {
        return depth_a < depth_b;
    }
    return moves_a < moves_b;
}

void absorb(std::unordered_map<UnitaryKey, Seen, UnitaryKeyHash> &into, const UnitaryKey &key,
            Seen s) {
    auto [it, inserted] = into.try_emplace(key, std::move(s));
    if (inserted) {
        return;
    }
    Seen &have = it->second;
    if (before(s.first_cost, s.first_depth, s.first_moves, have.first_cost, have.first_depth,
               have.first_moves)) {
        have.first_cost = s.first_cost;
        have.first_depth = s.first_depth;
        have.first_moves = s.first_moves;
    }
    if (s.depth < have.depth || (s.depth == have.depth && s.moves < have.moves)) {
        have.depth = s.depth;
        have.moves = std::move(s.moves);
        have.circuit = std::move(s.circuit);
    }
}

} // namespace

Task to_task(const TaskRecord &record) { return Task{record.id, record.unitary}; }

std::vector<Task> to_tasks(const std::vector<TaskRecord> &records) {
    std::vector<Task> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(to_task(r));
    }
    return out;
}

std::vector<TaskRecord> generate_pool(const std::vector<GatePtr> &g_tasks, int n_qubits,
                                      const EnumConfig &budget) {
    const Library lib = Library::uniform(g_tasks);
    const SearchSpace space(lib, n_qubits, Connectivity::full());
    EnumConfig cfg = budget;
    cfg.stop_when_solved = false;

    const int workers = std::max(1, cfg.workers);
    std::vector<std::unordered_map<UnitaryKey, Seen, UnitaryKeyHash>> per_shard(
        static_cast<std::size_t>(workers));
    search(space, cfg, [&](const ShardDescriptor &shard) -> Visitor {
        auto &seen = per_shard[static_cast<std::size_t>(shard.index)];
        return [&seen](const Visit &v) {
            auto it = seen.find(v.key);
            if (it != seen.end() && it->second.depth <= v.depth) {
                return true;
            }
            Seen s;
            s.first_cost = v.cost;
            s.first_depth = v.depth;
            s.first_moves = v.moves();
            s.depth = v.depth;
            s.moves = s.first_moves;
            s.circuit = v.circuit();
            absorb(seen, v.key, std::move(s));
            return true;
        };
    });

    std::unordered_map<UnitaryKey, Seen, UnitaryKeyHash> merged = std::move(per_shard.front());
    for (std::size_t i = 1; i < per_shard.size(); ++i) {
        for (auto &[key, s] : per_shard[i]) {
            absorb(merged, key, std::move(s));
        }
    }
    std::vector<const Seen *> ordered;
    ordered.reserve(merged.size());
    for (const auto &[key, s] : merged) {
        ordered.push_back(&s);
    }
    std::sort(ordered.begin(), ordered.end(), [](const Seen *a, const Seen *b) {
        return before(a->first_cost, a->first_depth, a->first_moves, b->first_cost,
                      b->first_depth, b->first_moves);
    });

    std::vector<TaskRecord> pool;
    pool.reserve(ordered.size());
    for (const Seen *s : ordered) {
        TaskRecord r;
        char id[32];
        std::snprintf(id, sizeof id, "task-%06zu", pool.size());
        r.id = id;
        r.n_qubits = n_qubits;
        r.unitary = eval_unitary(s->circuit);
        r.source_circuit = s->circuit;
        r.gate_count = static_cast<int>(s->circuit.size());
        pool.push_back(std::move(r));
    }
    return pool;
}

PoolSplit split_pool(const std::vector<TaskRecord> &pool, std::size_t n_train,
                     std::uint64_t seed) {
    if (n_train > pool.size()) {
        throw std::invalid_argument("split_pool: asked for " + std::to_string(n_train) +
                                    " training tasks from a pool of " +
                                    std::to_string(pool.size()));
    }
    std::map<int, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        strata[pool[i].gate_count].push_back(i);
    }
    std::vector<std::vector<std::size_t>> open;
    for (auto &[count, members] : strata) {
        open.push_back(std::move(members));
    }

    Rng rng(seed);
    std::vector<bool> chosen(pool.size(), false);
    PoolSplit out;
    while (out.train.size() < n_train) {
        const auto s = uniform_index(rng, open.size());
        auto &members = open[s];
        const auto j = uniform_index(rng, members.size());
        const std::size_t pick = members[j];
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(j));
        if (members.empty()) {
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(s));
        }
        chosen[pick] = true;
        out.train.push_back(pool[pick]);
        out.train.back().split = Split::Train;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!chosen[i]) {
            out.test.push_back(pool[i]);
            out.test.back().split = Split::Test;
        }
    }
    return out;
}

} // namespace gatesmith
