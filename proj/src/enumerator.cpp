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
#include "gatesmith/enumerator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace gatesmith {

namespace {

constexpr double kCostScale = 1099511627776.0; // 2^40 fixed-point units per nat

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

void EnumConfig::check() const {
    if (k < 1) {
        throw std::invalid_argument("enum config: k must be >= 1");
    }
    if (timeout_s < 0.0) {
        throw std::invalid_argument("enum config: timeout must be >= 0");
    }
    if (workers < 1) {
        throw std::invalid_argument("enum config: workers must be >= 1");
    }
    if (max_placements < 0) {
        throw std::invalid_argument("enum config: max_placements must be >= 0");
    }
    if (!(tolerance > 0.0) || !(key_quantum > 0.0)) {
        throw std::invalid_argument("enum config: tolerances must be positive");
    }
}

// ---------------------------------------------------------------------------
// Search space and sharding

SearchSpace::SearchSpace(const Library &lib, int n_qubits, const Connectivity &constraint)
    : n_qubits_(n_qubits), gates_(lib.gates().begin(), lib.gates().end()),
      base_log_prob_(std::log(lib.end_weight())) {
    if (n_qubits < 1 || n_qubits > 10) {
        throw std::invalid_argument("search space: unsupported qubit count " +
                                    std::to_string(n_qubits));
    }
    for (std::uint32_t g = 0; g < gates_.size(); ++g) {
        const auto assignments = valid_assignments(*gates_[g], n_qubits, constraint);
        if (assignments.empty()) {
            continue; // wider than the register or blocked by the constraint
        }
        const double step = std::log(lib.weight(g)) -
                            std::log(static_cast<double>(assignments.size()));
        for (const auto &qubits : assignments) {
            Move m;
            m.gate = g;
            m.qubits = qubits;
            m.log_step = step;
            m.cost = std::llround(-step * kCostScale);
            m.op = SparseOperator(embed(gates_[g]->matrix(), qubits, n_qubits));
            moves_.push_back(std::move(m));
        }
    }
    order_.resize(moves_.size());
    for (std::uint32_t i = 0; i < order_.size(); ++i) {
        order_[i] = i;
    }
    std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        return moves_[a].cost < moves_[b].cost;
    });
}

double SearchSpace::log_prob_of_cost(std::int64_t cost) const {
    return base_log_prob_ - static_cast<double>(cost) / kCostScale;
}

std::vector<ShardDescriptor> shard_space(int workers, std::size_t branching) {
    if (workers < 1) {
        throw std::invalid_argument("shard_space: workers must be >= 1");
    }
    if (workers == 1) {
        return {ShardDescriptor{0, 1, 0, branching}};
    }
    if (branching < 2) {
        throw std::invalid_argument("shard_space: cannot split a space with branching < 2");
    }
    int level = 1;
    std::size_t reach = branching;
    while (reach < static_cast<std::size_t>(workers)) {
        reach *= branching;
        ++level;
    }
    std::vector<ShardDescriptor> shards;
    for (int i = 0; i < workers; ++i) {
        shards.push_back(ShardDescriptor{i, workers, level, branching});
    }
    return shards;
}

int shard_of(const ShardDescriptor &shard, std::span<const std::uint32_t> moves) {
    if (shard.count <= 1 || static_cast<int>(moves.size()) < shard.level) {
        return 0;
    }
    std::uint64_t rank = 0;
    const auto count = static_cast<std::uint64_t>(shard.count);
    for (int i = 0; i < shard.level; ++i) {
        rank = (rank * (shard.branching % count) + moves[static_cast<std::size_t>(i)]) % count;
    }
    return static_cast<int>(rank);
}

// ---------------------------------------------------------------------------
// Engine

class SearchEngine {
  public:
    SearchEngine(const SearchSpace &space, const EnumConfig &cfg, const ShardDescriptor &shard)
        : space_(space), cfg_(cfg), shard_(shard), dim_(space.dim()), mat_size_(dim_ * dim_) {
        const std::size_t budget_bytes = std::size_t{48} << 20;
        slots_ = std::max<std::size_t>(64, budget_bytes / (mat_size_ * sizeof(Complex)));
        slots_ = std::min<std::size_t>(slots_, std::size_t{1} << 16);
        cache_.resize(slots_ * mat_size_);
        tags_.assign(slots_, -1);
        scratch_.resize(mat_size_);
        replay_.resize(mat_size_);
    }

    ShardReport run(const Visitor &visitor) {
        const auto start = Clock::now();
        ShardReport report;
        const auto &order = space_.order();

        // Root: the empty circuit.
        nodes_.push_back(Node{-1, 0, 0, 0});
        {
            auto root = slot_for(0);
            std::fill(root.begin(), root.end(), Complex{});
            for (std::size_t i = 0; i < dim_; ++i) {
                root[i * dim_ + i] = 1.0;
            }
            tags_[0] = 0;
            std::copy(root.begin(), root.end(), scratch_.begin());
        }
        std::uint64_t processed = 0;
        bool keep_going = true;
        {
            Visit v = make_visit(-1, 0, 0, 0);
            const bool owned = shard_.count == 1 || shard_.index == 0;
            record(v);
            if (owned) {
                ++report.visited;
                ++report.emitted;
                keep_going = visitor(v);
            }
            ++processed;
        }
        if (keep_going && cfg_.max_placements > 0 && !order.empty()) {
            heap_.push(Entry{space_.moves()[order[0]].cost, 1, 0, 0});
        }

        std::int64_t last_cost = -1;
        while (keep_going) {
            if (heap_.empty()) {
                report.stop_reason = "exhausted";
                break;
            }
            if (cfg_.max_nodes != 0 && processed >= cfg_.max_nodes) {
                report.stop_reason = "node_budget";
                break;
            }
            const Entry e = heap_.top();
            if (cfg_.timeout_s > 0.0 && e.cost != last_cost && (processed & 255U) == 0 &&
                seconds_since(start) > cfg_.timeout_s) {
                report.stop_reason = "timeout";
                break;
            }
            last_cost = e.cost;
            heap_.pop();
            const Node &parent = nodes_[static_cast<std::size_t>(e.parent)];
            if (e.rank + 1 < order.size()) {
                heap_.push(Entry{parent.cost + space_.moves()[order[e.rank + 1]].cost, e.depth,
                                 e.parent, e.rank + 1});
            }
            const std::uint32_t move = order[e.rank];

            bool owned = true;
            if (shard_.count > 1 && e.depth <= shard_.level) {
                if (e.depth == shard_.level) {
                    if (prefix_shard(e.parent, move) != shard_.index) {
                        continue;
                    }
                } else {
                    owned = shard_.index == 0;
                }
            }
            ++processed;

            const auto parent_matrix = matrix_of(e.parent);
            space_.moves()[move].op.apply_left(parent_matrix, scratch_);
            Visit v = make_visit(e.parent, move, e.depth, e.cost);
            const bool expand = record(v);
            if (owned) {
                ++report.visited;
                if (v.duplicate) {
                    if (!expand) {
                        ++report.pruned;
                    }
                } else {
                    ++report.emitted;
                }
                keep_going = visitor(v);
                if (!keep_going) {
                    report.stop_reason = "stopped";
                }
            }
            if (keep_going && expand && e.depth < cfg_.max_placements && !order.empty()) {
                const auto id = static_cast<std::int32_t>(nodes_.size());
                nodes_.push_back(Node{e.parent, move, e.depth, e.cost});
                auto slot = slot_for(id);
                std::copy(scratch_.begin(), scratch_.end(), slot.begin());
                tags_[static_cast<std::size_t>(id) % slots_] = id;
                heap_.push(Entry{e.cost + space_.moves()[order[0]].cost, e.depth + 1, id, 0});
            }
        }
        report.elapsed_s = seconds_since(start);
        return report;
    }

    [[nodiscard]] std::vector<std::uint32_t> path(std::int32_t parent, std::uint32_t move,
                                                  int depth) const {
        std::vector<std::uint32_t> out;
        if (depth == 0) {
            return out;
        }
        out.push_back(move);
        for (std::int32_t n = parent; n > 0; n = nodes_[static_cast<std::size_t>(n)].parent) {
            out.push_back(nodes_[static_cast<std::size_t>(n)].move);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    [[nodiscard]] Circuit circuit(std::int32_t parent, std::uint32_t move, int depth) const {
        Circuit c{space_.n_qubits(), {}};
        for (std::uint32_t m : path(parent, move, depth)) {
            const auto &mv = space_.moves()[m];
            c.placements.push_back(Placement{space_.gate(mv.gate), mv.qubits});
        }
        return c;
    }

  private:
    struct Node {
        std::int32_t parent;
        std::uint32_t move;
        std::int32_t depth;
        std::int64_t cost;
    };

    struct Entry {
        std::int64_t cost;
        std::int32_t depth;
        std::int32_t parent;
        std::uint32_t rank;
    };

    struct Seen {
        std::int32_t depth;
    };

    // True when a should be visited before b.
    [[nodiscard]] bool before(const Entry &a, const Entry &b) const {
        if (a.cost != b.cost) {
            return a.cost < b.cost;
        }
        if (a.depth != b.depth) {
            return a.depth < b.depth;
        }
        const auto &order = space_.order();
        if (a.parent == b.parent) {
            return order[a.rank] < order[b.rank];
        }
        std::int32_t pa = a.parent;
        std::int32_t pb = b.parent;
        while (nodes_[static_cast<std::size_t>(pa)].parent !=
               nodes_[static_cast<std::size_t>(pb)].parent) {
            pa = nodes_[static_cast<std::size_t>(pa)].parent;
            pb = nodes_[static_cast<std::size_t>(pb)].parent;
        }
        return nodes_[static_cast<std::size_t>(pa)].move <
               nodes_[static_cast<std::size_t>(pb)].move;
    }

    struct HeapCompare {
        const SearchEngine *engine;
        bool operator()(const Entry &a, const Entry &b) const { return engine->before(b, a); }
    };

    int prefix_shard(std::int32_t parent, std::uint32_t move) const {
        const auto moves = path(parent, move, shard_.level);
        return shard_of(shard_, moves);
    }

    std::span<Complex> slot_for(std::int32_t id) {
        const std::size_t s = static_cast<std::size_t>(id) % slots_;
        return {cache_.data() + s * mat_size_, mat_size_};
    }

    // Accumulated unitary of a stored node, replayed from the nearest cached ancestor.
    std::span<const Complex> matrix_of(std::int32_t id) {
        if (tags_[static_cast<std::size_t>(id) % slots_] == id) {
            return slot_for(id);
        }
        std::vector<std::int32_t> chain;
        std::int32_t n = id;
        while (n != 0 && tags_[static_cast<std::size_t>(n) % slots_] != n) {
            chain.push_back(n);
            n = nodes_[static_cast<std::size_t>(n)].parent;
        }
        if (n == 0 && tags_[0] != 0) {
            auto root = slot_for(0);
            std::fill(root.begin(), root.end(), Complex{});
            for (std::size_t i = 0; i < dim_; ++i) {
                root[i * dim_ + i] = 1.0;
            }
            tags_[0] = 0;
        }
        {
            auto src = slot_for(n);
            std::copy(src.begin(), src.end(), replay_.begin());
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const auto &mv = space_.moves()[nodes_[static_cast<std::size_t>(*it)].move];
            auto dst = slot_for(*it);
            mv.op.apply_left(replay_, dst);
            tags_[static_cast<std::size_t>(*it) % slots_] = *it;
            std::copy(dst.begin(), dst.end(), replay_.begin());
        }
        auto dst = slot_for(id);
        std::copy(replay_.begin(), replay_.end(), dst.begin());
        tags_[static_cast<std::size_t>(id) % slots_] = id;
        return dst;
    }

    Visit make_visit(std::int32_t parent, std::uint32_t move, int depth, std::int64_t cost) {
        Visit v;
        v.engine_ = this;
        v.parent_ = parent;
        v.move_ = move;
        v.depth = depth;
        v.cost = cost;
        v.log_prob = space_.log_prob_of_cost(cost);
        v.unitary = scratch_;
        v.key = canonical_key(v.unitary, cfg_.key_quantum);
        return v;
    }

    // Updates the frontier cache; returns whether the node should be expanded.
    bool record(Visit &v) {
        if (!cfg_.prune) {
            v.duplicate = false;
            return true;
        }
        auto [it, inserted] = seen_.try_emplace(v.key, Seen{v.depth});
        if (inserted) {
            return true;
        }
        v.duplicate = true;
        if (it->second.depth <= v.depth) {
            return false;
        }
        // Reached earlier only by a longer circuit: keep expanding so the
        // depth cap cannot hide unitaries.
        it->second.depth = v.depth;
        return true;
    }

    const SearchSpace &space_;
    const EnumConfig &cfg_;
    ShardDescriptor shard_;
    std::size_t dim_;
    std::size_t mat_size_;
    std::size_t slots_ = 0;
    std::vector<Complex> cache_;
    std::vector<std::int32_t> tags_;
    std::vector<Complex> scratch_;
    std::vector<Complex> replay_;
    std::vector<Node> nodes_;
    std::unordered_map<UnitaryKey, Seen, UnitaryKeyHash> seen_;
    std::priority_queue<Entry, std::vector<Entry>, HeapCompare> heap_{HeapCompare{this}};
};

Circuit Visit::circuit() const { return engine_->circuit(parent_, move_, depth); }

std::vector<std::uint32_t> Visit::moves() const { return engine_->path(parent_, move_, depth); }

ShardReport search_shard(const SearchSpace &space, const EnumConfig &cfg,
                         const ShardDescriptor &shard, const Visitor &visitor) {
    cfg.check();
    SearchEngine engine(space, cfg, shard);
    return engine.run(visitor);
}

EnumReport search(const SearchSpace &space, const EnumConfig &cfg,
                  const std::function<Visitor(const ShardDescriptor &)> &make_visitor) {
    cfg.check();
    const auto start = Clock::now();
    const auto shards = shard_space(cfg.workers, space.moves().size());
    EnumConfig shard_cfg = cfg;
    if (cfg.max_nodes != 0 && shards.size() > 1) {
        shard_cfg.max_nodes = (cfg.max_nodes + shards.size() - 1) / shards.size();
    }
    std::vector<ShardReport> reports(shards.size());
    std::vector<Visitor> visitors;
    visitors.reserve(shards.size());
    for (const auto &s : shards) {
        visitors.push_back(make_visitor(s));
    }
    if (shards.size() == 1) {
        reports[0] = search_shard(space, shard_cfg, shards[0], visitors[0]);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(shards.size());
        for (std::size_t i = 0; i < shards.size(); ++i) {
            threads.emplace_back([&, i] {
                try {
                    reports[i] = search_shard(space, shard_cfg, shards[i], visitors[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
        for (auto &t : threads) {
            t.join();
        }
        for (const auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    EnumReport report;
    for (const auto &r : reports) {
        report.visited += r.visited;
        report.pruned += r.pruned;
        report.emitted += r.emitted;
    }
    report.per_shard = std::move(reports);
    report.elapsed_s = seconds_since(start);
    return report;
}

EnumReport enumerate(const Library &lib, int n_qubits, const Connectivity &constraint,
                     const EnumConfig &cfg,
                     const std::function<void(const ScoredCircuit &)> &sink) {
    const SearchSpace space(lib, n_qubits, constraint);
    if (cfg.workers == 1) {
        return search(space, cfg, [&](const ShardDescriptor &) -> Visitor {
            return [&](const Visit &v) {
                if (!v.duplicate) {
                    sink(ScoredCircuit{v.circuit(), v.log_prob});
                }
                return true;
            };
        });
    }

    struct Emission {
        std::int64_t cost;
        std::vector<std::uint32_t> moves;
        UnitaryKey key;
        ScoredCircuit scored;
    };
    std::vector<std::vector<Emission>> per_shard(static_cast<std::size_t>(cfg.workers));
    EnumReport report = search(space, cfg, [&](const ShardDescriptor &shard) -> Visitor {
        auto &out = per_shard[static_cast<std::size_t>(shard.index)];
        return [&out](const Visit &v) {
            if (!v.duplicate) {
                out.push_back(Emission{v.cost, v.moves(), v.key,
                                       ScoredCircuit{v.circuit(), v.log_prob}});
            }
            return true;
        };
    });
    std::vector<Emission> merged;
    for (auto &shard : per_shard) {
        std::move(shard.begin(), shard.end(), std::back_inserter(merged));
    }
    std::sort(merged.begin(), merged.end(), [](const Emission &a, const Emission &b) {
        if (a.cost != b.cost) {
            return a.cost < b.cost;
        }
        if (a.moves.size() != b.moves.size()) {
            return a.moves.size() < b.moves.size();
        }
        return a.moves < b.moves;
    });
    std::unordered_map<UnitaryKey, bool, UnitaryKeyHash> delivered;
    std::uint64_t emitted = 0;
    for (const auto &e : merged) {
        if (cfg.prune && !delivered.try_emplace(e.key, true).second) {
            continue;
        }
        ++emitted;
        sink(e.scored);
    }
    report.emitted = emitted;
    return report;
}

// ---------------------------------------------------------------------------
// Synthesis

TaskMatcher::TaskMatcher(std::span<const Task> tasks, double tolerance, double key_quantum)
    : tasks_(tasks), tolerance_(tolerance) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        by_key_[canonical_key(tasks[i].unitary, key_quantum)].push_back(i);
    }
}

void TaskMatcher::match(const Visit &visit, std::vector<std::size_t> &out) const {
    out.clear();
    const auto it = by_key_.find(visit.key);
    if (it == by_key_.end()) {
        return;
    }
    for (std::size_t i : it->second) {
        const auto &u = tasks_[i].unitary;
        if (u.entries().size() == visit.unitary.size() &&
            phase_aligned_distance(visit.unitary, u.entries()) <= tolerance_) {
            out.push_back(i);
        }
    }
}

bool solution_before(const ScoredCircuit &a, const ScoredCircuit &b, const Library &lib) {
    if (a.log_prob != b.log_prob) {
        return a.log_prob > b.log_prob;
    }
    const auto &pa = a.circuit.placements;
    const auto &pb = b.circuit.placements;
    if (pa.size() != pb.size()) {
        return pa.size() < pb.size();
    }
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const auto ia = lib.index_of(pa[i].gate->name()).value_or(lib.size());
        const auto ib = lib.index_of(pb[i].gate->name()).value_or(lib.size());
        if (ia != ib) {
            return ia < ib;
        }
        if (pa[i].qubits != pb[i].qubits) {
            return pa[i].qubits < pb[i].qubits;
        }
    }
    return false;
}

void normalize_solution_set(SolutionSet &set, const Library &lib, const Connectivity &constraint,
                            int k) {
    for (auto &s : set.circuits) {
        s.log_prob = circuit_log_prob(s.circuit, lib, constraint);
    }
    std::stable_sort(set.circuits.begin(), set.circuits.end(),
                     [&](const ScoredCircuit &a, const ScoredCircuit &b) {
                         return solution_before(a, b, lib);
                     });
    std::vector<ScoredCircuit> kept;
    for (auto &s : set.circuits) {
        if (static_cast<int>(kept.size()) >= k) {
            break;
        }
        const bool seen = std::any_of(kept.begin(), kept.end(), [&](const ScoredCircuit &o) {
            return same_circuit(o.circuit, s.circuit);
        });
        if (!seen) {
            kept.push_back(std::move(s));
        }
    }
    set.circuits = std::move(kept);
}

SynthesisResult synthesize_batch(std::span<const Task> tasks, const Library &lib,
                                 const Connectivity &constraint, const EnumConfig &cfg,
                                 const SolutionStore &existing) {
    cfg.check();
    SynthesisResult result;
    result.solutions = existing;
    if (tasks.empty()) {
        return result;
    }
    const int n_qubits = tasks.front().unitary.n_qubits();
    for (const auto &t : tasks) {
        if (t.unitary.n_qubits() != n_qubits) {
            throw std::invalid_argument("synthesize_batch: tasks must share the qubit count");
        }
    }
    const SearchSpace space(lib, n_qubits, constraint);
    const TaskMatcher matcher(tasks, cfg.tolerance, cfg.key_quantum);
    const auto k = static_cast<std::size_t>(cfg.k);

    using Hits = std::vector<std::vector<ScoredCircuit>>;
    std::vector<Hits> per_shard(static_cast<std::size_t>(cfg.workers),
                                Hits(tasks.size()));
    result.report = search(space, cfg, [&](const ShardDescriptor &shard) -> Visitor {
        auto &hits = per_shard[static_cast<std::size_t>(shard.index)];
        return [&hits, &matcher, k, &cfg, open = tasks.size(),
                found = std::vector<std::size_t>{}](const Visit &v) mutable {
            matcher.match(v, found);
            for (std::size_t i : found) {
                if (hits[i].size() < k) {
                    hits[i].push_back(ScoredCircuit{v.circuit(), v.log_prob});
                    if (hits[i].size() == k) {
                        --open;
                    }
                }
            }
            return !(cfg.stop_when_solved && open == 0);
        };
    });

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto &set = result.solutions[tasks[i].id];
        set.task_id = tasks[i].id;
        for (auto &shard : per_shard) {
            for (auto &s : shard[i]) {
                set.circuits.push_back(std::move(s));
            }
        }
        normalize_solution_set(set, lib, constraint, cfg.k);
    }
    return result;
}

} // namespace gatesmith
