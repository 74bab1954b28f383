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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gatesmith/circuit.hpp"
#include "gatesmith/library.hpp"

namespace gatesmith {

struct EnumConfig {
    /// Visited-node budget per run; deterministic. 0 means unbounded.
    std::uint64_t max_nodes = 0;
    /// Wall-clock budget in seconds; 0 means none. Checked only between
    /// probability levels.
    double timeout_s = 0.0;
    /// Solutions retained per task.
    int k = 2;
    /// Depth cap on the number of placements.
    int max_placements = 12;
    int workers = 1;
    /// Observational-equivalence pruning.
    bool prune = true;
    /// synthesize_batch stops once every task holds k solutions.
    bool stop_when_solved = true;
    double tolerance = kEqualityTolerance;
    double key_quantum = kKeyQuantum;

    /// Throws std::invalid_argument on out-of-range values.
    void check() const;
};

struct ScoredCircuit {
    Circuit circuit;
    double log_prob = kNegInf;
};

/// One part of a partition of the circuit space. Circuits with at least
/// `level` placements belong to shard (rank of their first `level` placements,
/// read as a base-`branching` number) mod count; shorter circuits belong to
/// shard 0.
struct ShardDescriptor {
    int index = 0;
    int count = 1;
    int level = 0;
    std::size_t branching = 0;
};

/// Partition for @p workers over a space whose first level has @p branching
/// placements. The level grows until branching^level >= workers.
std::vector<ShardDescriptor> shard_space(int workers, std::size_t branching);

/// Shard owning the circuit whose placement indices (in SearchSpace move
/// order) are @p moves.
int shard_of(const ShardDescriptor &shard, std::span<const std::uint32_t> moves);

struct ShardReport {
    std::uint64_t visited = 0;
    std::uint64_t pruned = 0;
    std::uint64_t emitted = 0;
    double elapsed_s = 0.0;
    /// "exhausted", "node_budget", "timeout" or "stopped".
    std::string stop_reason = "exhausted";
};

struct EnumReport {
    std::uint64_t visited = 0;
    std::uint64_t pruned = 0;
    std::uint64_t emitted = 0;
    double elapsed_s = 0.0;
    std::vector<ShardReport> per_shard;
};

/**
 * @brief All placements available under a library, precomputed for search.
 *
 * Moves are indexed in (gate index, qubit tuple) lexicographic order; each
 * carries the exact log-probability decrement ln theta_g + ln chi and the
 * embedded operator.
 */
class SearchSpace {
  public:
    struct Move {
        std::uint32_t gate = 0;
        std::vector<int> qubits;
        double log_step = 0.0;
        std::int64_t cost = 0; // fixed-point -log_step
        SparseOperator op;
    };

    /// Gates with no valid assignment on this register contribute no moves.
    SearchSpace(const Library &lib, int n_qubits, const Connectivity &constraint);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_qubits_; }
    [[nodiscard]] const std::vector<Move> &moves() const { return moves_; }
    /// Move indices sorted by (cost, index).
    [[nodiscard]] const std::vector<std::uint32_t> &order() const { return order_; }
    [[nodiscard]] const GatePtr &gate(std::uint32_t i) const { return gates_[i]; }
    [[nodiscard]] double base_log_prob() const { return base_log_prob_; }
    [[nodiscard]] double log_prob_of_cost(std::int64_t cost) const;

  private:
    int n_qubits_ = 1;
    std::vector<GatePtr> gates_;
    std::vector<Move> moves_;
    std::vector<std::uint32_t> order_;
    double base_log_prob_ = 0.0;
};

class SearchEngine;

/// A node reached during search.
class Visit {
  public:
    double log_prob = 0.0;
    int depth = 0;
    std::int64_t cost = 0;
    std::span<const Complex> unitary;
    UnitaryKey key;
    /// The key was reached before by a circuit of greater or equal probability.
    bool duplicate = false;

    /// Materialize the circuit of this node.
    [[nodiscard]] Circuit circuit() const;
    /// Move indices from the first placement to the last.
    [[nodiscard]] std::vector<std::uint32_t> moves() const;

  private:
    friend class SearchEngine;
    const SearchEngine *engine_ = nullptr;
    std::int32_t parent_ = -1;
    std::uint32_t move_ = 0;
};

/// Return false to stop the search.
using Visitor = std::function<bool(const Visit &)>;

/// Best-first search over one shard, visiting circuits in non-increasing
/// probability order. Duplicates are still reported to the visitor.
ShardReport search_shard(const SearchSpace &space, const EnumConfig &cfg,
                         const ShardDescriptor &shard, const Visitor &visitor);

/// Run every shard of cfg.workers (in parallel threads when > 1).
EnumReport search(const SearchSpace &space, const EnumConfig &cfg,
                  const std::function<Visitor(const ShardDescriptor &)> &make_visitor);

/**
 * @brief Emit circuits in non-increasing log-probability order, skipping
 * circuits whose unitary was already reached by a more probable one.
 *
 * Ties are broken shorter first, then lexicographically on the move
 * sequence. With several workers the per-shard streams are merged, re-sorted
 * and deduplicated by canonical key before reaching the sink.
 */
EnumReport enumerate(const Library &lib, int n_qubits, const Connectivity &constraint,
                     const EnumConfig &cfg,
                     const std::function<void(const ScoredCircuit &)> &sink);

struct Task {
    std::string id;
    Matrix unitary;
};

/// Top-k decompositions of one task, sorted by descending log-probability.
struct SolutionSet {
    std::string task_id;
    std::vector<ScoredCircuit> circuits;
};

using SolutionStore = std::map<std::string, SolutionSet>;

/// Hash lookup of task unitaries followed by an exact phase-aligned check.
class TaskMatcher {
  public:
    TaskMatcher(std::span<const Task> tasks, double tolerance = kEqualityTolerance,
                double key_quantum = kKeyQuantum);

    /// Indices of tasks implemented by the visited unitary.
    void match(const Visit &visit, std::vector<std::size_t> &out) const;
    [[nodiscard]] std::size_t size() const { return tasks_.size(); }

  private:
    std::span<const Task> tasks_;
    double tolerance_;
    std::map<UnitaryKey, std::vector<std::size_t>> by_key_;
};

/// Deterministic ranking of solutions: higher log-prob, then fewer
/// placements, then lexicographic on (library gate index, qubits).
bool solution_before(const ScoredCircuit &a, const ScoredCircuit &b, const Library &lib);

/// Re-score under @p lib, drop placement-identical duplicates, keep the top k.
void normalize_solution_set(SolutionSet &set, const Library &lib, const Connectivity &constraint,
                            int k);

struct SynthesisResult {
    SolutionStore solutions;
    EnumReport report;
};

/**
 * @brief Enumerate once and test every visited circuit against each task,
 * keeping the k most probable hits per task, merged with @p existing.
 */
SynthesisResult synthesize_batch(std::span<const Task> tasks, const Library &lib,
                                 const Connectivity &constraint, const EnumConfig &cfg,
                                 const SolutionStore &existing = {});

} // namespace gatesmith
