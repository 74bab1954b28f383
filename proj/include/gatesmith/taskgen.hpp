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
#include <string>
#include <vector>

#include "gatesmith/enumerator.hpp"

namespace gatesmith {

enum class Split { Train, Test };

struct TaskRecord {
    std::string id;
    int n_qubits = 1;
    Matrix unitary{2};
    /// Generating circuit over the task gate set. Never shown to the learner.
    Circuit source_circuit;
    int gate_count = 0;
    Split split = Split::Test;
};

/// The learner-facing view of a record.
Task to_task(const TaskRecord &record);
std::vector<Task> to_tasks(const std::vector<TaskRecord> &records);

/**
 * @brief Enumerate circuits of @p g_tasks (uniform weights, full connectivity)
 * and keep one record per distinct unitary, with the shortest generator seen.
 *
 * Records are ordered by the probability at which their unitary first
 * appeared; ids are "task-000000", "task-000001", ... in that order.
 */
std::vector<TaskRecord> generate_pool(const std::vector<GatePtr> &g_tasks, int n_qubits,
                                      const EnumConfig &budget);

struct PoolSplit {
    std::vector<TaskRecord> train;
    std::vector<TaskRecord> test;
};

/**
 * @brief Draw @p n_train records without replacement, first picking a
 * gate-count stratum uniformly among the nonempty ones, then a record
 * uniformly within it. The rest, in pool order, is the test set.
 */
PoolSplit split_pool(const std::vector<TaskRecord> &pool, std::size_t n_train,
                     std::uint64_t seed);

} // namespace gatesmith
