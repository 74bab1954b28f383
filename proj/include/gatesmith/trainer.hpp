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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gatesmith/io.hpp"
#include "gatesmith/learner.hpp"

namespace gatesmith {

struct TrainConfig {
    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::filesystem::path run_dir = "run";
    /// Starting library; the uniform elementary set when empty.
    std::filesystem::path initial_library;

    int iterations = 100;
    int batch_size = 25;
    int k = 2;
    /// Qubit count used by gen-tasks. Training takes it from each task.
    int n_qubits = 3;
    std::string constraint = "full";
    std::uint64_t seed = 0;

    /// Per-iteration search budget, applied to each qubit count separately.
    std::uint64_t max_nodes = 0;
    double timeout_s = 150.0;
    int max_placements = 12;
    int workers = 1;

    LearnConfig learn;

    /// Report elapsed_s as 0 so that metrics files are byte-reproducible.
    bool deterministic = false;
    /// Continue from the newest checkpoint in run_dir.
    bool resume = false;

    /// Throws std::invalid_argument on inconsistent values.
    void check() const;
    [[nodiscard]] EnumConfig enum_config() const;
};

Json to_json(const TrainConfig &cfg);
/// Fields missing from @p j keep the values already in @p cfg.
void merge_from_json(TrainConfig &cfg, const Json &j);

struct MetricsRow {
    int iteration = 0;
    double seen_train_solved_frac = 0.0;
    double train_solved_frac = 0.0;
    double test_solved_frac = 0.0;
    std::size_t library_size = 0;
    /// NaN while no task has a solution.
    double mean_task_log_likelihood = 0.0;
    std::size_t new_gates_this_iter = 0;
    double elapsed_s = 0.0;
};

inline constexpr const char *kMetricsHeader =
    "iteration,seen_train_solved_frac,train_solved_frac,test_solved_frac,library_size,"
    "mean_task_log_likelihood,new_gates_this_iter,elapsed_s";

std::string format_metrics_row(const MetricsRow &row);

struct TrainResult {
    Library library;
    SolutionStore solutions;
    std::vector<MetricsRow> metrics;
};

using LogSink = std::function<void(const std::string &)>;

/**
 * @brief The outer training loop. Each iteration samples a batch, searches
 * under the current library, merges hits into the solution store, grows the
 * library and writes a checkpoint plus one metrics row to cfg.run_dir.
 */
TrainResult run_training(const TrainConfig &cfg, const LogSink &log = {});

struct TaskReport {
    std::string id;
    bool solved = false;
    std::optional<ScoredCircuit> best;
    /// Log-sum-exp over the solutions found; -inf when unsolved.
    double log_likelihood = kNegInf;
};

struct EvalResult {
    double solved_fraction = 0.0;
    std::vector<TaskReport> tasks;
    EnumReport report;
};

/// Fresh search under @p lib; a task is solved if any visited circuit matches.
EvalResult evaluate(const Library &lib, std::span<const Task> tasks,
                    const Connectivity &constraint, const EnumConfig &cfg);

Json to_json(const EvalResult &r);

} // namespace gatesmith
