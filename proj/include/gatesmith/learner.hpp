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

#include <cstddef>
#include <string>
#include <vector>

#include "gatesmith/enumerator.hpp"
#include "gatesmith/library.hpp"

namespace gatesmith {

struct LearnConfig {
    ModelConfig model;
    /// Longest placement run considered as a new gate.
    int max_fragment_size = 4;
    /// Fragments seen fewer times than this are not proposed.
    int min_support = 2;
    /// Highest-support fragments scored per adoption round.
    std::size_t max_candidates = 200;
    int em_max_iterations = 100;
    double em_tolerance = 1e-9;
    /// A candidate is adopted only if it beats the current score by this much.
    double adopt_margin = 1e-9;
    /// Cap on adoptions per learn step; 0 means no cap.
    int max_adoptions = 0;
};

struct FragmentOccurrence {
    std::string task_id;
    std::size_t solution = 0;
    std::size_t location = 0;
};

/// A contiguous run of placements with qubits abstracted to parameters
/// numbered in order of first appearance.
struct Fragment {
    std::vector<Placement> body;
    int arity = 0;
    std::size_t support = 0;
    std::vector<FragmentOccurrence> occurrences;

    [[nodiscard]] std::size_t size() const { return body.size(); }
    /// Key identifying the gate sequence and qubit equality pattern.
    [[nodiscard]] std::string signature() const;
};

/// Every contiguous run of 2..max_size placements across all solutions,
/// deduplicated by signature. Support counts non-overlapping occurrences;
/// fragments below @p min_support are dropped. Sorted by support, then
/// size, then signature.
std::vector<Fragment> extract_fragments(const SolutionStore &solutions, int max_size,
                                        int min_support = 2);

/// Leftmost non-overlapping replacement of the body of composite @p g by a
/// single placement of g.
Circuit rewrite_with(const GatePtr &g, const Circuit &c);

/// Library weights fitted by MAP expectation-maximization under the
/// Dirichlet(alpha) prior. Returns uniform weights when every set is empty.
Library em_fit_theta(const Library &lib, const SolutionStore &solutions,
                     const Connectivity &constraint, const LearnConfig &cfg = {});

/// Objective per EM iteration (first entry is the starting point).
std::vector<double> em_trace(const Library &lib, const SolutionStore &solutions,
                             const Connectivity &constraint, const LearnConfig &cfg = {});

/// library_log_prior + theta_log_prior + sum of per-task log-likelihoods.
/// Empty solution sets contribute nothing.
double score(const Library &lib, const SolutionStore &solutions, const Connectivity &constraint,
             const ModelConfig &cfg = {});

struct AdoptionReport {
    std::string name;
    std::string body;
    int arity = 0;
    std::size_t support = 0;
    double score_before = 0.0;
    double score_after = 0.0;
};

struct LearnResult {
    Library library;
    SolutionStore solutions;
    std::vector<AdoptionReport> adopted;
    double score_before = 0.0;
    double score_after = 0.0;
};

/**
 * @brief Greedy library growth: repeatedly adopt the single fragment whose
 * library extension most increases the score, rewriting every solution with
 * it, until no candidate improves. The result carries refitted weights and
 * version + 1.
 */
LearnResult learn_step(const Library &lib, const SolutionStore &solutions,
                       const Connectivity &constraint, const LearnConfig &cfg = {});

} // namespace gatesmith
