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
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gatesmith/circuit.hpp"

namespace gatesmith {

/// Hyperparameters of the priors P(G) and P(theta | G).
struct ModelConfig {
    /// Nats charged per elementary leaf of every learned gate.
    double lambda_struct = 1.5;
    /// Symmetric Dirichlet concentration over (theta_end, theta_g...).
    /// EM runs as MAP estimation under this prior, with pseudocount alpha - 1.
    double alpha = 1.5;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/**
 * @brief A gate set G with weights theta and termination weight theta_end.
 *
 * Immutable value. The first base_size() gates are the elementary set G0;
 * learned gates are only ever appended. Weights are renormalized on
 * construction so that theta_end + sum(theta) = 1.
 */
class Library {
  public:
    Library() = default;
    Library(std::vector<GatePtr> gates, std::vector<double> weights, double end_weight,
            int version = 0, std::optional<std::size_t> base_size = std::nullopt,
            int next_fragment_index = 0);

    /// Uniform theta over the gates and the termination symbol.
    static Library uniform(std::vector<GatePtr> gates);

    [[nodiscard]] std::span<const GatePtr> gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }
    [[nodiscard]] const GatePtr &gate(std::size_t i) const { return gates_.at(i); }
    [[nodiscard]] std::span<const double> weights() const { return weights_; }
    [[nodiscard]] double weight(std::size_t i) const { return weights_.at(i); }
    [[nodiscard]] double end_weight() const { return end_weight_; }
    [[nodiscard]] int version() const { return version_; }
    [[nodiscard]] std::size_t base_size() const { return base_size_; }
    /// Index k of the next learned gate name "f<k>".
    [[nodiscard]] int next_fragment_index() const { return next_fragment_index_; }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const;
    [[nodiscard]] GatePtr find(std::string_view name) const;

    /// Append a learned gate with the given (pre-normalization) weight.
    [[nodiscard]] Library with_gate(GatePtr gate, double weight) const;
    [[nodiscard]] Library with_weights(std::vector<double> weights, double end_weight) const;
    [[nodiscard]] Library with_version(int version) const;

  private:
    std::vector<GatePtr> gates_;
    std::vector<double> weights_;
    double end_weight_ = 1.0;
    int version_ = 0;
    std::size_t base_size_ = 0;
    int next_fragment_index_ = 0;
};

/// Resolve gate names against the library.
Program parse_program(std::string_view text, const Library &lib);

/// Probability of wiring gate g to one specific valid qubit tuple:
/// 1 / |valid ordered assignments|. Throws std::invalid_argument when none exist.
double chi(const Gate &g, int n_qubits, const Connectivity &constraint);

/// sum over placements of [ln theta_g + ln chi] + ln theta_end.
/// Throws std::invalid_argument for gates outside the library or invalid circuits.
double circuit_log_prob(const Circuit &c, const Library &lib, const Connectivity &constraint);

/// -lambda_struct * sum of leaf counts of the learned gates.
double library_log_prior(const Library &lib, const ModelConfig &cfg = {});

/// Log-density of a symmetric Dirichlet(alpha) at (theta_end, theta...),
/// including its normalizing constant.
double theta_log_prior(const Library &lib, double alpha);
double dirichlet_log_density(std::span<const double> point, double alpha);

/// log sum exp; kNegInf for an empty range.
double log_sum_exp(std::span<const double> values);

/// log sum over B_u of P(c | G, theta); kNegInf when B_u is empty.
/// Throws std::invalid_argument if some circuit does not implement u.
double task_log_likelihood(const Matrix &u, std::span<const Circuit> solutions,
                           const Library &lib, const Connectivity &constraint,
                           double tolerance = kEqualityTolerance);

} // namespace gatesmith
