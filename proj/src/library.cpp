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
#include "gatesmith/library.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gatesmith {

Library::Library(std::vector<GatePtr> gates, std::vector<double> weights, double end_weight,
                 int version, std::optional<std::size_t> base_size, int next_fragment_index)
    : gates_(std::move(gates)), weights_(std::move(weights)), end_weight_(end_weight),
      version_(version), base_size_(base_size.value_or(gates_.size())),
      next_fragment_index_(next_fragment_index) {
    if (weights_.size() != gates_.size()) {
        throw std::invalid_argument("library: " + std::to_string(gates_.size()) + " gates but " +
                                    std::to_string(weights_.size()) + " weights");
    }
    if (base_size_ > gates_.size()) {
        throw std::invalid_argument("library: base size exceeds gate count");
    }
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        if (!gates_[i]) {
            throw std::invalid_argument("library: null gate");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (gates_[j]->name() == gates_[i]->name()) {
                throw std::invalid_argument("library: duplicate gate name " + gates_[i]->name());
            }
        }
    }
    double total = end_weight_;
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("library: weights must be strictly positive");
        }
        total += w;
    }
    if (!(end_weight_ > 0.0)) {
        throw std::invalid_argument("library: termination weight must be strictly positive");
    }
    // Already-normalized input is kept bit for bit so that saved libraries
    // reload to identical weights.
    if (std::abs(total - 1.0) <= 1e-12) {
        return;
    }
    for (double &w : weights_) {
        w /= total;
    }
    end_weight_ /= total;
}

Library Library::uniform(std::vector<GatePtr> gates) {
    std::vector<double> w(gates.size(), 1.0);
    return Library(std::move(gates), std::move(w), 1.0);
}

std::optional<std::size_t> Library::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        if (gates_[i]->name() == name) {
            return i;
        }
    }
    return std::nullopt;
}

GatePtr Library::find(std::string_view name) const {
    const auto i = index_of(name);
    return i ? gates_[*i] : nullptr;
}

Library Library::with_gate(GatePtr gate, double weight) const {
    auto gates = gates_;
    auto weights = weights_;
    gates.push_back(std::move(gate));
    weights.push_back(weight);
    int next = next_fragment_index_;
    const auto &name = gates.back()->name();
    if (name.size() > 1 && name[0] == 'f' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        next = std::max(next, std::stoi(name.substr(1)) + 1);
    }
    return Library(std::move(gates), std::move(weights), end_weight_, version_, base_size_, next);
}

Library Library::with_weights(std::vector<double> weights, double end_weight) const {
    return Library(gates_, std::move(weights), end_weight, version_, base_size_,
                   next_fragment_index_);
}

Library Library::with_version(int version) const {
    Library out = *this;
    out.version_ = version;
    return out;
}

Program parse_program(std::string_view text, const Library &lib) {
    return parse_program(text, lib.gates());
}

double chi(const Gate &g, int n_qubits, const Connectivity &constraint) {
    const auto count = valid_assignments(g, n_qubits, constraint).size();
    if (count == 0) {
        throw std::invalid_argument("gate " + g.name() + " has no valid placement on " +
                                    std::to_string(n_qubits) + " qubits under " +
                                    constraint.to_string() + " connectivity");
    }
    return 1.0 / static_cast<double>(count);
}

double circuit_log_prob(const Circuit &c, const Library &lib, const Connectivity &constraint) {
    if (!validate(c, constraint)) {
        throw std::invalid_argument("circuit_log_prob: invalid circuit " + to_compact_string(c));
    }
    double total = std::log(lib.end_weight());
    for (const auto &p : c.placements) {
        const auto index = lib.index_of(p.gate->name());
        if (!index) {
            throw std::invalid_argument("circuit_log_prob: gate " + p.gate->name() +
                                        " is not in the library");
        }
        total += std::log(lib.weight(*index)) + std::log(chi(*p.gate, c.n_qubits, constraint));
    }
    return total;
}

double library_log_prior(const Library &lib, const ModelConfig &cfg) {
    double leaves = 0.0;
    for (std::size_t i = lib.base_size(); i < lib.size(); ++i) {
        leaves += static_cast<double>(lib.gate(i)->leaf_count());
    }
    return -cfg.lambda_struct * leaves;
}

double dirichlet_log_density(std::span<const double> point, double alpha) {
    const auto k = static_cast<double>(point.size());
    double out = std::lgamma(k * alpha) - k * std::lgamma(alpha);
    if (alpha != 1.0) {
        for (double x : point) {
            out += (alpha - 1.0) * std::log(x);
        }
    }
    return out;
}

double theta_log_prior(const Library &lib, double alpha) {
    std::vector<double> point(lib.weights().begin(), lib.weights().end());
    point.push_back(lib.end_weight());
    return dirichlet_log_density(point, alpha);
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) {
        return kNegInf;
    }
    const double top = *std::max_element(values.begin(), values.end());
    if (top == kNegInf) {
        return kNegInf;
    }
    double acc = 0.0;
    for (double v : values) {
        acc += std::exp(v - top);
    }
    return top + std::log(acc);
}

double task_log_likelihood(const Matrix &u, std::span<const Circuit> solutions,
                           const Library &lib, const Connectivity &constraint, double tolerance) {
    std::vector<double> terms;
    terms.reserve(solutions.size());
    for (const auto &c : solutions) {
        const double distance = phase_aligned_distance(eval_unitary(c), u);
        if (distance > tolerance) {
            throw std::invalid_argument("task_log_likelihood: circuit " + to_compact_string(c) +
                                        " does not implement the task unitary (distance " +
                                        std::to_string(distance) + ")");
        }
        terms.push_back(circuit_log_prob(c, lib, constraint));
    }
    return log_sum_exp(terms);
}

} // namespace gatesmith
