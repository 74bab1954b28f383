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

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gatesmith/matrix.hpp"

namespace gatesmith {

class Gate;
using GatePtr = std::shared_ptr<const Gate>;

/// One gate application. For a circuit the qubits are wire indices; inside a
/// composite gate body they are parameter indices 0..arity-1.
struct Placement {
    GatePtr gate;
    std::vector<int> qubits;
};

/// Same gate name and same qubit tuple.
bool same_placement(const Placement &a, const Placement &b);

/**
 * @brief A circuit-building program in lambda-calculus form.
 *
 * A program with q qubit parameters is written with q + 1 nested lambdas.
 * Variable $0 is the input circuit and $i (i >= 1) is qubit parameter i - 1,
 * so "(lambda (lambda (lambda (cnot (x $0 $1) $1 $2))))" applies X to qubit 0
 * and then CNOT(0, 1). The body is a chain: every gate application takes the
 * circuit built so far as its first argument and bottoms out in $0.
 */
class Program {
  public:
    struct Node {
        GatePtr gate; // null for the input-circuit leaf
        std::vector<int> params;
        std::shared_ptr<const Node> input;
    };
    using NodePtr = std::shared_ptr<const Node>;

    /// The identity program "(lambda $0)".
    Program() = default;
    Program(int n_params, NodePtr root);

    /// Build from placements in application order; qubits are parameter indices.
    static Program from_placements(int n_params, const std::vector<Placement> &placements);

    [[nodiscard]] int n_params() const { return n_params_; }
    [[nodiscard]] const NodePtr &root() const { return root_; }
    /// Gate applications in application order (innermost first).
    [[nodiscard]] std::vector<Placement> placements() const;
    /// Surface syntax.
    [[nodiscard]] std::string to_string() const;

  private:
    int n_params_ = 0;
    NodePtr root_;
};

/**
 * @brief A named gate of fixed arity: elementary (intrinsic matrix) or
 * composite (a body program over previously defined gates).
 */
class Gate : public std::enable_shared_from_this<Gate> {
  public:
    static GatePtr elementary(std::string name, Matrix matrix);
    /// The arity is the number of parameters of @p body; every parameter must be used.
    static GatePtr composite(std::string name, Program body);

    [[nodiscard]] const std::string &name() const { return name_; }
    [[nodiscard]] int arity() const { return arity_; }
    [[nodiscard]] bool is_elementary() const { return !body_; }
    /// Intrinsic matrix, or the cached unitary of the body on arity qubits.
    [[nodiscard]] const Matrix &matrix() const { return matrix_; }
    /// Null for elementary gates.
    [[nodiscard]] const Program *body() const { return body_ ? body_.get() : nullptr; }
    /// Elementary applications in the fully inlined body (1 for elementary gates).
    [[nodiscard]] std::size_t leaf_count() const {
        return body_ ? expansion_.size() : std::size_t{1};
    }
    /// Fully inlined body over parameter indices (a single self-placement for
    /// elementary gates).
    [[nodiscard]] std::vector<Placement> expansion() const;
    /// Parameter pairs that interact in the inlined body (i < j).
    [[nodiscard]] const std::vector<std::pair<int, int>> &couplings() const {
        return couplings_;
    }

  private:
    Gate() = default;

    std::string name_;
    int arity_ = 0;
    Matrix matrix_;
    std::shared_ptr<const Program> body_;
    std::vector<Placement> expansion_;
    std::vector<std::pair<int, int>> couplings_;
};

/// Qubit connectivity of the target device.
class Connectivity {
  public:
    enum class Mode { Full, NearestNeighbor, ExplicitEdges };

    Connectivity() = default;
    static Connectivity full() { return {}; }
    static Connectivity nearest_neighbor();
    static Connectivity explicit_edges(std::set<std::pair<int, int>> edges);

    [[nodiscard]] Mode mode() const { return mode_; }
    [[nodiscard]] const std::set<std::pair<int, int>> &edges() const { return edges_; }
    /// Whether a multi-qubit operation may couple qubits a and b.
    [[nodiscard]] bool allows(int a, int b) const;
    [[nodiscard]] std::string to_string() const;
    static Connectivity parse(std::string_view text);

  private:
    Mode mode_ = Mode::Full;
    std::set<std::pair<int, int>> edges_; // normalized (min, max)
};

struct Circuit {
    int n_qubits = 1;
    std::vector<Placement> placements;

    [[nodiscard]] std::size_t size() const { return placements.size(); }
};

bool same_circuit(const Circuit &a, const Circuit &b);

/// Product of embedded gate matrices in application order, starting from identity.
/// Throws std::invalid_argument for malformed placements.
Matrix eval_unitary(const Circuit &c);

/// Replace every composite placement by its inlined elementary body.
Circuit expand(const Circuit &c);

/// Distinct in-range qubits, matching arities, and every coupled pair of the
/// expanded circuit allowed by @p constraint.
bool validate(const Circuit &c, const Connectivity &constraint = Connectivity::full());

/// Whether gate @p g may be placed on @p qubits (already distinct and in range).
bool assignment_allowed(const Gate &g, std::span<const int> qubits,
                        const Connectivity &constraint);

/// All ordered qubit tuples on which @p g may be placed, in lexicographic order.
std::vector<std::vector<int>> valid_assignments(const Gate &g, int n_qubits,
                                                const Connectivity &constraint);

Program circuit_to_program(const Circuit &c);
Circuit program_to_circuit(const Program &p);

/// Parse the lambda surface syntax. Gate names are resolved against @p gates.
/// Throws ParseError naming the offending token.
Program parse_program(std::string_view text, std::span<const GatePtr> gates);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// ASCII diagram, one line per wire.
std::string render_text(const Circuit &c);

/// Compact one-line form, e.g. "h(0) cnot(0,1)".
std::string to_compact_string(const Circuit &c);

} // namespace gatesmith
