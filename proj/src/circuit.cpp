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
#include "gatesmith/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gatesmith {

namespace {

void require(bool condition, const std::string &message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

std::vector<std::pair<int, int>> all_pairs(int arity) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < arity; ++i) {
        for (int j = i + 1; j < arity; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

bool distinct_in_range(std::span<const int> qubits, int n_qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits) {
            return false;
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

bool same_placement(const Placement &a, const Placement &b) {
    return a.gate->name() == b.gate->name() && a.qubits == b.qubits;
}

bool same_circuit(const Circuit &a, const Circuit &b) {
    return a.n_qubits == b.n_qubits &&
           std::equal(a.placements.begin(), a.placements.end(), b.placements.begin(),
                      b.placements.end(), same_placement);
}

// ---------------------------------------------------------------------------
// Program

Program::Program(int n_params, NodePtr root) : n_params_(n_params), root_(std::move(root)) {
    require(n_params >= 0, "program: negative parameter count");
}

Program Program::from_placements(int n_params, const std::vector<Placement> &placements) {
    NodePtr node;
    for (const auto &p : placements) {
        require(p.gate != nullptr, "program: placement without gate");
        for (int q : p.qubits) {
            require(q >= 0 && q < n_params, "program: parameter " + std::to_string(q) +
                                                " out of range for " +
                                                std::to_string(n_params) + " parameters");
        }
        node = std::make_shared<const Node>(Node{p.gate, p.qubits, node});
    }
    return Program(n_params, std::move(node));
}

std::vector<Placement> Program::placements() const {
    std::vector<Placement> out;
    for (const Node *n = root_.get(); n != nullptr && n->gate; n = n->input.get()) {
        out.push_back(Placement{n->gate, n->params});
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string Program::to_string() const {
    std::string body = "$0";
    for (const auto &p : placements()) {
        std::string next = "(" + p.gate->name() + " " + body;
        for (int q : p.qubits) {
            next += " $" + std::to_string(q + 1);
        }
        next += ")";
        body = std::move(next);
    }
    std::string out;
    for (int i = 0; i <= n_params_; ++i) {
        out += "(lambda ";
    }
    out += body;
    out.append(static_cast<std::size_t>(n_params_ + 1), ')');
    return out;
}

// ---------------------------------------------------------------------------
// Gate

GatePtr Gate::elementary(std::string name, Matrix matrix) {
    require(!name.empty(), "gate: empty name");
    require(!matrix.empty(), "gate " + name + ": missing matrix");
    require(matrix.is_unitary(), "gate " + name + ": matrix is not unitary");
    auto g = std::shared_ptr<Gate>(new Gate());
    g->name_ = std::move(name);
    g->arity_ = matrix.n_qubits();
    g->matrix_ = std::move(matrix);
    g->couplings_ = all_pairs(g->arity_);
    return g;
}

std::vector<Placement> Gate::expansion() const {
    if (body_) {
        return expansion_;
    }
    std::vector<int> params(static_cast<std::size_t>(arity_));
    for (int i = 0; i < arity_; ++i) {
        params[static_cast<std::size_t>(i)] = i;
    }
    return {Placement{shared_from_this(), std::move(params)}};
}

GatePtr Gate::composite(std::string name, Program body) {
    require(!name.empty(), "gate: empty name");
    const int arity = body.n_params();
    require(arity >= 1, "composite gate " + name + " needs at least one qubit parameter");
    auto g = std::shared_ptr<Gate>(new Gate());
    g->name_ = std::move(name);
    g->arity_ = arity;

    std::vector<bool> used(static_cast<std::size_t>(arity), false);
    std::set<std::pair<int, int>> couplings;
    for (const auto &p : body.placements()) {
        require(static_cast<int>(p.qubits.size()) == p.gate->arity(),
                "composite gate " + g->name_ + ": arity mismatch for " + p.gate->name());
        require(distinct_in_range(p.qubits, arity),
                "composite gate " + g->name_ + ": invalid parameters for " + p.gate->name());
        for (const auto &inner : p.gate->expansion()) {
            std::vector<int> mapped;
            mapped.reserve(inner.qubits.size());
            for (int q : inner.qubits) {
                mapped.push_back(p.qubits[static_cast<std::size_t>(q)]);
            }
            for (std::size_t i = 0; i < mapped.size(); ++i) {
                used[static_cast<std::size_t>(mapped[i])] = true;
                for (std::size_t j = i + 1; j < mapped.size(); ++j) {
                    couplings.insert(std::minmax(mapped[i], mapped[j]));
                }
            }
            g->expansion_.push_back(Placement{inner.gate, std::move(mapped)});
        }
    }
    require(std::all_of(used.begin(), used.end(), [](bool u) { return u; }),
            "composite gate " + g->name_ + ": every qubit parameter must be used");
    g->couplings_.assign(couplings.begin(), couplings.end());

    Matrix m = Matrix::identity_qubits(arity);
    for (const auto &p : g->expansion_) {
        m = embed(p.gate->matrix(), p.qubits, arity) * m;
    }
    g->matrix_ = std::move(m);
    g->body_ = std::make_shared<const Program>(std::move(body));
    return g;
}

// ---------------------------------------------------------------------------
// Connectivity

Connectivity Connectivity::nearest_neighbor() {
    Connectivity c;
    c.mode_ = Mode::NearestNeighbor;
    return c;
}

Connectivity Connectivity::explicit_edges(std::set<std::pair<int, int>> edges) {
    Connectivity c;
    c.mode_ = Mode::ExplicitEdges;
    for (const auto &[a, b] : edges) {
        require(a != b, "connectivity: self edge");
        c.edges_.insert(std::minmax(a, b));
    }
    return c;
}

bool Connectivity::allows(int a, int b) const {
    switch (mode_) {
    case Mode::Full:
        return a != b;
    case Mode::NearestNeighbor:
        return a - b == 1 || b - a == 1;
    case Mode::ExplicitEdges:
        return edges_.count(std::minmax(a, b)) != 0;
    }
    return false;
}

std::string Connectivity::to_string() const {
    switch (mode_) {
    case Mode::Full:
        return "full";
    case Mode::NearestNeighbor:
        return "nearest";
    case Mode::ExplicitEdges: {
        std::string out = "edges:";
        bool first = true;
        for (const auto &[a, b] : edges_) {
            out += (first ? "" : ",") + std::to_string(a) + "-" + std::to_string(b);
            first = false;
        }
        return out;
    }
    }
    return "full";
}

Connectivity Connectivity::parse(std::string_view text) {
    if (text == "full") {
        return full();
    }
    if (text == "nearest" || text == "nearest_neighbor" || text == "nn") {
        return nearest_neighbor();
    }
    if (text.substr(0, 6) == "edges:") {
        std::set<std::pair<int, int>> edges;
        std::string rest(text.substr(6));
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto dash = item.find('-');
            require(dash != std::string::npos, "connectivity: bad edge '" + item + "'");
            edges.emplace(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
        }
        return explicit_edges(std::move(edges));
    }
    throw std::invalid_argument("unknown connectivity '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Circuits

Matrix eval_unitary(const Circuit &c) {
    require(c.n_qubits >= 1, "circuit: needs at least one qubit");
    Matrix m = Matrix::identity_qubits(c.n_qubits);
    for (const auto &p : c.placements) {
        require(p.gate != nullptr, "circuit: placement without gate");
        require(static_cast<int>(p.qubits.size()) == p.gate->arity(),
                "circuit: gate " + p.gate->name() + " expects " +
                    std::to_string(p.gate->arity()) + " qubits");
        m = embed(p.gate->matrix(), p.qubits, c.n_qubits) * m;
    }
    return m;
}

Circuit expand(const Circuit &c) {
    Circuit out{c.n_qubits, {}};
    for (const auto &p : c.placements) {
        for (const auto &inner : p.gate->expansion()) {
            std::vector<int> mapped;
            mapped.reserve(inner.qubits.size());
            for (int q : inner.qubits) {
                mapped.push_back(p.qubits.at(static_cast<std::size_t>(q)));
            }
            out.placements.push_back(Placement{inner.gate, std::move(mapped)});
        }
    }
    return out;
}

bool assignment_allowed(const Gate &g, std::span<const int> qubits,
                        const Connectivity &constraint) {
    for (const auto &[i, j] : g.couplings()) {
        if (!constraint.allows(qubits[static_cast<std::size_t>(i)],
                               qubits[static_cast<std::size_t>(j)])) {
            return false;
        }
    }
    return true;
}

bool validate(const Circuit &c, const Connectivity &constraint) {
    if (c.n_qubits < 1) {
        return false;
    }
    for (const auto &p : c.placements) {
        if (!p.gate || static_cast<int>(p.qubits.size()) != p.gate->arity() ||
            !distinct_in_range(p.qubits, c.n_qubits) ||
            !assignment_allowed(*p.gate, p.qubits, constraint)) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> valid_assignments(const Gate &g, int n_qubits,
                                                const Connectivity &constraint) {
    std::vector<std::vector<int>> out;
    const int k = g.arity();
    if (k > n_qubits) {
        return out;
    }
    std::vector<int> tuple(static_cast<std::size_t>(k), 0);
    // Odometer over all k-tuples in lexicographic order.
    while (true) {
        if (distinct_in_range(tuple, n_qubits) && assignment_allowed(g, tuple, constraint)) {
            out.push_back(tuple);
        }
        int pos = k - 1;
        while (pos >= 0 && ++tuple[static_cast<std::size_t>(pos)] == n_qubits) {
            tuple[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
    }
    return out;
}

Program circuit_to_program(const Circuit &c) {
    return Program::from_placements(c.n_qubits, c.placements);
}

Circuit program_to_circuit(const Program &p) {
    return Circuit{std::max(1, p.n_params()), p.placements()};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
  public:
    Parser(std::string_view text, std::span<const GatePtr> gates) : gates_(gates) {
        tokenize(text);
    }

    Program parse() {
        int lambdas = 0;
        while (peek() == "(" && peek(1) == "lambda") {
            pos_ += 2;
            ++lambdas;
        }
        if (lambdas == 0) {
            fail("expected '(lambda'", peek());
        }
        n_params_ = lambdas - 1;
        auto root = expression();
        for (int i = 0; i < lambdas; ++i) {
            expect(")");
        }
        if (pos_ != tokens_.size()) {
            fail("trailing input", tokens_[pos_]);
        }
        return Program(n_params_, std::move(root));
    }

  private:
    Program::NodePtr expression() {
        const std::string tok = next();
        if (tok == "$0") {
            return nullptr;
        }
        if (tok != "(") {
            if (!tok.empty() && tok[0] == '$') {
                fail("expected the input circuit $0", tok);
            }
            fail("expected '(' or $0", tok);
        }
        const std::string name = next();
        if (name == "lambda") {
            fail("nested lambda inside a body is not supported", name);
        }
        GatePtr gate = resolve(name);
        auto input = expression();
        std::vector<int> params;
        while (peek() != ")") {
            const std::string var = next();
            params.push_back(variable(var));
        }
        expect(")");
        if (static_cast<int>(params.size()) != gate->arity()) {
            fail("arity mismatch: gate expects " + std::to_string(gate->arity()) +
                     " qubits, got " + std::to_string(params.size()),
                 name);
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (params[i] == params[j]) {
                    fail("repeated qubit variable", "$" + std::to_string(params[i] + 1));
                }
            }
        }
        return std::make_shared<const Program::Node>(
            Program::Node{std::move(gate), std::move(params), std::move(input)});
    }

    int variable(const std::string &tok) {
        if (tok.size() < 2 || tok[0] != '$' ||
            !std::all_of(tok.begin() + 1, tok.end(),
                         [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            fail("expected a qubit variable", tok);
        }
        const int index = std::stoi(tok.substr(1));
        if (index == 0) {
            fail("$0 is the input circuit, not a qubit", tok);
        }
        if (index > n_params_) {
            fail("unbound variable", tok);
        }
        return index - 1;
    }

    GatePtr resolve(const std::string &name) const {
        for (const auto &g : gates_) {
            if (g->name() == name) {
                return g;
            }
        }
        fail("unknown gate", name);
        return nullptr;
    }

    void tokenize(std::string_view text) {
        std::size_t i = 0;
        while (i < text.size()) {
            const char ch = text[i];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++i;
            } else if (ch == '(' || ch == ')') {
                tokens_.emplace_back(1, ch);
                ++i;
            } else {
                std::size_t j = i;
                while (j < text.size() && text[j] != '(' && text[j] != ')' &&
                       !std::isspace(static_cast<unsigned char>(text[j]))) {
                    ++j;
                }
                tokens_.emplace_back(text.substr(i, j - i));
                i = j;
            }
        }
    }

    [[nodiscard]] std::string peek(std::size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : std::string{};
    }
    std::string next() {
        if (pos_ >= tokens_.size()) {
            fail("unexpected end of input", "<eof>");
        }
        return tokens_[pos_++];
    }
    void expect(const std::string &tok) {
        const std::string got = pos_ < tokens_.size() ? tokens_[pos_] : std::string("<eof>");
        if (got != tok) {
            fail("expected '" + tok + "'", got);
        }
        ++pos_;
    }
    [[noreturn]] static void fail(const std::string &what, const std::string &token) {
        throw ParseError("parse error at token '" + (token.empty() ? "<eof>" : token) +
                         "': " + what);
    }

    std::span<const GatePtr> gates_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    int n_params_ = 0;
};

} // namespace

Program parse_program(std::string_view text, std::span<const GatePtr> gates) {
    return Parser(text, gates).parse();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::vector<std::string> placement_labels(const Placement &p, int n_qubits) {
    std::vector<std::string> labels(static_cast<std::size_t>(n_qubits));
    const auto &q = p.qubits;
    if (q.size() == 1) {
        labels[static_cast<std::size_t>(q[0])] = "[" + p.gate->name() + "]";
        return labels;
    }
    if (p.gate->name() == "cnot") {
        labels[static_cast<std::size_t>(q[0])] = "*";
        labels[static_cast<std::size_t>(q[1])] = "(+)";
    } else {
        for (std::size_t i = 0; i < q.size(); ++i) {
            labels[static_cast<std::size_t>(q[i])] =
                "[" + p.gate->name() + ":" + std::to_string(i) + "]";
        }
    }
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    for (int w = *lo + 1; w < *hi; ++w) {
        if (labels[static_cast<std::size_t>(w)].empty()) {
            labels[static_cast<std::size_t>(w)] = "|";
        }
    }
    return labels;
}

} // namespace

std::string render_text(const Circuit &c) {
    std::vector<std::string> lines;
    std::size_t prefix = 0;
    for (int w = 0; w < c.n_qubits; ++w) {
        lines.push_back("q" + std::to_string(w) + ": ");
        prefix = std::max(prefix, lines.back().size());
    }
    for (auto &line : lines) {
        line.resize(prefix, ' ');
        line += "--";
    }
    for (const auto &p : c.placements) {
        const auto labels = placement_labels(p, c.n_qubits);
        std::size_t width = 1;
        for (const auto &l : labels) {
            width = std::max(width, l.size());
        }
        for (int w = 0; w < c.n_qubits; ++w) {
            const auto &l = labels[static_cast<std::size_t>(w)];
            const std::size_t pad = width - l.size();
            std::string cell(pad / 2, '-');
            cell += l.empty() ? "" : l;
            cell.append(width - cell.size(), '-');
            lines[static_cast<std::size_t>(w)] += cell + "--";
        }
    }
    std::string out;
    for (const auto &line : lines) {
        out += line + "\n";
    }
    return out;
}

std::string to_compact_string(const Circuit &c) {
    std::string out;
    for (const auto &p : c.placements) {
        if (!out.empty()) {
            out += ' ';
        }
        out += p.gate->name() + "(";
        for (std::size_t i = 0; i < p.qubits.size(); ++i) {
            out += (i ? "," : "") + std::to_string(p.qubits[i]);
        }
        out += ")";
    }
    return out.empty() ? "<empty>" : out;
}

} // namespace gatesmith
