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
#include "gatesmith/gates.hpp"

#include <cmath>
#include <numbers>

namespace gatesmith::gates {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix single(Complex a, Complex b, Complex c, Complex d) {
    return Matrix(2, {a, b, c, d});
}

Matrix controlled(const Matrix &u) {
    Matrix m = Matrix::identity(4);
    m(2, 2) = u(0, 0);
    m(2, 3) = u(0, 1);
    m(3, 2) = u(1, 0);
    m(3, 3) = u(1, 1);
    return m;
}

Matrix phase(double angle) { return single(1.0, 0.0, 0.0, std::polar(1.0, angle)); }

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Matrix hadamard() { return single(kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2); }
Matrix pauli_x() { return single(0.0, 1.0, 1.0, 0.0); }
Matrix pauli_y() { return single(0.0, -kI, kI, 0.0); }
Matrix pauli_z() { return single(1.0, 0.0, 0.0, -1.0); }
Matrix sqrt_x() {
    const Complex p = 0.5 * (1.0 + kI);
    const Complex m = 0.5 * (1.0 - kI);
    return single(p, m, m, p);
}

GatePtr make(const char *name, Matrix m) { return Gate::elementary(name, std::move(m)); }

} // namespace

GatePtr h() {
    static const GatePtr g = make("h", hadamard());
    return g;
}
GatePtr t() {
    static const GatePtr g = make("t", phase(std::numbers::pi / 4));
    return g;
}
GatePtr tdg() {
    static const GatePtr g = make("tdg", phase(-std::numbers::pi / 4));
    return g;
}
GatePtr s() {
    static const GatePtr g = make("s", single(1.0, 0.0, 0.0, kI));
    return g;
}
GatePtr x() {
    static const GatePtr g = make("x", pauli_x());
    return g;
}
GatePtr y() {
    static const GatePtr g = make("y", pauli_y());
    return g;
}
GatePtr z() {
    static const GatePtr g = make("z", pauli_z());
    return g;
}
GatePtr sx() {
    static const GatePtr g = make("sx", sqrt_x());
    return g;
}
GatePtr sxdg() {
    static const GatePtr g = make("sxdg", sqrt_x().adjoint());
    return g;
}
GatePtr cnot() {
    static const GatePtr g = make("cnot", controlled(pauli_x()));
    return g;
}
GatePtr cy() {
    static const GatePtr g = make("cy", controlled(pauli_y()));
    return g;
}
GatePtr cz() {
    static const GatePtr g = make("cz", controlled(pauli_z()));
    return g;
}
GatePtr cs() {
    static const GatePtr g = make("cs", controlled(single(1.0, 0.0, 0.0, kI)));
    return g;
}
GatePtr ch() {
    static const GatePtr g = make("ch", controlled(hadamard()));
    return g;
}
GatePtr swap() {
    static const GatePtr g = [] {
        Matrix m(4);
        m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
        return make("swap", std::move(m));
    }();
    return g;
}
GatePtr iswap() {
    static const GatePtr g = [] {
        Matrix m(4);
        m(0, 0) = m(3, 3) = 1.0;
        m(1, 2) = m(2, 1) = kI;
        return make("iswap", std::move(m));
    }();
    return g;
}

std::vector<GatePtr> elementary_set() { return {h(), t(), tdg(), cnot()}; }

std::vector<GatePtr> task_set() {
    return {h(),  t(),  tdg(), s(),  x(),  y(),  z(),    sx(),
            sxdg(), cnot(), cy(), cz(), cs(), ch(), swap(), iswap()};
}

GatePtr by_name(std::string_view name) {
    for (const auto &g : task_set()) {
        if (g->name() == name) {
            return g;
        }
    }
    return nullptr;
}

} // namespace gatesmith::gates
