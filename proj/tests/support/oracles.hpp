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
// Reference computations for the tests. Everything here is written from
// the textbook definitions and deliberately shares no code with the library.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "gatesmith/matrix.hpp"

namespace oracle {

using C = std::complex<double>;

struct Dense {
    std::size_t d = 0;
    std::vector<C> a;

    Dense() = default;
    explicit Dense(std::size_t dim) : d(dim), a(dim * dim) {}
    Dense(std::size_t dim, std::vector<C> v) : d(dim), a(std::move(v)) {}

    C &at(std::size_t r, std::size_t c) { return a[r * d + c]; }
    C at(std::size_t r, std::size_t c) const { return a[r * d + c]; }
};

inline Dense eye(std::size_t d) {
    Dense m(d);
    for (std::size_t i = 0; i < d; ++i) {
        m.at(i, i) = 1.0;
    }
    return m;
}

inline Dense mul(const Dense &x, const Dense &y) {
    Dense m(x.d);
    for (std::size_t i = 0; i < x.d; ++i) {
        for (std::size_t j = 0; j < x.d; ++j) {
            C s = 0.0;
            for (std::size_t k = 0; k < x.d; ++k) {
                s += x.at(i, k) * y.at(k, j);
            }
            m.at(i, j) = s;
        }
    }
    return m;
}

inline Dense kron(const Dense &x, const Dense &y) {
    Dense m(x.d * y.d);
    for (std::size_t i = 0; i < x.d; ++i)
        for (std::size_t j = 0; j < x.d; ++j)
            for (std::size_t k = 0; k < y.d; ++k)
                for (std::size_t l = 0; l < y.d; ++l)
                    m.at(i * y.d + k, j * y.d + l) = x.at(i, j) * y.at(k, l);
    return m;
}

inline Dense scale(C s, Dense m) {
    for (auto &v : m.a) {
        v *= s;
    }
    return m;
}

// <r|U|c> = G[r restricted to qubits, c restricted to qubits] when the
// remaining bits agree, else 0. Qubit 0 is the most significant bit.
inline Dense embed(const Dense &g, const std::vector<int> &qubits, int n) {
    const std::size_t dim = std::size_t{1} << n;
    Dense m(dim);
    auto bit = [n](std::size_t x, int q) { return (x >> (n - 1 - q)) & 1U; };
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            bool rest_equal = true;
            for (int q = 0; q < n; ++q) {
                bool listed = false;
                for (int p : qubits) {
                    listed = listed || p == q;
                }
                if (!listed && bit(r, q) != bit(c, q)) {
                    rest_equal = false;
                }
            }
            if (!rest_equal) {
                continue;
            }
            std::size_t gr = 0;
            std::size_t gc = 0;
            for (int p : qubits) {
                gr = (gr << 1) | bit(r, p);
                gc = (gc << 1) | bit(c, p);
            }
            m.at(r, c) = g.at(gr, gc);
        }
    }
    return m;
}

inline double max_diff(const Dense &x, const gatesmith::Matrix &y) {
    if (x.d != y.dim()) {
        return INFINITY;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < x.d; ++i)
        for (std::size_t j = 0; j < x.d; ++j)
            worst = std::max(worst, std::abs(x.at(i, j) - y(i, j)));
    return worst;
}

inline double max_diff(const Dense &x, const Dense &y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
    }
    return worst;
}

inline gatesmith::Matrix to_matrix(const Dense &x) {
    return gatesmith::Matrix(x.d, std::vector<gatesmith::Complex>(x.a.begin(), x.a.end()));
}

// Standard gate matrices, typed in by hand.
inline const double r2 = 1.0 / std::sqrt(2.0);
inline Dense H() { return Dense(2, {r2, r2, r2, -r2}); }
inline Dense T() { return Dense(2, {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)}); }
inline Dense Tdg() { return Dense(2, {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)}); }
inline Dense S() { return Dense(2, {1, 0, 0, C(0, 1)}); }
inline Dense X() { return Dense(2, {0, 1, 1, 0}); }
inline Dense Y() { return Dense(2, {0, C(0, -1), C(0, 1), 0}); }
inline Dense Z() { return Dense(2, {1, 0, 0, -1}); }
inline Dense CNOT() {
    return Dense(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
}
inline Dense CZ() { return Dense(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}); }
inline Dense SWAP() {
    return Dense(4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
}

// min over phi of ||u - e^{i phi} v||_F by brute-force grid.
inline double grid_phase_distance(const Dense &u, const Dense &v, int steps) {
    double best = INFINITY;
    for (int s = 0; s < steps; ++s) {
        const C ph = std::polar(1.0, 2.0 * std::numbers::pi * s / steps);
        double acc = 0.0;
        for (std::size_t i = 0; i < u.a.size(); ++i) {
            acc += std::norm(u.a[i] - ph * v.a[i]);
        }
        best = std::min(best, std::sqrt(acc));
    }
    return best;
}

// Phase-normalized, rounded fingerprint: a second, independent notion of
// "same unitary up to phase" used to count distinct unitaries.
inline std::vector<long long> fingerprint(const Dense &u, double quantum = 1e-6) {
    C ph = 1.0;
    for (const auto &v : u.a) {
        if (std::abs(v) > 1e-6) {
            ph = std::conj(v) / std::abs(v);
            break;
        }
    }
    std::vector<long long> out;
    for (const auto &v : u.a) {
        const C w = v * ph;
        out.push_back(std::llround(w.real() / quantum));
        out.push_back(std::llround(w.imag() / quantum));
    }
    return out;
}

// A placement over the elementary set {h, t, tdg, cnot}: gate index and qubits.
struct Step {
    int gate;
    std::vector<int> qubits;
};

inline Dense elementary(int gate) {
    switch (gate) {
    case 0: return H();
    case 1: return T();
    case 2: return Tdg();
    default: return CNOT();
    }
}

// All placements of {h, t, tdg, cnot} on n fully connected qubits.
inline std::vector<Step> all_steps(int n) {
    std::vector<Step> steps;
    for (int g = 0; g < 3; ++g)
        for (int q = 0; q < n; ++q)
            steps.push_back({g, {q}});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b)
                steps.push_back({3, {a, b}});
    return steps;
}

// Every sequence of at most max_len steps, visited with its unitary.
template <typename F>
void for_each_sequence(int n, int max_len, F &&f) {
    const auto steps = all_steps(n);
    std::vector<Dense> ops;
    for (const auto &s : steps) {
        ops.push_back(embed(elementary(s.gate), s.qubits, n));
    }
    std::vector<int> seq;
    auto rec = [&](auto &&self, const Dense &u) -> void {
        f(seq, u);
        if (static_cast<int>(seq.size()) == max_len) {
            return;
        }
        for (std::size_t i = 0; i < steps.size(); ++i) {
            seq.push_back(static_cast<int>(i));
            self(self, mul(ops[i], u));
            seq.pop_back();
        }
    };
    rec(rec, eye(std::size_t{1} << n));
}

// P(min(X, cap)) moments for X ~ Binomial(n, 1/2).
inline std::pair<double, double> capped_binomial_moments(int n, int cap) {
    double mean = 0.0;
    double second = 0.0;
    for (int k = 0; k <= n; ++k) {
        double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double p = std::exp(logc - n * std::log(2.0));
        const double v = std::min(k, cap);
        mean += p * v;
        second += p * v * v;
    }
    return {mean, second - mean * mean};
}

} // namespace oracle
