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
#include "gatesmith/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gatesmith {

namespace {

void require_power_of_two(std::size_t dim) {
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("matrix dimension must be a power of two >= 2, got " +
                                    std::to_string(dim));
    }
}

void require_same_dim(const Matrix &a, const Matrix &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
    }
}

constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    require_power_of_two(dim);
}

Matrix::Matrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    require_power_of_two(dim);
    if (data_.size() != dim * dim) {
        throw std::invalid_argument("matrix of dimension " + std::to_string(dim) + " needs " +
                                    std::to_string(dim * dim) + " entries, got " +
                                    std::to_string(data_.size()));
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

int Matrix::n_qubits() const { return std::countr_zero(dim_); }

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

double Matrix::unitarity_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                acc += std::conj((*this)(k, i)) * (*this)(k, j);
            }
            if (i == j) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

Matrix &Matrix::operator*=(Complex scalar) {
    for (auto &z : data_) {
        z *= scalar;
    }
    return *this;
}

Matrix multiply(const Matrix &a, const Matrix &b) {
    require_same_dim(a, b, "multiply");
    const std::size_t n = a.dim();
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix operator*(Complex scalar, const Matrix &m) {
    Matrix out = m;
    out *= scalar;
    return out;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    Matrix out(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            for (std::size_t k = 0; k < db; ++k) {
                for (std::size_t l = 0; l < db; ++l) {
                    out(i * db + k, j * db + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

Matrix embed(const Matrix &gate, std::span<const int> qubits, int n_qubits) {
    const auto k = static_cast<int>(qubits.size());
    if (n_qubits < 1 || n_qubits > 20) {
        throw std::invalid_argument("embed: unsupported qubit count " + std::to_string(n_qubits));
    }
    if (gate.dim() != (std::size_t{1} << k)) {
        throw std::invalid_argument("embed: gate dimension " + std::to_string(gate.dim()) +
                                    " does not match " + std::to_string(k) + " qubits");
    }
    for (int i = 0; i < k; ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits) {
            throw std::invalid_argument("embed: qubit index " + std::to_string(qubits[i]) +
                                        " out of range for " + std::to_string(n_qubits) +
                                        " qubits");
        }
        for (int j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) {
                throw std::invalid_argument("embed: repeated qubit index " +
                                            std::to_string(qubits[i]));
            }
        }
    }

    const std::size_t dim = std::size_t{1} << n_qubits;
    std::size_t gate_mask = 0;
    for (int q : qubits) {
        gate_mask |= std::size_t{1} << (n_qubits - 1 - q);
    }
    auto local_index = [&](std::size_t basis) {
        std::size_t local = 0;
        for (int q : qubits) {
            local = (local << 1) | ((basis >> (n_qubits - 1 - q)) & 1U);
        }
        return local;
    };

    Matrix out(dim);
    for (std::size_t row = 0; row < dim; ++row) {
        const std::size_t row_local = local_index(row);
        const std::size_t rest = row & ~gate_mask;
        for (std::size_t col_local = 0; col_local < gate.dim(); ++col_local) {
            std::size_t col = rest;
            for (int i = 0; i < k; ++i) {
                if ((col_local >> (k - 1 - i)) & 1U) {
                    col |= std::size_t{1} << (n_qubits - 1 - qubits[i]);
                }
            }
            out(row, col) = gate(row_local, col_local);
        }
    }
    return out;
}

double frobenius_distance(const Matrix &u, const Matrix &v) {
    require_same_dim(u, v, "frobenius_distance");
    double acc = 0.0;
    const auto a = u.entries();
    const auto b = v.entries();
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::norm(a[i] - b[i]);
    }
    return std::sqrt(acc);
}

double phase_aligned_distance(const Matrix &u, const Matrix &v) {
    require_same_dim(u, v, "phase_aligned_distance");
    return phase_aligned_distance(u.entries(), v.entries());
}

double phase_aligned_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("phase_aligned_distance: size mismatch");
    }
    Complex overlap = 0.0; // trace(v^dagger u)
    for (std::size_t i = 0; i < a.size(); ++i) {
        overlap += std::conj(b[i]) * a[i];
    }
    const double magnitude = std::abs(overlap);
    if (magnitude < 1e-300) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            acc += std::norm(a[i] - b[i]);
        }
        return std::sqrt(acc);
    }
    const Complex phase = overlap / magnitude;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::norm(a[i] - phase * b[i]);
    }
    return std::sqrt(acc);
}

UnitaryKey canonical_key(std::span<const Complex> entries, double quantum) {
    Complex unphase = 1.0;
    for (const auto &z : entries) {
        const double modulus = std::abs(z);
        if (modulus > quantum) {
            unphase = std::conj(z) / modulus;
            break;
        }
    }
    std::uint64_t h0 = 0x243f6a8885a308d3ULL ^ entries.size();
    std::uint64_t h1 = 0x13198a2e03707344ULL ^ mix64(entries.size());
    const double inv = 1.0 / quantum;
    for (const auto &z : entries) {
        const Complex w = z * unphase;
        for (double part : {w.real(), w.imag()}) {
            const auto q = static_cast<std::uint64_t>(std::llround(part * inv));
            h0 = mix64(h0 ^ q);
            h1 = mix64(h1 + q * 0xff51afd7ed558ccdULL) ^ (h1 >> 17);
        }
    }
    return UnitaryKey{{h0, h1}};
}

SparseOperator::SparseOperator(const Matrix &dense) : dim_(dense.dim()) {
    row_start_.reserve(dim_ + 1);
    row_start_.push_back(0);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            const Complex z = dense(r, c);
            if (std::abs(z) > 1e-15) {
                cols_.push_back(static_cast<std::uint32_t>(c));
                values_.push_back(z);
            }
        }
        row_start_.push_back(static_cast<std::uint32_t>(cols_.size()));
    }
}

void SparseOperator::apply_left(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t n = dim_;
    for (std::size_t r = 0; r < n; ++r) {
        Complex *dst = out.data() + r * n;
        std::fill(dst, dst + n, Complex{});
        for (std::uint32_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
            const Complex v = values_[e];
            const Complex *src = in.data() + static_cast<std::size_t>(cols_[e]) * n;
            for (std::size_t c = 0; c < n; ++c) {
                dst[c] += v * src[c];
            }
        }
    }
}

} // namespace gatesmith
