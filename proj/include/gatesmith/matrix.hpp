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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gatesmith {

using Complex = std::complex<double>;

/// Tolerance used when checking U^dagger U = I.
inline constexpr double kUnitaryTolerance = 1e-9;
/// Default tolerance on the phase-aligned Frobenius distance for "same unitary".
inline constexpr double kEqualityTolerance = 1e-6;
/// Quantization step of canonical keys.
inline constexpr double kKeyQuantum = 1e-6;

/**
 * @brief Dense square complex matrix of dimension 2^n, stored row-major.
 *
 * Qubit ordering convention (used everywhere in the library): qubit 0 is the
 * most significant bit of a basis index. On n qubits, the bit of qubit q in
 * basis index b is (b >> (n - 1 - q)) & 1.
 */
class Matrix {
  public:
    Matrix() = default;
    /// Zero matrix. Throws std::invalid_argument unless dim is a power of two >= 2.
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::vector<Complex> entries);

    static Matrix identity(std::size_t dim);
    static Matrix identity_qubits(int n_qubits) {
        return identity(std::size_t{1} << n_qubits);
    }

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] int n_qubits() const;
    [[nodiscard]] bool empty() const { return dim_ == 0; }

    Complex &operator()(std::size_t row, std::size_t col) {
        return data_[row * dim_ + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    [[nodiscard]] std::span<const Complex> entries() const { return data_; }
    [[nodiscard]] std::span<Complex> entries() { return data_; }

    [[nodiscard]] Matrix adjoint() const;
    /// max |(U^dagger U - I)_ij|
    [[nodiscard]] double unitarity_error() const;
    [[nodiscard]] bool is_unitary(double tol = kUnitaryTolerance) const {
        return unitarity_error() <= tol;
    }

    Matrix &operator*=(Complex scalar);

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Standard product a * b. Throws std::invalid_argument on dimension mismatch.
Matrix multiply(const Matrix &a, const Matrix &b);
inline Matrix operator*(const Matrix &a, const Matrix &b) { return multiply(a, b); }
Matrix operator*(Complex scalar, const Matrix &m);

/// Kronecker product a (x) b; a acts on the more significant qubits.
Matrix kron(const Matrix &a, const Matrix &b);

/**
 * @brief Embed a k-qubit gate into an n-qubit space.
 *
 * The gate acts on @p qubits in the listed order: qubits[0] is the most
 * significant bit of the gate's local index. Identity elsewhere.
 * Throws std::invalid_argument on repeated or out-of-range qubits, or when
 * the gate dimension is not 2^qubits.size().
 */
Matrix embed(const Matrix &gate, std::span<const int> qubits, int n_qubits);

/// Plain Frobenius norm of u - v.
double frobenius_distance(const Matrix &u, const Matrix &v);

/// min over real phi of ||u - e^{i phi} v||_F.
double phase_aligned_distance(const Matrix &u, const Matrix &v);
/// Same, on raw row-major entries of equal length.
double phase_aligned_distance(std::span<const Complex> u, std::span<const Complex> v);

/// True iff the phase-aligned distance is within @p tol.
inline bool equal_up_to_phase(const Matrix &u, const Matrix &v,
                              double tol = kEqualityTolerance) {
    return phase_aligned_distance(u, v) <= tol;
}

/// 128-bit digest of a phase-canonicalized, quantized unitary.
struct UnitaryKey {
    std::array<std::uint64_t, 2> words{};

    friend bool operator==(const UnitaryKey &, const UnitaryKey &) = default;
    friend auto operator<=>(const UnitaryKey &, const UnitaryKey &) = default;
};

struct UnitaryKeyHash {
    std::size_t operator()(const UnitaryKey &key) const noexcept {
        return static_cast<std::size_t>(key.words[0] ^ (key.words[1] * 0x9e3779b97f4a7c15ULL));
    }
};

/**
 * @brief Phase-invariant digest of a matrix.
 *
 * The matrix is multiplied by e^{-i theta}, theta being the argument of the
 * first row-major entry with modulus above @p quantum, then every real and
 * imaginary component is rounded to the nearest multiple of @p quantum.
 */
UnitaryKey canonical_key(std::span<const Complex> entries, double quantum = kKeyQuantum);
inline UnitaryKey canonical_key(const Matrix &u, double quantum = kKeyQuantum) {
    return canonical_key(u.entries(), quantum);
}

/**
 * @brief Row-compressed form of an embedded gate, used to left-multiply
 * accumulated circuit unitaries without materializing dense products.
 */
class SparseOperator {
  public:
    SparseOperator() = default;
    explicit SparseOperator(const Matrix &dense);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }

    /// out = this * in, both dim x dim row-major. @p out must not alias @p in.
    void apply_left(std::span<const Complex> in, std::span<Complex> out) const;

  private:
    std::size_t dim_ = 0;
    std::vector<std::uint32_t> row_start_;
    std::vector<std::uint32_t> cols_;
    std::vector<Complex> values_;
};

} // namespace gatesmith
