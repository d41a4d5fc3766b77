// Copyright 2026 The noisy-vqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisy_vqe/core/linalg.hpp"

namespace noisy_vqe {

// Qubit i is bit i of a basis index (little-endian). Bitstrings are printed
// qubit-0-first, so "1100" is basis index 3.

inline constexpr int kMaxQubits = 10;

inline std::size_t dimension_of(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
    return std::size_t{1} << n_qubits;
}

inline std::string index_to_bitstring(std::uint64_t index, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if ((index >> q) & 1U) {
            s[static_cast<std::size_t>(q)] = '1';
        }
    }
    return s;
}

inline std::uint64_t bitstring_to_index(const std::string &bits) {
    std::uint64_t index = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            index |= std::uint64_t{1} << q;
        } else if (bits[q] != '0') {
            throw std::invalid_argument("bitstring may only contain '0' and '1': " + bits);
        }
    }
    return index;
}

namespace detail {

/// Applies a 2^k x 2^k operator to the addressed qubits of a strided vector of
/// length 2^n. Local index bit j corresponds to qubits[j].
inline void apply_local(Complex *data, std::size_t stride, int n_qubits, std::span<const int> qubits,
                        const Matrix &op, bool conjugate = false) {
    constexpr std::size_t kStackDim = 16;
    const std::size_t k = qubits.size();
    const std::size_t local_dim = std::size_t{1} << k;
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::uint64_t mask = 0;
    for (int q : qubits) {
        mask |= std::uint64_t{1} << q;
    }
    // Nonzero entries in compressed-row form; gates and channel
    // superoperators are mostly sparse.
    std::array<std::size_t, kStackDim> offsets_small{};
    std::array<Complex, kStackDim> in_small{};
    std::array<std::size_t, kStackDim + 1> start_small{};
    std::array<std::size_t, kStackDim * kStackDim> col_small{};
    std::array<Complex, kStackDim * kStackDim> val_small{};
    std::vector<std::size_t> offsets_big;
    std::vector<Complex> in_big;
    std::vector<std::size_t> start_big;
    std::vector<std::size_t> col_big;
    std::vector<Complex> val_big;
    std::size_t *offsets = offsets_small.data();
    Complex *in = in_small.data();
    std::size_t *row_start = start_small.data();
    std::size_t *col = col_small.data();
    Complex *val = val_small.data();
    if (local_dim > kStackDim) {
        offsets_big.resize(local_dim);
        in_big.resize(local_dim);
        start_big.resize(local_dim + 1);
        col_big.resize(local_dim * local_dim);
        val_big.resize(local_dim * local_dim);
        offsets = offsets_big.data();
        in = in_big.data();
        row_start = start_big.data();
        col = col_big.data();
        val = val_big.data();
    }
    std::size_t nnz = 0;
    for (std::size_t l = 0; l < local_dim; ++l) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if ((l >> j) & 1U) {
                off |= std::size_t{1} << qubits[j];
            }
        }
        offsets[l] = off;
        row_start[l] = nnz;
        for (std::size_t c = 0; c < local_dim; ++c) {
            const Complex v = conjugate ? std::conj(op(l, c)) : op(l, c);
            if (v != Complex(0.0)) {
                col[nnz] = c;
                val[nnz] = v;
                ++nnz;
            }
        }
    }
    row_start[local_dim] = nnz;
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t l = 0; l < local_dim; ++l) {
            in[l] = data[(base | offsets[l]) * stride];
        }
        for (std::size_t r = 0; r < local_dim; ++r) {
            // Plain real arithmetic: std::complex multiplication carries
            // NaN-recovery branches that dominate the runtime otherwise.
            double re = 0.0;
            double im = 0.0;
            for (std::size_t e = row_start[r]; e < row_start[r + 1]; ++e) {
                const Complex a = val[e];
                const Complex x = in[col[e]];
                re += a.real() * x.real() - a.imag() * x.imag();
                im += a.real() * x.imag() + a.imag() * x.real();
            }
            data[(base | offsets[r]) * stride] = Complex(re, im);
        }
    }
}

inline void check_qubits(std::span<const int> qubits, int n_qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits) {
            throw std::out_of_range("qubit index " + std::to_string(qubits[i]) + " out of range for " +
                                    std::to_string(n_qubits) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) {
                throw std::invalid_argument("qubit indices must be distinct");
            }
        }
    }
}

} // namespace detail

/// Pure state on n qubits with unit norm.
class Statevector {
  public:
    static constexpr double kNormTolerance = 1e-10;

    explicit Statevector(int n_qubits) : n_qubits_(n_qubits), amplitudes_(dimension_of(n_qubits)) {
        amplitudes_[0] = 1.0;
    }

    Statevector(int n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != dimension_of(n_qubits)) {
            throw std::invalid_argument("Statevector: amplitude count must be 2^n_qubits");
        }
        if (std::abs(norm(amplitudes_) - 1.0) > kNormTolerance) {
            throw std::invalid_argument("Statevector: amplitudes are not normalized");
        }
    }

    static Statevector basis(int n_qubits, std::uint64_t index) {
        Statevector s(n_qubits);
        if (index >= s.dimension()) {
            throw std::out_of_range("Statevector::basis: index out of range");
        }
        s.amplitudes_[0] = 0.0;
        s.amplitudes_[index] = 1.0;
        return s;
    }

    static Statevector from_bitstring(const std::string &bits) {
        return basis(static_cast<int>(bits.size()), bitstring_to_index(bits));
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    void apply_local(std::span<const int> qubits, const Matrix &op) {
        detail::check_qubits(qubits, n_qubits_);
        detail::apply_local(amplitudes_.data(), 1, n_qubits_, qubits, op);
    }

    /// Raw access for in-place kernels that preserve the norm.
    [[nodiscard]] std::span<Complex> mutable_amplitudes() { return amplitudes_; }

  private:
    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Mixed state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
  public:
    static constexpr double kHermitianTolerance = 1e-10;
    static constexpr double kTraceTolerance = 1e-10;
    static constexpr double kEigenvalueFloor = -1e-9;

    explicit DensityMatrix(int n_qubits) : n_qubits_(n_qubits), rho_(dimension_of(n_qubits), dimension_of(n_qubits)) {
        rho_(0, 0) = 1.0;
    }

    DensityMatrix(int n_qubits, Matrix rho) : n_qubits_(n_qubits), rho_(std::move(rho)) {
        const std::size_t dim = dimension_of(n_qubits);
        if (rho_.rows() != dim || rho_.cols() != dim) {
            throw std::invalid_argument("DensityMatrix: matrix must be 2^n x 2^n");
        }
        if (!is_hermitian(rho_, kHermitianTolerance)) {
            throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
        }
        if (std::abs(rho_.trace() - 1.0) > kTraceTolerance) {
            throw std::invalid_argument("DensityMatrix: trace differs from 1");
        }
    }

    static DensityMatrix from_statevector(const Statevector &psi) {
        const std::size_t dim = psi.dimension();
        Matrix rho(dim, dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                rho(r, c) = psi[r] * std::conj(psi[c]);
            }
        }
        return DensityMatrix(psi.n_qubits(), std::move(rho));
    }

    static DensityMatrix maximally_mixed(int n_qubits) {
        const std::size_t dim = dimension_of(n_qubits);
        Matrix rho = Matrix::identity(dim);
        rho *= 1.0 / static_cast<double>(dim);
        return DensityMatrix(n_qubits, std::move(rho));
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const { return rho_.rows(); }
    [[nodiscard]] const Matrix &matrix() const { return rho_; }
    [[nodiscard]] const Complex &operator()(std::size_t r, std::size_t c) const { return rho_(r, c); }

    [[nodiscard]] double trace() const { return rho_.trace().real(); }

    [[nodiscard]] double purity() const {
        double p = 0.0;
        for (const auto &x : rho_.data()) {
            p += std::norm(x);
        }
        return p;
    }

    [[nodiscard]] double min_eigenvalue() const { return hermitian_eigen(rho_).values.front(); }

    /// Hermiticity, unit trace and eigenvalue floor, at the class tolerances.
    [[nodiscard]] bool is_valid() const {
        return is_hermitian(rho_, kHermitianTolerance) && std::abs(trace() - 1.0) <= kTraceTolerance &&
               min_eigenvalue() >= kEigenvalueFloor;
    }

    /// rho -> U rho U^dagger on the addressed qubits.
    void apply_unitary(std::span<const int> qubits, const Matrix &u) {
        detail::check_qubits(qubits, n_qubits_);
        sandwich(qubits, u);
    }

    /// rho -> sum_k E_k rho E_k^dagger on the addressed qubits. No completeness
    /// check; callers go through KrausChannel.
    void apply_kraus(std::span<const int> qubits, std::span<const Matrix> ops) {
        detail::check_qubits(qubits, n_qubits_);
        const auto data = rho_.data();
        if (ops.size() == 1) {
            sandwich(data.data(), qubits, ops[0]);
            return;
        }
        std::vector<Complex> acc(data.size(), 0.0);
        std::vector<Complex> work(data.size());
        for (const Matrix &e : ops) {
            std::copy(data.begin(), data.end(), work.begin());
            sandwich(work.data(), qubits, e);
            for (std::size_t i = 0; i < acc.size(); ++i) {
                acc[i] += work[i];
            }
        }
        std::copy(acc.begin(), acc.end(), data.begin());
    }

    /// rho -> S(rho) for a superoperator on k qubits, indexed by
    /// (row_local + 2^k * col_local) on both sides.
    void apply_superoperator(std::span<const int> qubits, const Matrix &s) {
        detail::check_qubits(qubits, n_qubits_);
        const std::size_t k = qubits.size();
        if (s.rows() != (std::size_t{1} << (2 * k)) || s.cols() != s.rows()) {
            throw std::invalid_argument("apply_superoperator: dimension must be 4^k");
        }
        std::array<int, 8> bits{};
        std::vector<int> bits_big;
        int *b = bits.data();
        if (2 * k > bits.size()) {
            bits_big.resize(2 * k);
            b = bits_big.data();
        }
        for (std::size_t j = 0; j < k; ++j) {
            b[j] = qubits[j] + n_qubits_;
            b[k + j] = qubits[j];
        }
        detail::apply_local(rho_.data().data(), 1, 2 * n_qubits_, std::span<const int>(b, 2 * k), s);
    }

  private:
    // rho -> M rho M^dagger on the row-major buffer, viewed as a vector over
    // 2n qubits: row qubit q is bit q + n, column qubit q is bit q.
    void sandwich(Complex *data, std::span<const int> qubits, const Matrix &m) const {
        std::array<int, 8> rows{};
        std::vector<int> rows_big;
        int *row_bits = rows.data();
        if (qubits.size() > rows.size()) {
            rows_big.resize(qubits.size());
            row_bits = rows_big.data();
        }
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            row_bits[j] = qubits[j] + n_qubits_;
        }
        detail::apply_local(data, 1, 2 * n_qubits_, std::span<const int>(row_bits, qubits.size()), m);
        detail::apply_local(data, 1, 2 * n_qubits_, qubits, m, /*conjugate=*/true);
    }

    void sandwich(std::span<const int> qubits, const Matrix &m) { sandwich(rho_.data().data(), qubits, m); }

    int n_qubits_;
    Matrix rho_;
};

} // namespace noisy_vqe
