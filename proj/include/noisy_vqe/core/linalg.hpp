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
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace noisy_vqe {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sized for desk-scale Hilbert spaces
/// (a few hundred rows at most), so no blocking or expression templates.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("Matrix: data size does not match shape");
        }
    }
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &row : rows) {
            if (row.size() != cols_) {
                throw std::invalid_argument("Matrix: ragged initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static Matrix diagonal(std::span<const Complex> diag) {
        Matrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            m(i, i) = diag[i];
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<Complex> data() { return data_; }
    [[nodiscard]] std::span<const Complex> data() const { return data_; }

    [[nodiscard]] Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    [[nodiscard]] Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    Matrix &operator+=(const Matrix &other) {
        check_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += other.data_[i];
        }
        return *this;
    }

    Matrix &operator-=(const Matrix &other) {
        check_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= other.data_[i];
        }
        return *this;
    }

    Matrix &operator*=(Complex s) {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("Matrix: inner dimensions differ");
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend std::vector<Complex> operator*(const Matrix &a, std::span<const Complex> v) {
        if (a.cols_ != v.size()) {
            throw std::invalid_argument("Matrix: vector length differs from column count");
        }
        std::vector<Complex> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < a.cols_; ++j) {
                acc += a(i, j) * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

  private:
    void check_same_shape(const Matrix &other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw std::invalid_argument("Matrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Standard Kronecker product: `a` occupies the most significant index.
inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

inline bool is_hermitian(const Matrix &m, double tol) {
    if (!m.is_square()) {
        return false;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r; c < m.cols(); ++c) {
            if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

inline double norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto &x : v) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

struct SymmetricEigen {
    std::vector<double> values; // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi diagonalization of a real symmetric matrix given row-major.
/// Sweeps until the off-diagonal Frobenius norm drops below `tol`.
inline SymmetricEigen jacobi_eigen_symmetric(std::vector<double> a, std::size_t n, double tol = 1e-12,
                                             int max_sweeps = 100) {
    if (a.size() != n * n) {
        throw std::invalid_argument("jacobi_eigen_symmetric: size mismatch");
    }
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
    }
    auto at = [&](std::size_t r, std::size_t c) -> double & { return a[r * n + c]; };
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (r != c) {
                    s += at(r, c) * at(r, c);
                }
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > tol) {
        if (++sweep > max_sweeps) {
            throw std::runtime_error("jacobi_eigen_symmetric: no convergence");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });
    SymmetricEigen out;
    for (std::size_t idx : order) {
        out.values.push_back(at(idx, idx));
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k) {
            col[k] = v[k * n + idx];
        }
        out.vectors.push_back(std::move(col));
    }
    return out;
}

struct HermitianEigen {
    std::vector<double> values; // ascending
    std::vector<std::vector<Complex>> vectors;
};

/// Diagonalizes a Hermitian matrix through its real symmetric embedding
/// [[Re, -Im], [Im, Re]], whose spectrum is the Hermitian spectrum doubled.
inline HermitianEigen hermitian_eigen(const Matrix &h, double tol = 1e-12) {
    if (!is_hermitian(h, 1e-10)) {
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");
    }
    const std::size_t n = h.rows();
    const std::size_t m = 2 * n;
    std::vector<double> real_form(m * m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double re = h(r, c).real();
            const double im = h(r, c).imag();
            real_form[r * m + c] = re;
            real_form[(r + n) * m + (c + n)] = re;
            real_form[r * m + (c + n)] = -im;
            real_form[(r + n) * m + c] = im;
        }
    }
    const SymmetricEigen sym = jacobi_eigen_symmetric(std::move(real_form), m, tol);

    // Each Hermitian eigenvalue appears twice; (u, v) and (-v, u) map to the
    // complex vectors u + iv and i(u + iv). Orthonormalize inside each
    // degenerate group and keep the independent half.
    HermitianEigen out;
    std::size_t start = 0;
    const double group_tol = 1e-8;
    while (start < m) {
        std::size_t end = start + 1;
        while (end < m && sym.values[end] - sym.values[start] < group_tol) {
            ++end;
        }
        std::vector<std::vector<Complex>> basis;
        for (std::size_t k = start; k < end && basis.size() < (end - start) / 2; ++k) {
            std::vector<Complex> cand(n);
            for (std::size_t i = 0; i < n; ++i) {
                cand[i] = Complex(sym.vectors[k][i], sym.vectors[k][i + n]);
            }
            for (const auto &b : basis) {
                const Complex proj = inner(b, cand);
                for (std::size_t i = 0; i < n; ++i) {
                    cand[i] -= proj * b[i];
                }
            }
            const double len = norm(cand);
            if (len < 0.5) {
                continue;
            }
            for (auto &x : cand) {
                x /= len;
            }
            basis.push_back(std::move(cand));
        }
        double mean = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            mean += sym.values[k];
        }
        mean /= static_cast<double>(end - start);
        for (auto &b : basis) {
            out.values.push_back(mean);
            out.vectors.push_back(std::move(b));
        }
        start = end;
    }
    if (out.values.size() != n) {
        throw std::runtime_error("hermitian_eigen: eigenvalue pairing failed");
    }
    return out;
}

} // namespace noisy_vqe
