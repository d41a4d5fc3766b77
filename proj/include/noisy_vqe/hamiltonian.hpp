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

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisy_vqe/core/gates.hpp"
#include "noisy_vqe/core/linalg.hpp"
#include "noisy_vqe/core/state.hpp"

namespace noisy_vqe {

/// coefficient * P, with `paulis[i]` the symbol on qubit i.
struct PauliTerm {
    double coefficient = 0.0;
    std::string paulis;

    [[nodiscard]] int n_qubits() const { return static_cast<int>(paulis.size()); }

    [[nodiscard]] bool is_identity() const { return paulis.find_first_not_of('I') == std::string::npos; }

    /// Qubits carrying a non-identity symbol.
    [[nodiscard]] std::vector<int> support() const {
        std::vector<int> out;
        for (std::size_t q = 0; q < paulis.size(); ++q) {
            if (paulis[q] != 'I') {
                out.push_back(static_cast<int>(q));
            }
        }
        return out;
    }

    [[nodiscard]] int weight() const { return static_cast<int>(support().size()); }

    friend bool operator==(const PauliTerm &, const PauliTerm &) = default;
};

namespace detail {

// P|x> = i^{n_y} (-1)^{popcount(x & z_mask)} |x ^ x_mask>
struct PauliAction {
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
    Complex global = 1.0;

    explicit PauliAction(const std::string &paulis) {
        int n_y = 0;
        for (std::size_t q = 0; q < paulis.size(); ++q) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            switch (paulis[q]) {
            case 'I':
                break;
            case 'X':
                x_mask |= bit;
                break;
            case 'Y':
                x_mask |= bit;
                z_mask |= bit;
                ++n_y;
                break;
            case 'Z':
                z_mask |= bit;
                break;
            default:
                throw std::invalid_argument("invalid Pauli symbol in '" + paulis + "'");
            }
        }
        static const Complex kPowers[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
        global = kPowers[n_y % 4];
    }

    [[nodiscard]] Complex phase(std::uint64_t x) const {
        return (std::popcount(x & z_mask) & 1) ? -global : global;
    }
};

} // namespace detail

class Hamiltonian {
  public:
    static constexpr double kHermitianTolerance = 1e-12;

    explicit Hamiltonian(int n_qubits) : n_qubits_(n_qubits) { (void)dimension_of(n_qubits); }

    Hamiltonian(int n_qubits, const std::vector<PauliTerm> &terms) : Hamiltonian(n_qubits) {
        for (const auto &t : terms) {
            add_term(t);
        }
    }

    /// Adds a term, merging with an existing term on the same Pauli string.
    void add_term(const PauliTerm &term) {
        if (term.n_qubits() != n_qubits_) {
            throw std::invalid_argument("PauliTerm '" + term.paulis + "' does not match " +
                                        std::to_string(n_qubits_) + " qubits");
        }
        if (!std::isfinite(term.coefficient)) {
            throw std::invalid_argument("PauliTerm coefficient must be finite");
        }
        (void)detail::PauliAction(term.paulis);
        for (auto &existing : terms_) {
            if (existing.paulis == term.paulis) {
                existing.coefficient += term.coefficient;
                return;
            }
        }
        terms_.push_back(term);
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const & { return terms_; }
    [[nodiscard]] std::vector<PauliTerm> terms() && { return std::move(terms_); }

    [[nodiscard]] double identity_coefficient() const {
        for (const auto &t : terms_) {
            if (t.is_identity()) {
                return t.coefficient;
            }
        }
        return 0.0;
    }

    [[nodiscard]] double coefficient_of(const std::string &paulis) const {
        for (const auto &t : terms_) {
            if (t.paulis == paulis) {
                return t.coefficient;
            }
        }
        return 0.0;
    }

    /// Sum of |h_k|: bounds every eigenvalue in magnitude.
    [[nodiscard]] double coefficient_l1_norm() const {
        double s = 0.0;
        for (const auto &t : terms_) {
            s += std::abs(t.coefficient);
        }
        return s;
    }

  private:
    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// The 4-qubit H2 Hamiltonian at 1.3228 au interatomic distance (STO-3G,
/// Jordan-Wigner). Grouped coefficients are stored one string per term.
inline Hamiltonian h2_hamiltonian() {
    constexpr double c1 = -0.04207254303152995;
    constexpr double c2 = 0.17771358191549907;
    constexpr double c3 = 0.17771358191549919;
    constexpr double c4 = -0.2427450172749822;
    constexpr double c5 = 0.12293330460167415;
    constexpr double c6 = 0.16768338881432715;
    constexpr double c7 = 0.17059759240560826;
    constexpr double c8 = 0.17627661476093917;
    constexpr double c9 = 0.04475008421265302;
    return Hamiltonian(4, {
                              {c1, "IIII"},
                              {c2, "ZIII"},
                              {c3, "IZII"},
                              {c4, "IIZI"},
                              {c4, "IIIZ"},
                              {c5, "ZIZI"},
                              {c5, "IZIZ"},
                              {c6, "ZIIZ"},
                              {c6, "IZZI"},
                              {c7, "ZZII"},
                              {c8, "IIZZ"},
                              {c9, "YXXY"},
                              {c9, "XYYX"},
                              {-c9, "YYXX"},
                              {-c9, "XXYY"},
                          });
}

/// Reference H2 ground-state energy in Hartree. Diagonalizing the 15 terms of
/// `h2_hamiltonian()` gives -1.1361891624, 2.9e-7 above this value.
inline constexpr double kH2GroundEnergy = -1.136189454088;

/// Chemical accuracy in Hartree.
inline constexpr double kChemicalAccuracy = 1.6e-3;

inline Matrix term_matrix(const PauliTerm &term) {
    Matrix m = pauli::string_matrix(term.paulis);
    m *= term.coefficient;
    return m;
}

inline Matrix dense_matrix(const Hamiltonian &h) {
    const std::size_t dim = dimension_of(h.n_qubits());
    Matrix m(dim, dim);
    for (const auto &t : h.terms()) {
        m += term_matrix(t);
    }
    if (!is_hermitian(m, Hamiltonian::kHermitianTolerance)) {
        throw std::logic_error("Hamiltonian dense form is not Hermitian");
    }
    return m;
}

namespace detail {

inline void check_real(Complex value) {
    if (std::abs(value.imag()) > 1e-10) {
        throw std::logic_error("expectation value has an imaginary residue of " + std::to_string(value.imag()));
    }
}

} // namespace detail

/// <psi|P|psi> for one Pauli string (coefficient ignored).
inline double pauli_expectation(const Statevector &psi, const std::string &paulis) {
    if (static_cast<int>(paulis.size()) != psi.n_qubits()) {
        throw std::invalid_argument("pauli_expectation: dimension mismatch");
    }
    const detail::PauliAction action(paulis);
    Complex acc = 0.0;
    for (std::uint64_t x = 0; x < psi.dimension(); ++x) {
        acc += std::conj(psi[x ^ action.x_mask]) * action.phase(x) * psi[x];
    }
    detail::check_real(acc);
    return acc.real();
}

/// Tr(rho P) for one Pauli string (coefficient ignored).
inline double pauli_expectation(const DensityMatrix &rho, const std::string &paulis) {
    if (static_cast<int>(paulis.size()) != rho.n_qubits()) {
        throw std::invalid_argument("pauli_expectation: dimension mismatch");
    }
    const detail::PauliAction action(paulis);
    Complex acc = 0.0;
    for (std::uint64_t x = 0; x < rho.dimension(); ++x) {
        acc += action.phase(x) * rho(x, x ^ action.x_mask);
    }
    detail::check_real(acc);
    return acc.real();
}

/// sum_k h_k <P_k>, analytic.
template <typename State>
double expectation_exact(const State &state, const Hamiltonian &h) {
    if (state.n_qubits() != h.n_qubits()) {
        throw std::invalid_argument("expectation_exact: state has " + std::to_string(state.n_qubits()) +
                                    " qubits, Hamiltonian has " + std::to_string(h.n_qubits()));
    }
    double e = 0.0;
    for (const auto &t : h.terms()) {
        e += t.is_identity() ? t.coefficient : t.coefficient * pauli_expectation(state, t.paulis);
    }
    return e;
}

inline constexpr int kMaxSpectrumQubits = 6;

/// All 2^n eigenvalues in ascending order.
inline std::vector<double> exact_spectrum(const Hamiltonian &h) {
    if (h.n_qubits() > kMaxSpectrumQubits) {
        throw std::invalid_argument("exact_spectrum: at most " + std::to_string(kMaxSpectrumQubits) +
                                    " qubits supported");
    }
    return hermitian_eigen(dense_matrix(h)).values;
}

inline Statevector ground_state(const Hamiltonian &h) {
    if (h.n_qubits() > kMaxSpectrumQubits) {
        throw std::invalid_argument("ground_state: at most " + std::to_string(kMaxSpectrumQubits) +
                                    " qubits supported");
    }
    auto eig = hermitian_eigen(dense_matrix(h));
    return Statevector(h.n_qubits(), std::move(eig.vectors.front()));
}

} // namespace noisy_vqe
