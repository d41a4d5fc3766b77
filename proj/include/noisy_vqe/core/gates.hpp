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

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_vqe/core/linalg.hpp"
#include "noisy_vqe/core/state.hpp"

namespace noisy_vqe {

enum class GateKind { X, Y, Z, H, S, Sdg, RX, RY, RZ, CNOT, PauliRotation };

inline constexpr std::array<std::pair<GateKind, std::string_view>, 11> kGateNames{{
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::H, "H"},
    {GateKind::S, "S"},
    {GateKind::Sdg, "Sdg"},
    {GateKind::RX, "RX"},
    {GateKind::RY, "RY"},
    {GateKind::RZ, "RZ"},
    {GateKind::CNOT, "CNOT"},
    {GateKind::PauliRotation, "PauliRotation"},
}};

inline std::string_view gate_name(GateKind kind) {
    for (const auto &[k, name] : kGateNames) {
        if (k == kind) {
            return name;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

inline GateKind gate_kind_from_name(std::string_view name) {
    for (const auto &[k, n] : kGateNames) {
        if (n == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown gate name: " + std::string(name));
}

inline bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::PauliRotation;
}

/// One circuit instruction. For PauliRotation, `pauli_axis[j]` is the Pauli
/// acting on `qubits[j]` and the gate is exp(-i angle/2 P).
struct GateOp {
    GateKind kind = GateKind::X;
    std::vector<int> qubits;
    std::optional<double> angle;
    std::string pauli_axis;

    [[nodiscard]] std::size_t arity() const { return qubits.size(); }

    friend bool operator==(const GateOp &, const GateOp &) = default;
};

namespace gates {

inline GateOp x(int q) { return {GateKind::X, {q}, std::nullopt, {}}; }
inline GateOp y(int q) { return {GateKind::Y, {q}, std::nullopt, {}}; }
inline GateOp z(int q) { return {GateKind::Z, {q}, std::nullopt, {}}; }
inline GateOp h(int q) { return {GateKind::H, {q}, std::nullopt, {}}; }
inline GateOp s(int q) { return {GateKind::S, {q}, std::nullopt, {}}; }
inline GateOp sdg(int q) { return {GateKind::Sdg, {q}, std::nullopt, {}}; }
inline GateOp rx(int q, double angle) { return {GateKind::RX, {q}, angle, {}}; }
inline GateOp ry(int q, double angle) { return {GateKind::RY, {q}, angle, {}}; }
inline GateOp rz(int q, double angle) { return {GateKind::RZ, {q}, angle, {}}; }
inline GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}, std::nullopt, {}}; }
inline GateOp pauli_rotation(std::vector<int> qubits, std::string axis, double angle) {
    return {GateKind::PauliRotation, std::move(qubits), angle, std::move(axis)};
}

} // namespace gates

namespace pauli {

inline const Matrix &matrix(char p) {
    static const Matrix i{{1.0, 0.0}, {0.0, 1.0}};
    static const Matrix x{{0.0, 1.0}, {1.0, 0.0}};
    static const Matrix y{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}};
    static const Matrix z{{1.0, 0.0}, {0.0, -1.0}};
    switch (p) {
    case 'I':
        return i;
    case 'X':
        return x;
    case 'Y':
        return y;
    case 'Z':
        return z;
    default:
        throw std::invalid_argument(std::string("invalid Pauli symbol '") + p + "'");
    }
}

/// Dense matrix of a Pauli string where `paulis[j]` acts on local bit j.
inline Matrix string_matrix(std::string_view paulis) {
    Matrix m = Matrix::identity(1);
    for (auto it = paulis.rbegin(); it != paulis.rend(); ++it) {
        m = kron(m, matrix(*it));
    }
    return m;
}

} // namespace pauli

/// Throws when the gate is malformed for an n-qubit register.
inline void validate_gate(const GateOp &gate, int n_qubits) {
    std::size_t expected = 1;
    switch (gate.kind) {
    case GateKind::CNOT:
        expected = 2;
        break;
    case GateKind::PauliRotation:
        expected = gate.pauli_axis.size();
        if (expected == 0) {
            throw std::invalid_argument("PauliRotation needs a non-empty axis");
        }
        for (char c : gate.pauli_axis) {
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw std::invalid_argument("PauliRotation axis has invalid symbol");
            }
        }
        break;
    default:
        break;
    }
    if (gate.qubits.size() != expected) {
        throw std::invalid_argument(std::string(gate_name(gate.kind)) + " expects " + std::to_string(expected) +
                                    " qubit(s)");
    }
    if (gate.kind != GateKind::PauliRotation && !gate.pauli_axis.empty()) {
        throw std::invalid_argument("pauli_axis is only valid for PauliRotation");
    }
    detail::check_qubits(gate.qubits, n_qubits);
    if (is_rotation(gate.kind) != gate.angle.has_value()) {
        throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                    (gate.angle ? " does not take an angle" : " requires an angle"));
    }
    if (gate.angle && !std::isfinite(*gate.angle)) {
        throw std::invalid_argument("gate angle must be finite");
    }
}

/// Local unitary in the gate's own qubit order (local bit j = qubits[j]).
inline Matrix gate_matrix(const GateOp &gate) {
    using std::numbers::sqrt2;
    const Complex i1(0.0, 1.0);
    const double half = gate.angle.value_or(0.0) / 2.0;
    const double c = std::cos(half);
    const double s = std::sin(half);
    switch (gate.kind) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
        return pauli::matrix(gate_name(gate.kind)[0]);
    case GateKind::H:
        return Matrix{{1.0 / sqrt2, 1.0 / sqrt2}, {1.0 / sqrt2, -1.0 / sqrt2}};
    case GateKind::S:
        return Matrix{{1.0, 0.0}, {0.0, i1}};
    case GateKind::Sdg:
        return Matrix{{1.0, 0.0}, {0.0, -i1}};
    case GateKind::RX:
        return Matrix{{c, -i1 * s}, {-i1 * s, c}};
    case GateKind::RY:
        return Matrix{{c, -s}, {s, c}};
    case GateKind::RZ:
        return Matrix{{std::exp(-i1 * half), 0.0}, {0.0, std::exp(i1 * half)}};
    case GateKind::CNOT: {
        // local index = control + 2 * target
        Matrix m(4, 4);
        m(0, 0) = 1.0;
        m(2, 2) = 1.0;
        m(3, 1) = 1.0;
        m(1, 3) = 1.0;
        return m;
    }
    case GateKind::PauliRotation: {
        const Matrix p = pauli::string_matrix(gate.pauli_axis);
        return Matrix::identity(p.rows()) * Complex(c) + p * (-i1 * s);
    }
    }
    throw std::invalid_argument("gate_matrix: unknown gate kind");
}

inline void apply_gate(Statevector &state, const GateOp &gate) {
    validate_gate(gate, state.n_qubits());
    state.apply_local(gate.qubits, gate_matrix(gate));
}

inline void apply_gate(DensityMatrix &rho, const GateOp &gate) {
    validate_gate(gate, rho.n_qubits());
    rho.apply_unitary(gate.qubits, gate_matrix(gate));
}

template <typename State>
void apply_gates(State &state, const std::vector<GateOp> &gates) {
    for (const auto &g : gates) {
        apply_gate(state, g);
    }
}

/// Full-register unitary of a gate sequence (first gate applied first).
inline Matrix circuit_unitary(const std::vector<GateOp> &gates, int n_qubits) {
    const std::size_t dim = dimension_of(n_qubits);
    Matrix u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        Statevector basis = Statevector::basis(n_qubits, col);
        apply_gates(basis, gates);
        for (std::size_t row = 0; row < dim; ++row) {
            u(row, col) = basis[row];
        }
    }
    return u;
}

/// Basis change + CNOT staircase + RZ realization of a PauliRotation:
/// 2(k-1) CNOTs, one RZ, and H or (Sdg, H) singles per X or Y qubit on each
/// side. Identity symbols on listed qubits are dropped. Other gates are
/// returned unchanged.
inline std::vector<GateOp> decompose_pauli_rotation(const GateOp &gate) {
    if (gate.kind != GateKind::PauliRotation) {
        return {gate};
    }
    std::vector<int> active;
    std::vector<char> symbols;
    for (std::size_t j = 0; j < gate.qubits.size(); ++j) {
        if (gate.pauli_axis[j] != 'I') {
            active.push_back(gate.qubits[j]);
            symbols.push_back(gate.pauli_axis[j]);
        }
    }
    std::vector<GateOp> out;
    if (active.empty()) {
        return out; // global phase only
    }
    for (std::size_t j = 0; j < active.size(); ++j) {
        if (symbols[j] == 'X') {
            out.push_back(gates::h(active[j]));
        } else if (symbols[j] == 'Y') {
            out.push_back(gates::sdg(active[j]));
            out.push_back(gates::h(active[j]));
        }
    }
    for (std::size_t j = 0; j + 1 < active.size(); ++j) {
        out.push_back(gates::cnot(active[j], active[j + 1]));
    }
    out.push_back(gates::rz(active.back(), *gate.angle));
    for (std::size_t j = active.size() - 1; j > 0; --j) {
        out.push_back(gates::cnot(active[j - 1], active[j]));
    }
    for (std::size_t j = 0; j < active.size(); ++j) {
        if (symbols[j] == 'X') {
            out.push_back(gates::h(active[j]));
        } else if (symbols[j] == 'Y') {
            out.push_back(gates::h(active[j]));
            out.push_back(gates::s(active[j]));
        }
    }
    return out;
}

inline std::vector<GateOp> decompose_pauli_rotations(const std::vector<GateOp> &gates) {
    std::vector<GateOp> out;
    for (const auto &g : gates) {
        auto part = decompose_pauli_rotation(g);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Number of parallel layers when each gate occupies its qubits for one step.
inline int circuit_depth(const std::vector<GateOp> &gates, int n_qubits) {
    std::vector<int> level(static_cast<std::size_t>(n_qubits), 0);
    int depth = 0;
    for (const auto &g : gates) {
        int start = 0;
        for (int q : g.qubits) {
            start = std::max(start, level.at(static_cast<std::size_t>(q)));
        }
        for (int q : g.qubits) {
            level[static_cast<std::size_t>(q)] = start + 1;
        }
        depth = std::max(depth, start + 1);
    }
    return depth;
}

} // namespace noisy_vqe
