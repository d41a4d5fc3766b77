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

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "noisy_vqe/core/gates.hpp"

namespace noisy_vqe {

enum class AnsatzKind { RXYZ, RY, UCCSD };

inline std::string_view ansatz_name(AnsatzKind kind) {
    switch (kind) {
    case AnsatzKind::RXYZ:
        return "RXYZ";
    case AnsatzKind::RY:
        return "RY";
    case AnsatzKind::UCCSD:
        return "UCCSD";
    }
    throw std::invalid_argument("unknown ansatz kind");
}

inline AnsatzKind ansatz_kind_from_name(std::string_view name) {
    for (auto k : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        if (ansatz_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown ansatz: " + std::string(name));
}

/// A rotation whose angle is `scale * params[parameter_index]`.
struct RotationSlot {
    GateKind kind = GateKind::RY;
    std::vector<int> qubits;
    std::string pauli_axis; // PauliRotation only
    int parameter_index = 0;
    double scale = 1.0;
};

using CircuitSlot = std::variant<GateOp, RotationSlot>;

struct ParametrizedCircuit {
    AnsatzKind kind = AnsatzKind::RXYZ;
    int n_qubits = 0;
    std::vector<GateOp> prep;
    std::vector<CircuitSlot> slots;
    int n_params = 0;
};

/// X on qubits 0..n_electrons-1.
inline std::vector<GateOp> hartree_fock_prep(int n_qubits, int n_electrons) {
    if (n_electrons < 0 || n_electrons > n_qubits) {
        throw std::invalid_argument("hartree_fock_prep: need 0 <= n_electrons <= n_qubits");
    }
    std::vector<GateOp> out;
    for (int q = 0; q < n_electrons; ++q) {
        out.push_back(gates::x(q));
    }
    return out;
}

namespace detail {

struct ExcitationString {
    std::string_view axis;
    double scale;
};

// exp(t (T - T^dagger)) with t = theta / 2 under Jordan-Wigner; each string is
// exp(-i (scale * theta) / 2 * P). All strings of one excitation commute.
inline constexpr ExcitationString kSingleExcitation[] = {{"XZY", 0.5}, {"YZX", -0.5}};
inline constexpr ExcitationString kDoubleExcitation[] = {
    {"XXXY", 0.125}, {"XXYX", 0.125},  {"XYXX", -0.125}, {"XYYY", 0.125},
    {"YXXX", -0.125}, {"YXYY", 0.125}, {"YYXY", -0.125}, {"YYYX", -0.125},
};

inline void append_cnot_chain(std::vector<CircuitSlot> &slots, int n_qubits) {
    for (int q = 0; q + 1 < n_qubits; ++q) {
        slots.emplace_back(gates::cnot(q, q + 1));
    }
}

} // namespace detail

/// Builds one of the three ansatzes over the Hartree-Fock reference.
///
/// RXYZ: RX, RY, RZ on every qubit, then CNOT(q, q+1) chain; 3n parameters.
/// RY: RY on every qubit, then the same chain; n parameters.
/// UCCSD (4 qubits): the double excitation (0,1 -> 2,3) as parameter 0, then
/// singles (0 -> 2) and (1 -> 3) as parameters 1 and 2. Applying the double
/// first keeps every parameter 2pi-periodic in the energy.
inline ParametrizedCircuit build_ansatz(AnsatzKind kind, int n_qubits, int n_electrons = 2) {
    ParametrizedCircuit c;
    c.kind = kind;
    c.n_qubits = n_qubits;
    switch (kind) {
    case AnsatzKind::RXYZ:
    case AnsatzKind::RY: {
        if (n_qubits < 2 || n_qubits > kMaxQubits) {
            throw std::invalid_argument(std::string(ansatz_name(kind)) + " needs 2.." + std::to_string(kMaxQubits) +
                                        " qubits");
        }
        c.prep = hartree_fock_prep(n_qubits, n_electrons);
        int p = 0;
        for (int q = 0; q < n_qubits; ++q) {
            if (kind == AnsatzKind::RXYZ) {
                c.slots.emplace_back(RotationSlot{GateKind::RX, {q}, {}, p++, 1.0});
                c.slots.emplace_back(RotationSlot{GateKind::RY, {q}, {}, p++, 1.0});
                c.slots.emplace_back(RotationSlot{GateKind::RZ, {q}, {}, p++, 1.0});
            } else {
                c.slots.emplace_back(RotationSlot{GateKind::RY, {q}, {}, p++, 1.0});
            }
        }
        detail::append_cnot_chain(c.slots, n_qubits);
        c.n_params = p;
        break;
    }
    case AnsatzKind::UCCSD: {
        if (n_qubits != 4 || n_electrons != 2) {
            throw std::invalid_argument("UCCSD is only defined for the 4-qubit, 2-electron H2 instance");
        }
        c.prep = hartree_fock_prep(n_qubits, n_electrons);
        for (const auto &s : detail::kDoubleExcitation) {
            c.slots.emplace_back(RotationSlot{GateKind::PauliRotation, {0, 1, 2, 3}, std::string(s.axis), 0, s.scale});
        }
        for (const auto &s : detail::kSingleExcitation) {
            c.slots.emplace_back(RotationSlot{GateKind::PauliRotation, {0, 1, 2}, std::string(s.axis), 1, s.scale});
        }
        for (const auto &s : detail::kSingleExcitation) {
            c.slots.emplace_back(RotationSlot{GateKind::PauliRotation, {1, 2, 3}, std::string(s.axis), 2, s.scale});
        }
        c.n_params = 3;
        break;
    }
    }
    return c;
}

/// Prep gates followed by the template with every angle bound.
inline std::vector<GateOp> bind_params(const ParametrizedCircuit &circuit, std::span<const double> params) {
    if (params.size() != static_cast<std::size_t>(circuit.n_params)) {
        throw std::invalid_argument("bind: expected " + std::to_string(circuit.n_params) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    std::vector<GateOp> out = circuit.prep;
    out.reserve(out.size() + circuit.slots.size());
    for (const auto &slot : circuit.slots) {
        if (const auto *fixed = std::get_if<GateOp>(&slot)) {
            out.push_back(*fixed);
        } else {
            const auto &rot = std::get<RotationSlot>(slot);
            const double angle = rot.scale * params[static_cast<std::size_t>(rot.parameter_index)];
            out.push_back(GateOp{rot.kind, rot.qubits, angle, rot.pauli_axis});
        }
    }
    return out;
}

/// Statevector produced by the bound circuit on |0...0>.
inline Statevector prepare_state(const ParametrizedCircuit &circuit, std::span<const double> params) {
    Statevector psi(circuit.n_qubits);
    apply_gates(psi, bind_params(circuit, params));
    return psi;
}

struct GateCounts {
    int single_qubit = 0;
    int two_qubit = 0;
    int depth = 0;
};

/// Counts after expanding Pauli rotations into their staircase form.
inline GateCounts count_gates(const std::vector<GateOp> &gates, int n_qubits) {
    const auto expanded = decompose_pauli_rotations(gates);
    GateCounts c;
    for (const auto &g : expanded) {
        (g.arity() == 1 ? c.single_qubit : c.two_qubit) += 1;
    }
    c.depth = circuit_depth(expanded, n_qubits);
    return c;
}

} // namespace noisy_vqe
