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

#include <bit>
#include <numbers>
#include <random>
#include <set>

#include "gtest/gtest.h"

#include "noisy_vqe/ansatz.hpp"
#include "noisy_vqe/hamiltonian.hpp"
#include "unit/oracles.hpp"

using namespace noisy_vqe;
using std::numbers::pi;

namespace {

std::vector<double> random_params(int n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto &x : out) {
        x = u(rng);
    }
    return out;
}

// Jordan-Wigner annihilation operator on mode j of 4: Z on modes < j.
oracle::Mat annihilate(int j) {
    const oracle::Mat lower{{0.0, 1.0}, {0.0, 0.0}}; // |0><1|
    oracle::Mat out = oracle::embed(4, {j}, lower);
    for (int k = 0; k < j; ++k) {
        out = oracle::mul(oracle::embed(4, {k}, oracle::pauli('Z')), out);
    }
    return out;
}

oracle::Mat scaled_difference(const oracle::Mat &t, double amplitude) {
    const auto td = oracle::dagger(t);
    oracle::Mat g = oracle::zeros(t.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t c = 0; c < t.size(); ++c) {
            g[r][c] = amplitude * (t[r][c] - td[r][c]);
        }
    }
    return g;
}

// exp(G) by scaling and squaring over a Taylor series.
oracle::Mat expm(oracle::Mat g) {
    const int squarings = 10;
    const double scale = std::ldexp(1.0, -squarings);
    for (auto &row : g) {
        for (auto &x : row) {
            x *= scale;
        }
    }
    oracle::Mat result = oracle::eye(g.size());
    oracle::Mat term = oracle::eye(g.size());
    for (int k = 1; k < 20; ++k) {
        term = oracle::mul(term, g);
        for (auto &row : term) {
            for (auto &x : row) {
                x /= static_cast<double>(k);
            }
        }
        for (std::size_t r = 0; r < g.size(); ++r) {
            for (std::size_t c = 0; c < g.size(); ++c) {
                result[r][c] += term[r][c];
            }
        }
    }
    for (int s = 0; s < squarings; ++s) {
        result = oracle::mul(result, result);
    }
    return result;
}

} // namespace

TEST(ansatz, parameter_counts) {
    EXPECT_EQ(build_ansatz(AnsatzKind::RXYZ, 4).n_params, 12);
    EXPECT_EQ(build_ansatz(AnsatzKind::RY, 4).n_params, 4);
    EXPECT_EQ(build_ansatz(AnsatzKind::UCCSD, 4).n_params, 3);
    EXPECT_EQ(build_ansatz(AnsatzKind::RXYZ, 3).n_params, 9);
}

TEST(ansatz, unsupported_combinations) {
    EXPECT_THROW(build_ansatz(AnsatzKind::UCCSD, 6), std::invalid_argument);
    EXPECT_THROW(build_ansatz(AnsatzKind::RY, 1), std::invalid_argument);
    EXPECT_THROW(hartree_fock_prep(2, 3), std::invalid_argument);
}

TEST(ansatz, hartree_fock_prep) {
    const auto prep = hartree_fock_prep(4, 2);
    ASSERT_EQ(prep.size(), 2u);
    EXPECT_EQ(prep[0], gates::x(0));
    EXPECT_EQ(prep[1], gates::x(1));
    EXPECT_TRUE(hartree_fock_prep(4, 0).empty());
    Statevector psi(4);
    apply_gates(psi, prep);
    EXPECT_NEAR(std::abs(psi[bitstring_to_index("1100")]), 1.0, 1e-15);
}

TEST(ansatz, every_parameter_is_referenced) {
    for (auto kind : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        const auto c = build_ansatz(kind, 4);
        std::set<int> seen;
        for (const auto &slot : c.slots) {
            if (const auto *r = std::get_if<RotationSlot>(&slot)) {
                seen.insert(r->parameter_index);
            }
        }
        EXPECT_EQ(static_cast<int>(seen.size()), c.n_params);
        EXPECT_EQ(*seen.begin(), 0);
        EXPECT_EQ(*seen.rbegin(), c.n_params - 1);
    }
}

TEST(ansatz, zero_binding_leaves_fixed_gates_only) {
    for (auto kind : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        const auto c = build_ansatz(kind, 4);
        const std::vector<double> zero(static_cast<std::size_t>(c.n_params), 0.0);
        std::vector<GateOp> fixed = c.prep;
        for (const auto &slot : c.slots) {
            if (const auto *g = std::get_if<GateOp>(&slot)) {
                fixed.push_back(*g);
            }
        }
        EXPECT_LT(max_abs_diff(circuit_unitary(bind_params(c, zero), 4), circuit_unitary(fixed, 4)), 1e-14);
    }
    const auto uccsd = build_ansatz(AnsatzKind::UCCSD, 4);
    const auto psi = prepare_state(uccsd, std::vector<double>{0.0, 0.0, 0.0});
    EXPECT_NEAR(std::abs(psi[bitstring_to_index("1100")]), 1.0, 1e-14);
}

TEST(ansatz, bind_length_mismatch) {
    const auto c = build_ansatz(AnsatzKind::RXYZ, 4);
    EXPECT_THROW(bind_params(c, std::vector<double>(11, 0.0)), std::invalid_argument);
}

TEST(ansatz, bind_applies_scale) {
    const auto c = build_ansatz(AnsatzKind::UCCSD, 4);
    const auto gates = bind_params(c, std::vector<double>{0.8, 0.4, -0.2});
    ASSERT_EQ(gates.size(), 2u + 8u + 2u + 2u);
    EXPECT_DOUBLE_EQ(*gates[2].angle, 0.1);  // +1/8 of 0.8
    EXPECT_DOUBLE_EQ(*gates[10].angle, 0.2); // +1/2 of 0.4
    EXPECT_DOUBLE_EQ(*gates[13].angle, 0.1); // -1/2 of -0.2
}

TEST(ansatz, ry_pi_gives_basis_state) {
    // RY(pi) = [[0,-1],[1,0]]: |1> -> -|0>, |0> -> |1>, so |1100> -> |0011>
    // with sign (+1)(-1)(-1) = +1 before the chain. The CNOT chain then maps
    // |0011> (q2=1, q3=1) to |0010>.
    const auto c = build_ansatz(AnsatzKind::RY, 4);
    const auto psi = prepare_state(c, std::vector<double>(4, pi));
    int support = 0;
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
        support += std::abs(psi[i]) > 1e-12;
    }
    EXPECT_EQ(support, 1);
    EXPECT_NEAR(std::abs(psi[bitstring_to_index("0010")] - 1.0), 0.0, 1e-12);
}

TEST(ansatz, bound_circuits_are_unitary) {
    std::mt19937_64 rng(1);
    for (auto kind : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        const auto c = build_ansatz(kind, 4);
        const Matrix u = circuit_unitary(bind_params(c, random_params(c.n_params, rng)), 4);
        EXPECT_LT(max_abs_diff(u.adjoint() * u, Matrix::identity(16)), 1e-10);
    }
}

TEST(ansatz, uccsd_conserves_particle_number) {
    std::mt19937_64 rng(2);
    const auto c = build_ansatz(AnsatzKind::UCCSD, 4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto psi = prepare_state(c, random_params(3, rng));
        double leaked = 0.0;
        for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
            if (std::popcount(i) != 2) {
                leaked += std::norm(psi[i]);
            }
        }
        EXPECT_LT(std::sqrt(leaked), 1e-10);
    }
}

TEST(ansatz, uccsd_matches_fermionic_exponentials) {
    // exp(t (T - T^dagger)) with t = theta / 2 for each excitation, double first.
    const auto a0 = annihilate(0);
    const auto a1 = annihilate(1);
    const auto a2 = annihilate(2);
    const auto a3 = annihilate(3);
    const auto single02 = oracle::mul(oracle::dagger(a2), a0);
    const auto single13 = oracle::mul(oracle::dagger(a3), a1);
    const auto dbl = oracle::mul(oracle::mul(oracle::dagger(a2), oracle::dagger(a3)), oracle::mul(a1, a0));

    const auto c = build_ansatz(AnsatzKind::UCCSD, 4);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const auto theta = random_params(3, rng);
        std::vector<oracle::C> v(16, 0.0);
        v[bitstring_to_index("1100")] = 1.0;
        v = oracle::apply(expm(scaled_difference(dbl, theta[0] / 2)), v);
        v = oracle::apply(expm(scaled_difference(single02, theta[1] / 2)), v);
        v = oracle::apply(expm(scaled_difference(single13, theta[2] / 2)), v);
        const auto psi = prepare_state(c, theta);
        for (std::size_t i = 0; i < 16; ++i) {
            ASSERT_NEAR(std::abs(psi[i] - v[i]), 0.0, 1e-10) << "index " << i;
        }
    }
}

TEST(ansatz, energies_are_two_pi_periodic) {
    std::mt19937_64 rng(3);
    const Hamiltonian h = h2_hamiltonian();
    for (auto kind : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        const auto c = build_ansatz(kind, 4);
        const auto theta = random_params(c.n_params, rng);
        const double e0 = expectation_exact(prepare_state(c, theta), h);
        for (int j = 0; j < c.n_params; ++j) {
            auto shifted = theta;
            shifted[static_cast<std::size_t>(j)] += 2 * pi;
            EXPECT_NEAR(expectation_exact(prepare_state(c, shifted), h), e0, 1e-10)
                << ansatz_name(kind) << " parameter " << j;
        }
    }
}

TEST(ansatz, gate_counts_follow_staircase) {
    const auto rxyz = build_ansatz(AnsatzKind::RXYZ, 4);
    const auto counts = count_gates(bind_params(rxyz, std::vector<double>(12, 0.1)), 4);
    EXPECT_EQ(counts.single_qubit, 2 + 12);
    EXPECT_EQ(counts.two_qubit, 3);

    // Each 4-qubit string: 6 CNOTs, 1 RZ, basis singles (1 per X, 2 per Y) twice.
    // Double: 8 strings with 6 CNOTs; singles: 4 strings of 3 qubits with 4 CNOTs.
    const auto uccsd = build_ansatz(AnsatzKind::UCCSD, 4);
    const auto uc = count_gates(bind_params(uccsd, std::vector<double>{0.1, 0.2, 0.3}), 4);
    EXPECT_EQ(uc.two_qubit, 8 * 6 + 4 * 4);
    EXPECT_GT(uc.depth, 0);
}
