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

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "noisy_vqe/estimator.hpp"
#include "noisy_vqe/optimize.hpp"

namespace noisy_vqe {

/// Largest single-frequency residual tolerated before NFT switches to the
/// two-harmonic model.
inline constexpr double kSinusoidPremiseTolerance = 1e-6;

struct VqeResult {
    OptimizationTrace trace;
    std::vector<double> theta0;
    std::vector<double> final_params;
    double final_energy = 0.0; // fresh estimate at final_params
    double best_seen_energy = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t backend_seed = 0;
    std::uint64_t optimizer_seed = 0;
    GateCounts gate_counts;
    NoiseCounts channel_counts;
    NftModel nft_model = NftModel::SINUSOID;
};

/// Uniform angles in [-pi, pi) from a dedicated stream.
inline std::vector<double> random_angles(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (auto &x : out) {
        // 53 random bits mapped to [0, 1).
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = -std::numbers::pi + 2 * std::numbers::pi * u;
    }
    return out;
}

/// NFT model for an ansatz: SINUSOID unless the noiseless loss around theta0
/// departs from a single frequency in some coordinate.
inline NftModel choose_nft_model(const ParametrizedCircuit &circuit, const Hamiltonian &h,
                                 std::span<const double> theta0) {
    const EnergyEstimator exact(circuit, h, BackendConfig::exact());
    const Loss loss = [&exact](std::span<const double> p) { return exact.mean_energy(p); };
    for (std::size_t j = 0; j < theta0.size(); ++j) {
        if (sinusoid_residual(loss, theta0, j) > kSinusoidPremiseTolerance) {
            return NftModel::TWO_HARMONIC;
        }
    }
    return NftModel::SINUSOID;
}

/// One optimization with the estimator as loss. The run seed derives the
/// estimator seed hash64(seed, 1, 0) and the optimizer seed hash64(seed, 2, 0).
inline VqeResult run_vqe(AnsatzKind kind, OptimizerConfig optimizer, BackendConfig backend,
                         std::vector<double> theta0, std::uint64_t seed, const Hamiltonian &h = h2_hamiltonian()) {
    const auto circuit = build_ansatz(kind, h.n_qubits());
    if (theta0.size() != static_cast<std::size_t>(circuit.n_params)) {
        throw std::invalid_argument("run_vqe: theta0 has " + std::to_string(theta0.size()) + " entries, ansatz needs " +
                                    std::to_string(circuit.n_params));
    }
    VqeResult out;
    out.seed = seed;
    out.backend_seed = hash64(seed, 1, 0);
    out.optimizer_seed = hash64(seed, 2, 0);
    backend.rng_seed = out.backend_seed;
    optimizer.limits.seed = out.optimizer_seed;
    if (optimizer.kind == OptimizerKind::NFT && optimizer.nft.model == NftModel::SINUSOID) {
        optimizer.nft.model = choose_nft_model(circuit, h, theta0);
    }
    out.nft_model = optimizer.nft.model;

    const auto bound = bind_params(circuit, theta0);
    out.gate_counts = count_gates(bound, circuit.n_qubits);
    out.channel_counts = count_noisy_ops(attach_noise(decompose_pauli_rotations(bound), backend.noise,
                                                      circuit.n_qubits, backend.grouping));

    EnergyEstimator estimator(circuit, h, backend);
    const Loss loss = [&estimator](std::span<const double> p) { return estimator(p); };
    out.theta0 = theta0;
    out.trace = minimize(optimizer, loss, std::move(theta0));
    out.final_params = out.trace.final_params;
    out.final_energy = estimator(out.final_params);
    out.best_seen_energy = out.trace.best_energy;
    return out;
}

} // namespace noisy_vqe
