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
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_vqe/ansatz.hpp"
#include "noisy_vqe/core/sampling.hpp"
#include "noisy_vqe/hamiltonian.hpp"
#include "noisy_vqe/noise.hpp"

namespace noisy_vqe {

enum class BackendMode { EXACT, SHOTS, NOISY };

inline std::string_view backend_mode_name(BackendMode m) {
    switch (m) {
    case BackendMode::EXACT:
        return "EXACT";
    case BackendMode::SHOTS:
        return "SHOTS";
    case BackendMode::NOISY:
        return "NOISY";
    }
    throw std::invalid_argument("unknown backend mode");
}

inline BackendMode backend_mode_from_name(std::string_view name) {
    for (auto m : {BackendMode::EXACT, BackendMode::SHOTS, BackendMode::NOISY}) {
        if (backend_mode_name(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown backend mode: " + std::string(name));
}

inline constexpr std::uint64_t kDefaultShots = 1024;

struct BackendConfig {
    BackendMode mode = BackendMode::EXACT;
    std::uint64_t shots = kDefaultShots;
    NoiseModel noise;
    NoiseGrouping grouping = NoiseGrouping::FusedSingleQubitRuns;
    std::uint64_t rng_seed = 0;

    static BackendConfig exact() { return {}; }

    static BackendConfig sampled(std::uint64_t shots, std::uint64_t seed) {
        BackendConfig b;
        b.mode = BackendMode::SHOTS;
        b.shots = shots;
        b.rng_seed = seed;
        return b;
    }

    static BackendConfig noisy(const NoiseModel &noise, std::uint64_t shots, std::uint64_t seed) {
        BackendConfig b;
        b.mode = BackendMode::NOISY;
        b.noise = noise;
        b.shots = shots;
        b.rng_seed = seed;
        return b;
    }

    void validate() const {
        if (mode != BackendMode::EXACT && shots == 0) {
            throw std::invalid_argument("sampling backends need shots >= 1");
        }
        if (mode != BackendMode::NOISY && !noise.is_noiseless()) {
            throw std::invalid_argument("a noise model is only valid with the NOISY backend");
        }
        noise.validate();
    }
};

struct TermEstimate {
    PauliTerm term;
    double estimate = 0.0; // <P>, without the coefficient
};

struct EnergyEstimate {
    double value = 0.0;
    std::vector<TermEstimate> per_term;
    std::uint64_t shots_used = 0;
};

/// Gates rotating the term's eigenbasis onto the computational basis:
/// H for X, Sdg then H for Y, nothing for Z and I.
inline std::vector<GateOp> basis_change(const PauliTerm &term) {
    std::vector<GateOp> out;
    for (int q = 0; q < term.n_qubits(); ++q) {
        switch (term.paulis[static_cast<std::size_t>(q)]) {
        case 'X':
            out.push_back(gates::h(q));
            break;
        case 'Y':
            out.push_back(gates::sdg(q));
            out.push_back(gates::h(q));
            break;
        default:
            break;
        }
    }
    return out;
}

inline std::uint64_t support_mask(const PauliTerm &term) {
    std::uint64_t m = 0;
    for (int q : term.support()) {
        m |= std::uint64_t{1} << q;
    }
    return m;
}

/// (-1)^(number of set bits on the term's support); basis-index form.
inline int outcome_eigenvalue(const PauliTerm &term, std::uint64_t outcome_index) {
    return (std::popcount(outcome_index & support_mask(term)) & 1) ? -1 : 1;
}

/// Bitstring form, qubit-0-first.
inline int outcome_eigenvalue(const PauliTerm &term, const std::string &bits) {
    if (bits.size() != term.paulis.size()) {
        throw std::invalid_argument("outcome_eigenvalue: bitstring length differs from term length");
    }
    return outcome_eigenvalue(term, bitstring_to_index(bits));
}

/// Terms sharing a key are measured after the same basis-change circuit.
inline std::string measurement_basis_key(const PauliTerm &term) {
    std::string key = term.paulis;
    for (char &c : key) {
        if (c == 'I') {
            c = 'Z';
        }
    }
    return key;
}

/// Energy evaluation for one optimization run. Owns the evaluation counter that
/// feeds per-term seeds: seed = hash64(rng_seed, term_index, evaluation_counter).
class EnergyEstimator {
  public:
    EnergyEstimator(ParametrizedCircuit circuit, Hamiltonian h, BackendConfig backend)
        : circuit_(std::move(circuit)), h_(std::move(h)), backend_(backend) {
        backend_.validate();
        if (circuit_.n_qubits != h_.n_qubits()) {
            throw std::invalid_argument("EnergyEstimator: circuit and Hamiltonian sizes differ");
        }
    }

    [[nodiscard]] const ParametrizedCircuit &circuit() const { return circuit_; }
    [[nodiscard]] const Hamiltonian &hamiltonian() const { return h_; }
    [[nodiscard]] const BackendConfig &backend() const { return backend_; }
    [[nodiscard]] std::uint64_t evaluations() const { return counter_; }

    /// Estimates at an explicit counter value, without touching the run's counter.
    [[nodiscard]] EnergyEstimate estimate_at(std::span<const double> params, std::uint64_t evaluation_counter) const {
        const auto gates = bind_params(circuit_, params);
        switch (backend_.mode) {
        case BackendMode::EXACT:
            return estimate_exact(gates);
        case BackendMode::SHOTS:
        case BackendMode::NOISY:
            return estimate_sampled(gates, evaluation_counter);
        }
        throw std::invalid_argument("EnergyEstimator: invalid backend mode");
    }

    EnergyEstimate estimate(std::span<const double> params) { return estimate_at(params, counter_++); }

    double operator()(std::span<const double> params) { return estimate(params).value; }

    /// Outcome distribution measured for `term` (after basis change, gate noise
    /// and readout flips), without sampling.
    [[nodiscard]] std::vector<double> term_distribution(std::span<const double> params, const PauliTerm &term) const {
        const auto gates = bind_params(circuit_, params);
        if (backend_.mode == BackendMode::NOISY) {
            const auto prefix = NoisyPrefix(gates, backend_, circuit_.n_qubits);
            return prefix.distribution(term);
        }
        Statevector psi(circuit_.n_qubits);
        apply_gates(psi, gates);
        apply_gates(psi, basis_change(term));
        return probabilities(psi);
    }

    /// Infinite-shot limit of `estimate` under the backend's noise; equals the
    /// exact energy for EXACT and SHOTS.
    [[nodiscard]] double mean_energy(std::span<const double> params) const {
        const auto gates = bind_params(circuit_, params);
        if (backend_.mode != BackendMode::NOISY) {
            return estimate_exact(gates).value;
        }
        const NoisyPrefix prefix(gates, backend_, circuit_.n_qubits);
        std::map<std::string, std::vector<double>> distributions;
        double e = 0.0;
        for (const auto &t : h_.terms()) {
            if (t.is_identity()) {
                e += t.coefficient;
                continue;
            }
            const std::string key = measurement_basis_key(t);
            auto it = distributions.find(key);
            if (it == distributions.end()) {
                it = distributions.emplace(key, prefix.distribution(t)).first;
            }
            const std::uint64_t mask = support_mask(t);
            double expectation = 0.0;
            for (std::size_t x = 0; x < it->second.size(); ++x) {
                expectation += (std::popcount(x & mask) & 1) ? -it->second[x] : it->second[x];
            }
            e += t.coefficient * expectation;
        }
        return e;
    }

  private:
    // Density-matrix state of the bound circuit with its noise, before the
    // basis change; pending fused noise stays in the scheduler.
    struct NoisyPrefix {
        NoisyPrefix(const std::vector<GateOp> &gates, const BackendConfig &backend, int n_qubits)
            : scheduler(backend.noise, n_qubits, backend.grouping), rho(n_qubits), p_readout(backend.noise.p_readout) {
            std::vector<NoisyOp> ops;
            for (const auto &g : gates) {
                scheduler.append(g, ops);
            }
            run_noisy_ops(rho, ops);
        }

        [[nodiscard]] std::vector<double> distribution(const PauliTerm &term) const {
            NoiseScheduler tail = scheduler;
            std::vector<NoisyOp> ops;
            for (const auto &g : basis_change(term)) {
                tail.append(g, ops);
            }
            tail.finish(ops);
            DensityMatrix local = rho;
            run_noisy_ops(local, ops);
            return with_readout_flips(probabilities(local), local.n_qubits(), p_readout);
        }

        NoiseScheduler scheduler;
        DensityMatrix rho;
        double p_readout;
    };

    [[nodiscard]] EnergyEstimate estimate_exact(const std::vector<GateOp> &gates) const {
        Statevector psi(circuit_.n_qubits);
        apply_gates(psi, gates);
        EnergyEstimate out;
        for (const auto &t : h_.terms()) {
            const double e = t.is_identity() ? 1.0 : pauli_expectation(psi, t.paulis);
            out.per_term.push_back({t, e});
            out.value += t.coefficient * e;
        }
        return out;
    }

    [[nodiscard]] EnergyEstimate estimate_sampled(const std::vector<GateOp> &gates,
                                                  std::uint64_t evaluation_counter) const {
        std::map<std::string, std::vector<double>> distributions;
        std::optional<NoisyPrefix> noisy;
        std::optional<Statevector> psi;
        if (backend_.mode == BackendMode::NOISY) {
            noisy.emplace(gates, backend_, circuit_.n_qubits);
        } else {
            psi.emplace(circuit_.n_qubits);
            apply_gates(*psi, gates);
        }

        EnergyEstimate out;
        const auto &terms = h_.terms();
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto &t = terms[k];
            if (t.is_identity()) {
                out.per_term.push_back({t, 1.0});
                out.value += t.coefficient;
                continue;
            }
            const std::string key = measurement_basis_key(t);
            auto it = distributions.find(key);
            if (it == distributions.end()) {
                std::vector<double> dist;
                if (noisy) {
                    dist = noisy->distribution(t);
                } else {
                    Statevector rotated = *psi;
                    apply_gates(rotated, basis_change(t));
                    dist = probabilities(rotated);
                }
                it = distributions.emplace(key, std::move(dist)).first;
            }
            Rng rng(hash64(backend_.rng_seed, k, evaluation_counter));
            const auto counts = sample_outcomes(it->second, backend_.shots, rng);
            const std::uint64_t mask = support_mask(t);
            std::int64_t signed_sum = 0;
            for (std::size_t outcome = 0; outcome < counts.size(); ++outcome) {
                const auto c = static_cast<std::int64_t>(counts[outcome]);
                signed_sum += (std::popcount(outcome & mask) & 1) ? -c : c;
            }
            const double e = static_cast<double>(signed_sum) / static_cast<double>(backend_.shots);
            out.per_term.push_back({t, e});
            out.value += t.coefficient * e;
            out.shots_used += backend_.shots;
        }
        return out;
    }

    ParametrizedCircuit circuit_;
    Hamiltonian h_;
    BackendConfig backend_;
    std::uint64_t counter_ = 0;
};

/// Single evaluation with the counter supplied by the caller's run context.
inline EnergyEstimate estimate_energy(const ParametrizedCircuit &circuit, std::span<const double> params,
                                      const Hamiltonian &h, const BackendConfig &backend,
                                      std::uint64_t evaluation_counter = 0) {
    return EnergyEstimator(circuit, h, backend).estimate_at(params, evaluation_counter);
}

} // namespace noisy_vqe
