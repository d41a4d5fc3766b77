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
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisy_vqe/core/state.hpp"

namespace noisy_vqe {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed derivation used for every per-term, per-cell and per-run stream:
/// h = splitmix64(splitmix64(splitmix64(a) ^ b) ^ c).
inline std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

/// Born probabilities of the computational basis.
inline std::vector<double> probabilities(const Statevector &state) {
    std::vector<double> p(state.dimension());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(state[i]);
    }
    return p;
}

inline std::vector<double> probabilities(const DensityMatrix &rho) {
    std::vector<double> p(rho.dimension());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::max(0.0, rho(i, i).real());
    }
    return p;
}

/// Outcome distribution after every bit is flipped independently with
/// probability `p_flip`. Identical in law to sampling first and then flipping
/// each measured bit.
inline std::vector<double> with_readout_flips(std::vector<double> probs, int n_qubits, double p_flip) {
    if (!(p_flip >= 0.0 && p_flip <= 1.0)) {
        throw std::invalid_argument("readout flip probability must lie in [0, 1]");
    }
    if (p_flip == 0.0) {
        return probs;
    }
    for (int q = 0; q < n_qubits; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (i & bit) {
                continue;
            }
            const double p0 = probs[i];
            const double p1 = probs[i | bit];
            probs[i] = (1.0 - p_flip) * p0 + p_flip * p1;
            probs[i | bit] = p_flip * p0 + (1.0 - p_flip) * p1;
        }
    }
    return probs;
}

/// Multinomial draw of `shots` outcomes, by sequential conditional binomials.
inline std::vector<std::uint64_t> sample_outcomes(std::span<const double> probs, std::uint64_t shots, Rng &rng) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("probabilities must be non-negative");
        }
        total += p;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("probabilities sum to zero");
    }
    std::vector<std::uint64_t> counts(probs.size(), 0);
    std::uint64_t remaining = shots;
    double mass_left = total;
    for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
        if (i + 1 == probs.size() || probs[i] >= mass_left || mass_left <= 0.0) {
            counts[i] = remaining;
            remaining = 0;
            break;
        }
        const double q = std::clamp(probs[i] / mass_left, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> draw(remaining, q);
        counts[i] = draw(rng);
        remaining -= counts[i];
        mass_left -= probs[i];
    }
    return counts;
}

/// Reference shot-by-shot sampler with per-bit readout flips. Slower than
/// `with_readout_flips` + `sample_outcomes`, kept as the literal model.
inline std::vector<std::uint64_t> sample_outcomes_flipping_bits(std::span<const double> probs, int n_qubits,
                                                                std::uint64_t shots, double p_flip, Rng &rng) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    std::discrete_distribution<std::size_t> outcome(probs.begin(), probs.end());
    std::bernoulli_distribution flip(p_flip);
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        std::size_t index = outcome(rng);
        for (int q = 0; q < n_qubits; ++q) {
            if (flip(rng)) {
                index ^= std::size_t{1} << q;
            }
        }
        ++counts[index];
    }
    return counts;
}

using CountMap = std::map<std::string, std::uint64_t>;

inline CountMap to_count_map(std::span<const std::uint64_t> counts, int n_qubits) {
    CountMap out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            out[index_to_bitstring(i, n_qubits)] = counts[i];
        }
    }
    return out;
}

template <typename State>
CountMap sample_counts(const State &state, std::uint64_t shots, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    const auto probs = probabilities(state);
    return to_count_map(sample_outcomes(probs, shots, rng), state.n_qubits());
}

} // namespace noisy_vqe
