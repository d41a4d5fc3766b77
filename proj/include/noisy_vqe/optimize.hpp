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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noisy_vqe/optimize/adam.hpp"
#include "noisy_vqe/optimize/bayesian.hpp"
#include "noisy_vqe/optimize/nelder_mead.hpp"
#include "noisy_vqe/optimize/nft.hpp"
#include "noisy_vqe/optimize/spsa.hpp"
#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

enum class OptimizerKind { NFT, SPSA, SPSA_REOPT, NELDER_MEAD, ADAM, BAYESIAN };

inline constexpr std::array<std::pair<OptimizerKind, std::string_view>, 6> kOptimizerNames{{
    {OptimizerKind::NFT, "NFT"},
    {OptimizerKind::SPSA, "SPSA"},
    {OptimizerKind::SPSA_REOPT, "SPSA_REOPT"},
    {OptimizerKind::NELDER_MEAD, "NELDER_MEAD"},
    {OptimizerKind::ADAM, "ADAM"},
    {OptimizerKind::BAYESIAN, "BAYESIAN"},
}};

inline std::string_view optimizer_name(OptimizerKind k) {
    for (const auto &[kind, name] : kOptimizerNames) {
        if (kind == k) {
            return name;
        }
    }
    throw std::invalid_argument("unknown optimizer kind");
}

inline OptimizerKind optimizer_kind_from_name(std::string_view name) {
    for (const auto &[kind, n] : kOptimizerNames) {
        if (n == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown optimizer: " + std::string(name));
}

inline std::string_view nft_ordering_name(NftOrdering o) {
    return o == NftOrdering::ORDERED ? "ORDERED" : "RANDOM_NO_REPLACEMENT";
}

inline NftOrdering nft_ordering_from_name(std::string_view name) {
    if (name == "ORDERED") {
        return NftOrdering::ORDERED;
    }
    if (name == "RANDOM_NO_REPLACEMENT") {
        return NftOrdering::RANDOM_NO_REPLACEMENT;
    }
    throw std::invalid_argument("unknown NFT ordering: " + std::string(name));
}

inline std::string_view nft_model_name(NftModel m) { return m == NftModel::SINUSOID ? "SINUSOID" : "TWO_HARMONIC"; }

inline NftModel nft_model_from_name(std::string_view name) {
    if (name == "SINUSOID") {
        return NftModel::SINUSOID;
    }
    if (name == "TWO_HARMONIC") {
        return NftModel::TWO_HARMONIC;
    }
    throw std::invalid_argument("unknown NFT model: " + std::string(name));
}

/// Selected optimizer plus the options of every kind; only the selected
/// kind's options are used.
struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::NFT;
    RunLimits limits;
    NftOptions nft;
    SpsaGains spsa = SpsaGains::fine();
    SpsaReoptOptions spsa_reopt;
    NelderMeadOptions nelder_mead;
    AdamOptions adam;
    BayesianOptions bayesian;

    void validate() const {
        limits.validate();
        switch (kind) {
        case OptimizerKind::NFT:
            nft.validate();
            break;
        case OptimizerKind::SPSA:
            spsa.validate();
            break;
        case OptimizerKind::SPSA_REOPT:
            spsa_reopt.validate();
            break;
        case OptimizerKind::NELDER_MEAD:
            nelder_mead.validate();
            break;
        case OptimizerKind::ADAM:
            adam.validate();
            break;
        case OptimizerKind::BAYESIAN:
            bayesian.validate();
            break;
        }
    }
};

/// Runs the configured optimizer. Bayesian optimization uses theta0 only for
/// the dimension.
inline OptimizationTrace minimize(const OptimizerConfig &cfg, const Loss &loss, std::vector<double> theta0) {
    cfg.validate();
    switch (cfg.kind) {
    case OptimizerKind::NFT:
        return nft_minimize(loss, std::move(theta0), cfg.nft, cfg.limits);
    case OptimizerKind::SPSA:
        return spsa_minimize(loss, std::move(theta0), cfg.spsa, cfg.limits);
    case OptimizerKind::SPSA_REOPT:
        return spsa_reopt_minimize(loss, std::move(theta0), cfg.spsa_reopt, cfg.limits);
    case OptimizerKind::NELDER_MEAD:
        return nelder_mead_minimize(loss, std::move(theta0), cfg.nelder_mead, cfg.limits);
    case OptimizerKind::ADAM:
        return adam_minimize(loss, std::move(theta0), cfg.adam, cfg.limits);
    case OptimizerKind::BAYESIAN:
        return bayesian_minimize(loss, uniform_bounds(theta0.size(), cfg.bayesian), cfg.bayesian, cfg.limits);
    }
    throw std::invalid_argument("minimize: unknown optimizer kind");
}

} // namespace noisy_vqe
