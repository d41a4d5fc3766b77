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

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noisy_vqe {

using Loss = std::function<double(std::span<const double>)>;

class OptimizerError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Termination { MAX_ITER, CONVERGED, BUDGET };

inline std::string_view termination_name(Termination t) {
    switch (t) {
    case Termination::MAX_ITER:
        return "MAX_ITER";
    case Termination::CONVERGED:
        return "CONVERGED";
    case Termination::BUDGET:
        return "BUDGET";
    }
    throw std::invalid_argument("unknown termination");
}

inline Termination termination_from_name(std::string_view name) {
    for (auto t : {Termination::MAX_ITER, Termination::CONVERGED, Termination::BUDGET}) {
        if (termination_name(t) == name) {
            return t;
        }
    }
    throw std::invalid_argument("unknown termination: " + std::string(name));
}

struct TraceRecord {
    int iteration = 0;
    std::vector<double> params;
    double energy = 0.0;
    std::uint64_t cumulative_evals = 0;
    int stage = 0; // SPSAreopt: 1 coarse, 2 fine; Nelder-Mead: 2 after a restart

    bool operator==(const TraceRecord &) const = default;
};

/// Per-iteration history. Each record holds a loss value at its params: a
/// direct evaluation, or for NFT the analytic minimum of the fitted sinusoid.
struct OptimizationTrace {
    std::vector<TraceRecord> records;
    std::vector<double> best_params;
    double best_energy = std::numeric_limits<double>::infinity();
    Termination terminated_by = Termination::MAX_ITER;
    /// Last accepted iterate; may differ from the last record's params (SPSA).
    std::vector<double> final_params;
    std::uint64_t total_evals = 0;

    void add(TraceRecord r) {
        if (!records.empty() && r.cumulative_evals < records.back().cumulative_evals) {
            throw std::logic_error("trace: cumulative_evals must be non-decreasing");
        }
        if (r.energy < best_energy) {
            best_energy = r.energy;
            best_params = r.params;
        }
        total_evals = r.cumulative_evals;
        records.push_back(std::move(r));
    }

    [[nodiscard]] double last_energy() const {
        if (records.empty()) {
            throw std::logic_error("trace: no records");
        }
        return records.back().energy;
    }

    bool operator==(const OptimizationTrace &) const = default;
};

/// Iteration and evaluation limits shared by all optimizers.
struct RunLimits {
    int max_iterations = 100;
    std::optional<std::uint64_t> eval_budget;
    std::uint64_t seed = 0;

    void validate() const {
        if (max_iterations < 1) {
            throw std::invalid_argument("max_iterations must be >= 1");
        }
        if (eval_budget && *eval_budget == 0) {
            throw std::invalid_argument("eval_budget must be >= 1");
        }
    }
};

namespace detail {

// Counts evaluations and rejects non-finite values.
class CountedLoss {
  public:
    CountedLoss(const Loss &loss, const RunLimits &limits) : loss_(loss), budget_(limits.eval_budget) {}

    double operator()(std::span<const double> params) {
        ++evals_;
        const double v = loss_(params);
        if (!std::isfinite(v)) {
            throw OptimizerError("loss returned a non-finite value");
        }
        return v;
    }

    [[nodiscard]] bool can_afford(std::uint64_t n) const { return !budget_ || evals_ + n <= *budget_; }
    [[nodiscard]] std::uint64_t evals() const { return evals_; }

  private:
    const Loss &loss_;
    std::optional<std::uint64_t> budget_;
    std::uint64_t evals_ = 0;
};

inline void check_start(std::span<const double> theta0) {
    if (theta0.empty()) {
        throw std::invalid_argument("optimizer: empty parameter vector");
    }
    for (double x : theta0) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("optimizer: non-finite start parameter");
        }
    }
}

} // namespace detail

} // namespace noisy_vqe
