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
#include <deque>
#include <random>
#include <vector>

#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

/// Gain sequences a_k = a / (A + k + 1)^alpha and c_k = c / (k + 1)^gamma.
struct SpsaGains {
    double a = 0.15;
    double c = 0.1;
    double A = 0.0;
    double alpha = 0.602;
    double gamma = 0.101;

    static SpsaGains coarse() { return {2.0, 0.6, 0.0, 0.602, 0.101}; }
    static SpsaGains fine() { return {0.15, 0.1, 0.0, 0.602, 0.101}; }

    [[nodiscard]] double a_k(int k) const { return a / std::pow(A + k + 1, alpha); }
    [[nodiscard]] double c_k(int k) const { return c / std::pow(k + 1, gamma); }

    void validate() const {
        if (!(a > 0) || !(c > 0) || !(A >= 0) || !(alpha > 0) || !(gamma > 0)) {
            throw std::invalid_argument("spsa: gains must be positive (A >= 0)");
        }
    }

    bool operator==(const SpsaGains &) const = default;
};

struct SpsaReoptOptions {
    SpsaGains coarse = SpsaGains::coarse();
    SpsaGains fine = SpsaGains::fine();
    int convergence_window = 10;
    double convergence_tol = 2e-3;
    int max_coarse_iterations = 100;

    void validate() const {
        coarse.validate();
        fine.validate();
        if (convergence_window < 1 || !(convergence_tol > 0) || max_coarse_iterations < 1) {
            throw std::invalid_argument("spsa_reopt: window, tolerance and coarse limit must be positive");
        }
    }
};

/// Rademacher direction from the top bit of each draw.
inline std::vector<double> rademacher(std::size_t n, std::mt19937_64 &rng) {
    std::vector<double> d(n);
    for (auto &x : d) {
        x = (rng() >> 63) ? 1.0 : -1.0;
    }
    return d;
}

namespace detail {

struct SpsaProbe {
    double l_plus = 0.0;
    double l_minus = 0.0;
    std::vector<double> lower_params; // the better of the two probes
    double lower = 0.0;
};

// One SPSA update of theta at gain index k; two evaluations.
inline SpsaProbe spsa_step(CountedLoss &f, std::vector<double> &theta, const SpsaGains &g, int k,
                           std::mt19937_64 &rng) {
    const double ck = g.c_k(k);
    const double ak = g.a_k(k);
    const auto delta = rademacher(theta.size(), rng);
    std::vector<double> plus = theta;
    std::vector<double> minus = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        plus[i] += ck * delta[i];
        minus[i] -= ck * delta[i];
    }
    SpsaProbe p;
    p.l_plus = f(plus);
    p.l_minus = f(minus);
    const double diff = (p.l_plus - p.l_minus) / (2 * ck);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] -= ak * diff / delta[i];
    }
    if (p.l_plus <= p.l_minus) {
        p.lower_params = std::move(plus);
        p.lower = p.l_plus;
    } else {
        p.lower_params = std::move(minus);
        p.lower = p.l_minus;
    }
    return p;
}

} // namespace detail

/// Simultaneous-perturbation stochastic approximation. Each record holds the
/// lower of the iteration's two probe evaluations.
inline OptimizationTrace spsa_minimize(const Loss &loss, std::vector<double> theta, const SpsaGains &gains,
                                       const RunLimits &limits) {
    detail::check_start(theta);
    gains.validate();
    limits.validate();
    detail::CountedLoss f(loss, limits);
    std::mt19937_64 rng(limits.seed);
    OptimizationTrace trace;
    trace.terminated_by = Termination::MAX_ITER;
    for (int k = 0; k < limits.max_iterations; ++k) {
        if (!f.can_afford(2)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        auto p = detail::spsa_step(f, theta, gains, k, rng);
        trace.add({k + 1, std::move(p.lower_params), p.lower, f.evals(), 0});
    }
    trace.final_params = theta;
    return trace;
}

/// Two-stage SPSA: coarse gains until the moving average of the probe means
/// settles (or the coarse limit is hit), then fine gains from the best
/// stage-1 point. Records carry stage 1 or 2.
inline OptimizationTrace spsa_reopt_minimize(const Loss &loss, std::vector<double> theta,
                                             const SpsaReoptOptions &opt, const RunLimits &limits) {
    detail::check_start(theta);
    opt.validate();
    limits.validate();
    detail::CountedLoss f(loss, limits);
    std::mt19937_64 rng(limits.seed);
    OptimizationTrace trace;
    trace.terminated_by = Termination::MAX_ITER;

    const auto w = static_cast<std::size_t>(opt.convergence_window);
    std::deque<double> history;
    int stage = 1;
    int k_stage = 0;
    double stage1_best = std::numeric_limits<double>::infinity();
    std::vector<double> stage1_best_params = theta;
    for (int it = 0; it < limits.max_iterations; ++it) {
        if (!f.can_afford(2)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        const SpsaGains &g = stage == 1 ? opt.coarse : opt.fine;
        auto p = detail::spsa_step(f, theta, g, k_stage, rng);
        ++k_stage;
        if (stage == 1 && p.lower < stage1_best) {
            stage1_best = p.lower;
            stage1_best_params = p.lower_params;
        }
        trace.add({it + 1, std::move(p.lower_params), p.lower, f.evals(), stage});
        if (stage != 1) {
            continue;
        }
        history.push_back(0.5 * (p.l_plus + p.l_minus));
        if (history.size() > 2 * w) {
            history.pop_front();
        }
        bool settled = false;
        if (history.size() == 2 * w) {
            double previous = 0.0;
            double latest = 0.0;
            for (std::size_t i = 0; i < w; ++i) {
                previous += history[i];
                latest += history[w + i];
            }
            settled = std::abs(latest - previous) / static_cast<double>(w) < opt.convergence_tol;
        }
        if (settled || k_stage >= opt.max_coarse_iterations) {
            stage = 2;
            k_stage = 0;
            theta = stage1_best_params;
        }
    }
    trace.final_params = theta;
    return trace;
}

} // namespace noisy_vqe
