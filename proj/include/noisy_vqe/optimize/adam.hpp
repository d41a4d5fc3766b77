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
#include <numbers>
#include <string_view>
#include <vector>

#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

enum class GradientMode { PARAMETER_SHIFT, CENTRAL_DIFF };

inline std::string_view gradient_mode_name(GradientMode m) {
    return m == GradientMode::PARAMETER_SHIFT ? "PARAMETER_SHIFT" : "CENTRAL_DIFF";
}

inline GradientMode gradient_mode_from_name(std::string_view name) {
    if (name == "PARAMETER_SHIFT") {
        return GradientMode::PARAMETER_SHIFT;
    }
    if (name == "CENTRAL_DIFF") {
        return GradientMode::CENTRAL_DIFF;
    }
    throw std::invalid_argument("unknown gradient mode: " + std::string(name));
}

struct AdamOptions {
    double alpha = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    GradientMode gradient_mode = GradientMode::PARAMETER_SHIFT;
    double fd_step = 1e-3;

    void validate() const {
        if (!(alpha > 0) || !(epsilon > 0) || !(fd_step > 0)) {
            throw std::invalid_argument("adam: alpha, epsilon and fd_step must be positive");
        }
        if (!(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1)) {
            throw std::invalid_argument("adam: betas must lie in (0, 1)");
        }
    }
};

/// dE/dtheta_j = [E(theta + pi/2 e_j) - E(theta - pi/2 e_j)] / 2, exact for
/// losses that are sinusoidal in each coordinate with unit frequency.
inline std::vector<double> parameter_shift_gradient(const Loss &loss, std::vector<double> theta) {
    std::vector<double> g(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        const double x = theta[j];
        theta[j] = x + std::numbers::pi / 2;
        const double plus = loss(theta);
        theta[j] = x - std::numbers::pi / 2;
        const double minus = loss(theta);
        theta[j] = x;
        g[j] = 0.5 * (plus - minus);
    }
    return g;
}

inline std::vector<double> central_difference_gradient(const Loss &loss, std::vector<double> theta, double h) {
    std::vector<double> g(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        const double x = theta[j];
        theta[j] = x + h;
        const double plus = loss(theta);
        theta[j] = x - h;
        const double minus = loss(theta);
        theta[j] = x;
        g[j] = (plus - minus) / (2 * h);
    }
    return g;
}

/// Adam with bias correction. Record k holds the loss at the k-th iterate;
/// the gradient costs 2n further evaluations.
inline OptimizationTrace adam_minimize(const Loss &loss, std::vector<double> theta, const AdamOptions &opt,
                                       const RunLimits &limits) {
    detail::check_start(theta);
    opt.validate();
    limits.validate();
    const std::size_t n = theta.size();
    detail::CountedLoss f(loss, limits);
    const Loss counted = [&f](std::span<const double> p) { return f(p); };
    std::vector<double> m(n, 0.0);
    std::vector<double> v(n, 0.0);
    OptimizationTrace trace;
    trace.terminated_by = Termination::MAX_ITER;
    for (int k = 0;; ++k) {
        if (!f.can_afford(1)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        trace.add({k, theta, f(theta), f.evals(), 0});
        if (k == limits.max_iterations) {
            break;
        }
        if (!f.can_afford(2 * n)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        const auto g = opt.gradient_mode == GradientMode::PARAMETER_SHIFT
                           ? parameter_shift_gradient(counted, theta)
                           : central_difference_gradient(counted, theta, opt.fd_step);
        const double b1t = 1 - std::pow(opt.beta1, k + 1);
        const double b2t = 1 - std::pow(opt.beta2, k + 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(g[j])) {
                throw OptimizerError("adam: non-finite gradient");
            }
            m[j] = opt.beta1 * m[j] + (1 - opt.beta1) * g[j];
            v[j] = opt.beta2 * v[j] + (1 - opt.beta2) * g[j] * g[j];
            theta[j] -= opt.alpha * (m[j] / b1t) / (std::sqrt(v[j] / b2t) + opt.epsilon);
        }
    }
    trace.final_params = theta;
    return trace;
}

} // namespace noisy_vqe
