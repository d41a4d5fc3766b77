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
#include <numeric>
#include <vector>

#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

struct NelderMeadOptions {
    double initial_simplex_size = 0.5;
    bool restart = true;
    double restart_scale = 2.0;
    double ftol = 1e-8;
    double restart_threshold = -1.0; // restart once if the converged value is above this

    void validate() const {
        if (!(initial_simplex_size > 0) || !(restart_scale > 0) || !(ftol >= 0)) {
            throw std::invalid_argument("nelder_mead: simplex size and restart scale must be positive, ftol >= 0");
        }
    }
};

/// Downhill simplex with reflection, expansion, contraction and shrink
/// coefficients (1, 2, 0.5, 0.5). Each record holds the best vertex.
inline OptimizationTrace nelder_mead_minimize(const Loss &loss, std::vector<double> theta, const NelderMeadOptions &opt,
                                              const RunLimits &limits) {
    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    detail::check_start(theta);
    opt.validate();
    limits.validate();
    const std::size_t n = theta.size();
    detail::CountedLoss f(loss, limits);
    OptimizationTrace trace;

    std::vector<std::vector<double>> x(n + 1);
    std::vector<double> fx(n + 1);
    std::vector<std::size_t> idx(n + 1);

    auto build_simplex = [&](const std::vector<double> &center, double size) {
        for (std::size_t i = 0; i <= n; ++i) {
            x[i] = center;
            if (i > 0) {
                x[i][i - 1] += size;
            }
            fx[i] = f(x[i]);
        }
    };
    auto order = [&] {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    };
    auto along = [&](const std::vector<double> &from, const std::vector<double> &to, double t) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = from[i] + t * (to[i] - from[i]);
        }
        return out;
    };

    if (!f.can_afford(n + 1)) {
        throw OptimizerError("nelder_mead: evaluation budget smaller than the initial simplex");
    }
    build_simplex(theta, opt.initial_simplex_size);
    order();
    int stage = 0;
    trace.add({0, x[idx[0]], fx[idx[0]], f.evals(), stage});
    bool restarted = false;

    trace.terminated_by = Termination::MAX_ITER;
    for (int k = 1; k <= limits.max_iterations; ++k) {
        if (fx[idx[n]] - fx[idx[0]] <= opt.ftol) {
            if (opt.restart && !restarted && fx[idx[0]] > opt.restart_threshold && f.can_afford(n + 1)) {
                restarted = true;
                stage = 2;
                const auto center = x[idx[0]];
                build_simplex(center, opt.initial_simplex_size * opt.restart_scale);
                order();
                trace.add({k, x[idx[0]], fx[idx[0]], f.evals(), stage});
                continue;
            }
            trace.terminated_by = Termination::CONVERGED;
            break;
        }
        if (!f.can_afford(n + 2)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        const std::size_t best = idx[0];
        const std::size_t worst = idx[n];
        const std::size_t second = idx[n - 1];
        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t i = 0; i < n; ++i) {
                centroid[i] += x[idx[v]][i] / static_cast<double>(n);
            }
        }
        const auto xr = along(centroid, x[worst], -kReflect);
        const double fr = f(xr);
        if (fr < fx[best]) {
            const auto xe = along(centroid, xr, kExpand);
            const double fe = f(xe);
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr < fx[second]) {
            x[worst] = xr;
            fx[worst] = fr;
        } else {
            const bool outside = fr < fx[worst];
            const auto xc = outside ? along(centroid, xr, kContract) : along(centroid, x[worst], kContract);
            const double fc = f(xc);
            if (outside ? fc <= fr : fc < fx[worst]) {
                x[worst] = xc;
                fx[worst] = fc;
            } else {
                if (!f.can_afford(n)) {
                    trace.terminated_by = Termination::BUDGET;
                    break;
                }
                for (std::size_t v = 1; v <= n; ++v) {
                    x[idx[v]] = along(x[best], x[idx[v]], kShrink);
                    fx[idx[v]] = f(x[idx[v]]);
                }
            }
        }
        order();
        trace.add({k, x[idx[0]], fx[idx[0]], f.evals(), stage});
    }
    trace.final_params = x[idx[0]];
    return trace;
}

} // namespace noisy_vqe
