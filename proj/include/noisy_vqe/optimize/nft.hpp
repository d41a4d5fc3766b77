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
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

enum class NftOrdering { ORDERED, RANDOM_NO_REPLACEMENT };

/// SINUSOID: a*cos(x - b) + c from three points. TWO_HARMONIC: five equally
/// spaced points, for coordinates whose loss is not single-frequency.
enum class NftModel { SINUSOID, TWO_HARMONIC };

struct NftOptions {
    int reset_interval = 32;
    NftOrdering ordering = NftOrdering::ORDERED;
    int sweeps = 0; // 0: bounded by max_iterations only
    NftModel model = NftModel::SINUSOID;

    void validate() const {
        if (reset_interval < 1) {
            throw std::invalid_argument("nft: reset_interval must be >= 1");
        }
        if (sweeps < 0) {
            throw std::invalid_argument("nft: sweeps must be >= 0");
        }
    }
};

struct CoordinateStep {
    double x = 0.0;         // new coordinate value
    double predicted = 0.0; // model value there
};

/// Minimizer of a*cos(x - b) + c given its values at x, x + pi/2, x - pi/2.
/// The step is taken to the nearest minimum, so |x_new - x| <= pi.
inline CoordinateStep sinusoid_argmin(double x, double l0, double l_plus, double l_minus) {
    const double c = 0.5 * (l_plus + l_minus);
    const double s = 0.5 * (l_minus - l_plus); // a*sin(x - b)
    const double k = l0 - c;                   // a*cos(x - b)
    const double a = std::hypot(s, k);
    if (a == 0.0) {
        return {x, c};
    }
    double step = std::numbers::pi - std::atan2(s, k);
    if (step > std::numbers::pi) {
        step -= 2 * std::numbers::pi;
    }
    return {x + step, c - a};
}

/// Global minimizer of the degree-2 trigonometric interpolant through
/// values[m] = L(x + 2*pi*m/5), m = 0..4.
inline CoordinateStep two_harmonic_argmin(double x, std::span<const double> values) {
    if (values.size() != 5) {
        throw std::invalid_argument("two_harmonic_argmin: need 5 values");
    }
    double c0 = 0.0;
    double a1 = 0.0;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;
    for (int m = 0; m < 5; ++m) {
        const double t = 2 * std::numbers::pi * m / 5;
        const double v = values[static_cast<std::size_t>(m)];
        c0 += v / 5;
        a1 += 0.4 * v * std::cos(t);
        b1 += 0.4 * v * std::sin(t);
        a2 += 0.4 * v * std::cos(2 * t);
        b2 += 0.4 * v * std::sin(2 * t);
    }
    auto g = [&](double s) { return c0 + a1 * std::cos(s) + b1 * std::sin(s) + a2 * std::cos(2 * s) + b2 * std::sin(2 * s); };
    auto dg = [&](double s) { return -a1 * std::sin(s) + b1 * std::cos(s) - 2 * a2 * std::sin(2 * s) + 2 * b2 * std::cos(2 * s); };
    auto d2g = [&](double s) { return -a1 * std::cos(s) - b1 * std::sin(s) - 4 * a2 * std::cos(2 * s) - 4 * b2 * std::sin(2 * s); };

    const int grid = 720;
    double best_s = 0.0;
    double best_v = g(0.0);
    for (int i = 1; i < grid; ++i) {
        const double s = -std::numbers::pi + 2 * std::numbers::pi * i / grid;
        const double v = g(s);
        if (v < best_v) {
            best_v = v;
            best_s = s;
        }
    }
    for (int it = 0; it < 20; ++it) {
        const double h = d2g(best_s);
        if (h <= 0.0) {
            break;
        }
        const double next = best_s - dg(best_s) / h;
        if (!(g(next) <= best_v)) {
            break;
        }
        best_s = next;
        best_v = g(next);
    }
    return {x + best_s, best_v};
}

/// Largest deviation of L restricted to coordinate j from its best
/// single-frequency fit on `points` equally spaced angles.
inline double sinusoid_residual(const Loss &loss, std::span<const double> theta, std::size_t j, int points = 16) {
    std::vector<double> p(theta.begin(), theta.end());
    std::vector<double> v(static_cast<std::size_t>(points));
    double c = 0.0;
    double a = 0.0;
    double b = 0.0;
    for (int m = 0; m < points; ++m) {
        const double t = 2 * std::numbers::pi * m / points;
        p[j] = theta[j] + t;
        v[static_cast<std::size_t>(m)] = loss(p);
        c += v[static_cast<std::size_t>(m)] / points;
        a += 2.0 / points * v[static_cast<std::size_t>(m)] * std::cos(t);
        b += 2.0 / points * v[static_cast<std::size_t>(m)] * std::sin(t);
    }
    double worst = 0.0;
    for (int m = 0; m < points; ++m) {
        const double t = 2 * std::numbers::pi * m / points;
        worst = std::max(worst, std::abs(v[static_cast<std::size_t>(m)] - (c + a * std::cos(t) + b * std::sin(t))));
    }
    return worst;
}

namespace detail {

// Fisher-Yates with explicit draws, so the order does not depend on the
// standard library's shuffle.
inline void portable_shuffle(std::vector<std::size_t> &v, std::mt19937_64 &rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng() % i]);
    }
}

} // namespace detail

/// Sequential coordinate minimization exploiting the sinusoidal dependence of
/// the loss on each rotation angle. Record 0 is the start point.
inline OptimizationTrace nft_minimize(const Loss &loss, std::vector<double> theta, const NftOptions &opt,
                                      const RunLimits &limits) {
    detail::check_start(theta);
    opt.validate();
    limits.validate();
    const std::size_t n = theta.size();
    detail::CountedLoss f(loss, limits);
    std::mt19937_64 rng(limits.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    OptimizationTrace trace;
    double cached = f(theta);
    trace.add({0, theta, cached, f.evals(), 0});

    int iterations = limits.max_iterations;
    if (opt.sweeps > 0) {
        iterations = std::min<long long>(iterations, static_cast<long long>(opt.sweeps) * static_cast<long long>(n));
    }
    const std::uint64_t per_step = opt.model == NftModel::SINUSOID ? 2 : 4;
    trace.terminated_by = Termination::MAX_ITER;
    for (int k = 1; k <= iterations; ++k) {
        const bool refresh = k % opt.reset_interval == 0;
        if (!f.can_afford(per_step + (refresh ? 1 : 0))) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        const std::size_t pos = static_cast<std::size_t>(k - 1) % n;
        if (pos == 0 && opt.ordering == NftOrdering::RANDOM_NO_REPLACEMENT) {
            detail::portable_shuffle(order, rng);
        }
        const std::size_t j = order[pos];
        const double x = theta[j];
        CoordinateStep step;
        if (opt.model == NftModel::SINUSOID) {
            theta[j] = x + std::numbers::pi / 2;
            const double l_plus = f(theta);
            theta[j] = x - std::numbers::pi / 2;
            const double l_minus = f(theta);
            step = sinusoid_argmin(x, cached, l_plus, l_minus);
        } else {
            double values[5] = {cached, 0, 0, 0, 0};
            for (int m = 1; m < 5; ++m) {
                theta[j] = x + 2 * std::numbers::pi * m / 5;
                values[m] = f(theta);
            }
            step = two_harmonic_argmin(x, values);
        }
        theta[j] = step.x;
        cached = refresh ? f(theta) : step.predicted;
        trace.add({k, theta, cached, f.evals(), 0});
    }
    trace.final_params = theta;
    return trace;
}

} // namespace noisy_vqe
