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
#include <random>
#include <utility>
#include <vector>

#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

using Bounds = std::vector<std::pair<double, double>>;

struct BayesianOptions {
    int n_initial = 10;
    int n_iterations = 50;
    double kernel_lengthscale = 1.0;
    double noise_variance = 1e-6;
    int acq_candidates = 2000;
    double lower = -2 * std::numbers::pi; // per-coordinate bounds
    double upper = 2 * std::numbers::pi;

    void validate() const {
        if (n_initial < 2 || n_iterations < 0 || acq_candidates < 1) {
            throw std::invalid_argument("bayesian: need n_initial >= 2, n_iterations >= 0, acq_candidates >= 1");
        }
        if (!(kernel_lengthscale > 0) || !(noise_variance >= 0)) {
            throw std::invalid_argument("bayesian: lengthscale must be positive, noise_variance >= 0");
        }
        if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
            throw std::invalid_argument("bayesian: bounds must be finite with lower < upper");
        }
    }
};

/// i-th element (i >= 1) of the van der Corput sequence in `base`.
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

/// Halton point `index` (>= 1) scaled into the bounds.
inline std::vector<double> halton_point(std::uint64_t index, const Bounds &bounds) {
    std::vector<double> out(bounds.size());
    std::uint64_t prime = 1;
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        do {
            ++prime;
        } while ([&] {
            for (std::uint64_t q = 2; q * q <= prime; ++q) {
                if (prime % q == 0) {
                    return true;
                }
            }
            return false;
        }());
        const auto [lo, hi] = bounds[d];
        out[d] = lo + (hi - lo) * radical_inverse(index, prime);
    }
    return out;
}

/// GP regression with a squared-exponential kernel. The signal variance is
/// the sample variance of the targets; the prior mean is their mean.
class GaussianProcess {
  public:
    GaussianProcess(std::vector<std::vector<double>> x, std::vector<double> y, double lengthscale,
                    double noise_variance)
        : x_(std::move(x)), lengthscale_(lengthscale) {
        const std::size_t n = x_.size();
        if (n == 0 || y.size() != n) {
            throw std::invalid_argument("GaussianProcess: inputs and targets must be non-empty and equal in size");
        }
        for (double v : y) {
            mean_ += v / static_cast<double>(n);
        }
        double var = 0.0;
        for (double v : y) {
            var += (v - mean_) * (v - mean_) / static_cast<double>(n);
        }
        signal_ = var > 0 ? var : 1.0;

        chol_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = kernel(x_[i], x_[j]) + (i == j ? noise_variance : 0.0);
                for (std::size_t k = 0; k < j; ++k) {
                    s -= chol_[i * n + k] * chol_[j * n + k];
                }
                if (i == j) {
                    if (!(s > 0)) {
                        throw OptimizerError("GaussianProcess: kernel matrix is singular");
                    }
                    chol_[i * n + i] = std::sqrt(s);
                } else {
                    chol_[i * n + j] = s / chol_[j * n + j];
                }
            }
        }
        alpha_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            alpha_[i] = y[i] - mean_;
        }
        solve_lower(alpha_);
        solve_upper(alpha_);
    }

    struct Prediction {
        double mean = 0.0;
        double variance = 0.0;
    };

    [[nodiscard]] Prediction predict(const std::vector<double> &p) const {
        std::vector<double> k(x_.size());
        Prediction out{mean_, 0.0};
        for (std::size_t i = 0; i < x_.size(); ++i) {
            k[i] = kernel(p, x_[i]);
            out.mean += k[i] * alpha_[i];
        }
        solve_lower(k);
        double reduction = 0.0;
        for (double v : k) {
            reduction += v * v;
        }
        out.variance = std::max(0.0, signal_ - reduction);
        return out;
    }

  private:
    [[nodiscard]] double kernel(const std::vector<double> &a, const std::vector<double> &b) const {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d2 += (a[i] - b[i]) * (a[i] - b[i]);
        }
        return signal_ * std::exp(-0.5 * d2 / (lengthscale_ * lengthscale_));
    }

    void solve_lower(std::vector<double> &b) const {
        const std::size_t n = x_.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) {
                b[i] -= chol_[i * n + k] * b[k];
            }
            b[i] /= chol_[i * n + i];
        }
    }

    void solve_upper(std::vector<double> &b) const {
        const std::size_t n = x_.size();
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) {
                b[i] -= chol_[k * n + i] * b[k];
            }
            b[i] /= chol_[i * n + i];
        }
    }

    std::vector<std::vector<double>> x_;
    double lengthscale_;
    double mean_ = 0.0;
    double signal_ = 1.0;
    std::vector<double> chol_; // row-major lower factor
    std::vector<double> alpha_;
};

/// Expected improvement below `best` for a Gaussian prediction.
inline double expected_improvement(double mean, double stddev, double best) {
    const double gain = best - mean;
    if (!(stddev > 0)) {
        return std::max(0.0, gain);
    }
    const double z = gain / stddev;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
    return std::max(0.0, gain * cdf + stddev * pdf);
}

/// Bayesian optimization: n_initial Halton points, then each iteration
/// evaluates the best Expected Improvement among uniform random candidates.
/// Every evaluation is a record.
inline OptimizationTrace bayesian_minimize(const Loss &loss, const Bounds &bounds, const BayesianOptions &opt,
                                           const RunLimits &limits) {
    opt.validate();
    limits.validate();
    if (bounds.empty()) {
        throw std::invalid_argument("bayesian: empty bounds");
    }
    for (const auto &[lo, hi] : bounds) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
            throw std::invalid_argument("bayesian: bounds must be finite with lower < upper");
        }
    }
    detail::CountedLoss f(loss, limits);
    std::mt19937_64 rng(limits.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    OptimizationTrace trace;
    trace.terminated_by = Termination::MAX_ITER;

    auto evaluate = [&](std::vector<double> p) {
        const double y = f(p);
        trace.add({static_cast<int>(xs.size()), p, y, f.evals(), 0});
        xs.push_back(std::move(p));
        ys.push_back(y);
    };

    for (int i = 0; i < opt.n_initial; ++i) {
        if (!f.can_afford(1)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        evaluate(halton_point(static_cast<std::uint64_t>(i + 1), bounds));
    }
    const int steps = std::min(opt.n_iterations, limits.max_iterations);
    for (int it = 0; it < steps && trace.terminated_by != Termination::BUDGET; ++it) {
        if (!f.can_afford(1)) {
            trace.terminated_by = Termination::BUDGET;
            break;
        }
        const GaussianProcess gp(xs, ys, opt.kernel_lengthscale, opt.noise_variance);
        const double best = *std::min_element(ys.begin(), ys.end());
        std::vector<double> winner;
        double winner_ei = -1.0;
        std::vector<double> cand(bounds.size());
        for (int c = 0; c < opt.acq_candidates; ++c) {
            for (std::size_t d = 0; d < bounds.size(); ++d) {
                cand[d] = bounds[d].first + (bounds[d].second - bounds[d].first) * unit(rng);
            }
            const auto pred = gp.predict(cand);
            const double ei = expected_improvement(pred.mean, std::sqrt(pred.variance), best);
            if (ei > winner_ei) {
                winner_ei = ei;
                winner = cand;
            }
        }
        evaluate(std::move(winner));
    }
    trace.final_params = trace.best_params;
    return trace;
}

/// Uniform per-coordinate bounds from the options.
inline Bounds uniform_bounds(std::size_t n, const BayesianOptions &opt) {
    return Bounds(n, {opt.lower, opt.upper});
}

} // namespace noisy_vqe
