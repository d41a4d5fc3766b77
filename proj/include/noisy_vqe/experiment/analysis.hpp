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
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_vqe/estimator.hpp"
#include "noisy_vqe/optimize/trace.hpp"

namespace noisy_vqe {

// ---- recalculation ----

struct RecalcPoint {
    int iteration = 0;
    double energy = 0.0;

    bool operator==(const RecalcPoint &) const = default;
};

/// Noiseless energy at every recorded parameter vector, in record order. No
/// optimization happens here.
inline std::vector<RecalcPoint> recalculate_trace(const OptimizationTrace &trace, AnsatzKind kind,
                                                  const Hamiltonian &h) {
    const auto circuit = build_ansatz(kind, h.n_qubits());
    const EnergyEstimator exact(circuit, h, BackendConfig::exact());
    std::vector<RecalcPoint> out;
    out.reserve(trace.records.size());
    for (const auto &r : trace.records) {
        if (r.params.size() != static_cast<std::size_t>(circuit.n_params)) {
            throw std::invalid_argument("recalculate_trace: record has " + std::to_string(r.params.size()) +
                                        " parameters, ansatz needs " + std::to_string(circuit.n_params));
        }
        out.push_back({r.iteration, exact.estimate_at(r.params, 0).value});
    }
    return out;
}

// ---- noise-curve fits ----

enum class FitModel { LINEAR, ERF };

inline std::string_view fit_model_name(FitModel m) { return m == FitModel::LINEAR ? "LINEAR" : "ERF"; }

inline FitModel fit_model_from_name(std::string_view name) {
    if (name == "LINEAR") {
        return FitModel::LINEAR;
    }
    if (name == "ERF") {
        return FitModel::ERF;
    }
    throw std::invalid_argument("unknown fit model: " + std::string(name));
}

struct CurvePoint {
    double intensity = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// LINEAR: (slope, intercept). ERF: (c0, c1, c2) for c0 + c1*erf(c2*p).
struct FitResult {
    FitModel model = FitModel::LINEAR;
    std::vector<double> coefficients;
    double residual_sum_squares = 0.0;
    double r_squared = 0.0;
    int iterations = 0;

    [[nodiscard]] double operator()(double p) const {
        if (model == FitModel::LINEAR) {
            return coefficients[0] * p + coefficients[1];
        }
        return coefficients[0] + coefficients[1] * std::erf(coefficients[2] * p);
    }
};

inline constexpr int kMaxLevenbergMarquardtSteps = 500;
inline constexpr std::array<double, 7> kErfRateGrid{1, 2, 5, 10, 20, 50, 100};

namespace detail {

inline void finish_fit(FitResult &f, std::span<const CurvePoint> pts) {
    double mean = 0.0;
    for (const auto &p : pts) {
        mean += p.mean / static_cast<double>(pts.size());
    }
    double rss = 0.0;
    double tss = 0.0;
    for (const auto &p : pts) {
        rss += (p.mean - f(p.intensity)) * (p.mean - f(p.intensity));
        tss += (p.mean - mean) * (p.mean - mean);
    }
    f.residual_sum_squares = rss;
    if (tss > 0) {
        f.r_squared = 1.0 - rss / tss;
    } else {
        f.r_squared = rss == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    }
}

// Solves the 3x3 system a x = b by Gaussian elimination with partial pivoting.
inline bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, std::array<double, 3> &x) {
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) {
                piv = r;
            }
        }
        if (a[piv][c] == 0.0) {
            return false;
        }
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < 3; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < 3; ++k) {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < 3; ++k) {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    return true;
}

inline double erf_rss(std::span<const CurvePoint> pts, const std::array<double, 3> &c) {
    double rss = 0.0;
    for (const auto &p : pts) {
        const double r = c[0] + c[1] * std::erf(c[2] * p.intensity) - p.mean;
        rss += r * r;
    }
    return rss;
}

// Keeps c1 >= 0 and c2 >= 0 using the odd symmetry of erf.
inline void normalize_erf(std::array<double, 3> &c) {
    if (c[2] < 0) {
        c[1] = -c[1];
        c[2] = -c[2];
    }
    c[1] = std::max(c[1], 0.0);
}

struct LmRun {
    std::array<double, 3> c{};
    double rss = 0.0;
    int steps = 0;
    bool converged = false;
};

inline LmRun erf_levenberg_marquardt(std::span<const CurvePoint> pts, std::array<double, 3> c) {
    normalize_erf(c);
    double rss = erf_rss(pts, c);
    double lambda = 1e-3;
    LmRun out;
    int step = 0;
    for (; step < kMaxLevenbergMarquardtSteps && !out.converged; ++step) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (const auto &p : pts) {
            const double e = std::erf(c[2] * p.intensity);
            const double j[3] = {1.0, e,
                                 c[1] * p.intensity * 2.0 / std::sqrt(std::numbers::pi) *
                                     std::exp(-c[2] * c[2] * p.intensity * p.intensity)};
            const double r = c[0] + c[1] * e - p.mean;
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        double grad = 0.0;
        for (double g : jtr) {
            grad = std::max(grad, std::abs(g));
        }
        if (rss == 0.0 || grad <= 1e-15 * std::max(1.0, rss)) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        while (lambda < 1e20) {
            auto a = jtj;
            for (int d = 0; d < 3; ++d) {
                a[d][d] += lambda * std::max(jtj[d][d], 1e-12);
            }
            std::array<double, 3> delta{};
            if (solve3(a, {-jtr[0], -jtr[1], -jtr[2]}, delta)) {
                auto trial = c;
                for (int d = 0; d < 3; ++d) {
                    trial[d] += delta[d];
                }
                normalize_erf(trial);
                const double r = erf_rss(pts, trial);
                if (r < rss) {
                    double rel_step = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        rel_step = std::max(rel_step, std::abs(trial[d] - c[d]) / std::max(1.0, std::abs(c[d])));
                    }
                    const double rel_gain = (rss - r) / rss;
                    c = trial;
                    rss = r;
                    lambda = std::max(lambda / 10, 1e-12);
                    accepted = true;
                    out.converged = rel_step < 1e-12 || rel_gain < 1e-14;
                    break;
                }
            }
            lambda *= 10;
        }
        if (!accepted) {
            // No descent step exists at this precision: a stationary point.
            out.converged = true;
        }
    }
    out.c = c;
    out.rss = rss;
    out.steps = step;
    return out;
}

} // namespace detail

/// Least-squares fit of mean energy versus intensity (unweighted). ERF runs
/// Levenberg-Marquardt from each rate in kErfRateGrid and keeps the best.
inline FitResult fit_noise_curve(std::span<const CurvePoint> pts, FitModel model) {
    FitResult f;
    f.model = model;
    if (model == FitModel::LINEAR) {
        if (pts.size() < 3) {
            throw FitError("LINEAR fit needs at least 3 points");
        }
        double sx = 0.0;
        double sy = 0.0;
        const auto n = static_cast<double>(pts.size());
        for (const auto &p : pts) {
            sx += p.intensity;
            sy += p.mean;
        }
        const double mx = sx / n;
        const double my = sy / n;
        double sxx = 0.0;
        double sxy = 0.0;
        for (const auto &p : pts) {
            sxx += (p.intensity - mx) * (p.intensity - mx);
            sxy += (p.intensity - mx) * (p.mean - my);
        }
        if (sxx == 0.0) {
            throw FitError("LINEAR fit needs at least two distinct intensities");
        }
        const double slope = sxy / sxx;
        f.coefficients = {slope, my - slope * mx};
        detail::finish_fit(f, pts);
        return f;
    }

    if (pts.size() < 4) {
        throw FitError("ERF fit needs at least 4 points");
    }
    // One LM run per grid rate; the lowest converged RSS wins.
    bool any = false;
    double best_rss = std::numeric_limits<double>::infinity();
    for (double rate : kErfRateGrid) {
        const auto run = detail::erf_levenberg_marquardt(
            pts, {pts.front().mean, pts.back().mean - pts.front().mean, rate});
        if (run.converged && run.rss < best_rss) {
            any = true;
            best_rss = run.rss;
            f.coefficients = {run.c[0], run.c[1], run.c[2]};
            f.iterations = run.steps;
        }
    }
    if (!any) {
        throw FitError("ERF fit did not converge within " + std::to_string(kMaxLevenbergMarquardtSteps) + " steps");
    }
    detail::finish_fit(f, pts);
    return f;
}

inline FitResult fit_noise_curve(const std::vector<CurvePoint> &pts, FitModel model) {
    return fit_noise_curve(std::span<const CurvePoint>(pts), model);
}

// ---- level splitting ----

struct SplittingResult {
    int levels = 1;
    std::vector<double> centers;     // energy level(s)
    double gap = 0.0;                // distance of the two 2-means centers
    std::array<double, 2> within_std{0.0, 0.0};
    std::array<int, 2> sizes{0, 0};
    std::vector<int> assignment;     // 0 = lower cluster, 1 = upper
    std::vector<std::vector<double>> center_params;
    bool param_period_check = false;
};

inline constexpr int kLloydIterations = 100;
inline constexpr double kSplittingStdFactor = 3.0;
inline constexpr double kPeriodTolerance = 0.1;

/// Nearest multiple of 2*pi removed per coordinate.
inline double wrap_to_period(double x) { return x - 2 * std::numbers::pi * std::round(x / (2 * std::numbers::pi)); }

/// 1-D 2-means on the final energies (seeded at min and max). Two levels iff
/// both clusters have at least two members and the center distance exceeds 3x
/// the larger within-cluster standard deviation. Each cluster's parameter
/// center is the mean of its members aligned to the medoid modulo 2*pi.
inline SplittingResult detect_level_splitting(std::span<const double> energies,
                                              std::span<const std::vector<double>> params) {
    if (energies.size() < 10) {
        throw std::invalid_argument("detect_level_splitting: need at least 10 samples");
    }
    if (!params.empty() && params.size() != energies.size()) {
        throw std::invalid_argument("detect_level_splitting: params and energies differ in length");
    }
    SplittingResult out;
    const auto [lo_it, hi_it] = std::minmax_element(energies.begin(), energies.end());
    std::array<double, 2> center{*lo_it, *hi_it};
    out.assignment.assign(energies.size(), 0);
    for (int it = 0; it < kLloydIterations; ++it) {
        for (std::size_t i = 0; i < energies.size(); ++i) {
            out.assignment[i] = std::abs(energies[i] - center[1]) < std::abs(energies[i] - center[0]) ? 1 : 0;
        }
        std::array<double, 2> sum{0, 0};
        std::array<int, 2> count{0, 0};
        for (std::size_t i = 0; i < energies.size(); ++i) {
            sum[out.assignment[i]] += energies[i];
            ++count[out.assignment[i]];
        }
        for (int c = 0; c < 2; ++c) {
            if (count[c] > 0) {
                center[c] = sum[c] / count[c];
            }
        }
    }
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const int c = out.assignment[i];
        ++out.sizes[c];
        out.within_std[c] += (energies[i] - center[c]) * (energies[i] - center[c]);
    }
    for (int c = 0; c < 2; ++c) {
        out.within_std[c] = out.sizes[c] > 0 ? std::sqrt(out.within_std[c] / out.sizes[c]) : 0.0;
    }
    out.gap = std::abs(center[1] - center[0]);
    const bool split = out.sizes[0] >= 2 && out.sizes[1] >= 2 &&
                       out.gap > kSplittingStdFactor * std::max(out.within_std[0], out.within_std[1]);
    if (!split) {
        double mean = 0.0;
        for (double e : energies) {
            mean += e / static_cast<double>(energies.size());
        }
        out.levels = 1;
        out.centers = {mean};
        return out;
    }
    out.levels = 2;
    out.centers = {center[0], center[1]};
    if (params.empty()) {
        return out;
    }
    for (int c = 0; c < 2; ++c) {
        std::size_t medoid = energies.size();
        for (std::size_t i = 0; i < energies.size(); ++i) {
            if (out.assignment[i] == c &&
                (medoid == energies.size() ||
                 std::abs(energies[i] - center[c]) < std::abs(energies[medoid] - center[c]))) {
                medoid = i;
            }
        }
        const auto &ref = params[medoid];
        std::vector<double> aligned(ref.size(), 0.0);
        for (std::size_t i = 0; i < energies.size(); ++i) {
            if (out.assignment[i] != c) {
                continue;
            }
            if (params[i].size() != ref.size()) {
                throw std::invalid_argument("detect_level_splitting: parameter vectors differ in length");
            }
            for (std::size_t d = 0; d < ref.size(); ++d) {
                aligned[d] += (ref[d] + wrap_to_period(params[i][d] - ref[d])) / out.sizes[c];
            }
        }
        out.center_params.push_back(std::move(aligned));
    }
    out.param_period_check = true;
    for (std::size_t d = 0; d < out.center_params[0].size(); ++d) {
        if (std::abs(wrap_to_period(out.center_params[1][d] - out.center_params[0][d])) > kPeriodTolerance) {
            out.param_period_check = false;
        }
    }
    return out;
}

} // namespace noisy_vqe
