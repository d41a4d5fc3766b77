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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "noisy_vqe/experiment/vqe.hpp"

namespace noisy_vqe {

enum class NoiseAxis { READOUT, DEP1, DEP2, AMP, PHASE, SHOTS };

inline constexpr std::array<std::pair<NoiseAxis, std::string_view>, 6> kNoiseAxisNames{{
    {NoiseAxis::READOUT, "READOUT"},
    {NoiseAxis::DEP1, "DEP1"},
    {NoiseAxis::DEP2, "DEP2"},
    {NoiseAxis::AMP, "AMP"},
    {NoiseAxis::PHASE, "PHASE"},
    {NoiseAxis::SHOTS, "SHOTS"},
}};

inline std::string_view noise_axis_name(NoiseAxis a) {
    for (const auto &[axis, name] : kNoiseAxisNames) {
        if (axis == a) {
            return name;
        }
    }
    throw std::invalid_argument("unknown noise axis");
}

inline NoiseAxis noise_axis_from_name(std::string_view name) {
    for (const auto &[axis, n] : kNoiseAxisNames) {
        if (n == name) {
            return axis;
        }
    }
    throw std::invalid_argument("unknown noise axis: " + std::string(name));
}

/// Default intensity grids per axis.
inline std::vector<double> default_intensities(NoiseAxis axis) {
    switch (axis) {
    case NoiseAxis::READOUT:
        return {0, 0.01, 0.02, 0.03, 0.05, 0.1, 0.2, 0.3};
    case NoiseAxis::DEP1:
        return {0, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2};
    case NoiseAxis::DEP2:
        return {0, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2};
    case NoiseAxis::AMP:
    case NoiseAxis::PHASE:
        return {0, 1e-3, 3e-3, 1e-2, 3e-2, 0.08, 0.1};
    case NoiseAxis::SHOTS:
        return {256, 1024, 4096, 16384};
    }
    throw std::invalid_argument("unknown noise axis");
}

enum class InitMode { FIXED, RANDOM };

inline std::string_view init_mode_name(InitMode m) { return m == InitMode::FIXED ? "FIXED" : "RANDOM"; }

inline InitMode init_mode_from_name(std::string_view name) {
    if (name == "FIXED") {
        return InitMode::FIXED;
    }
    if (name == "RANDOM") {
        return InitMode::RANDOM;
    }
    throw std::invalid_argument("unknown init mode: " + std::string(name));
}

struct SweepConfig {
    AnsatzKind ansatz = AnsatzKind::RXYZ;
    OptimizerConfig optimizer;
    NoiseAxis axis = NoiseAxis::READOUT;
    std::vector<double> intensities = default_intensities(NoiseAxis::READOUT);
    NoiseModel fixed_noise;
    NoiseGrouping grouping = NoiseGrouping::FusedSingleQubitRuns;
    int repetitions = 30;
    std::uint64_t shots = kDefaultShots;
    std::uint64_t seed_base = 0;
    InitMode init_mode = InitMode::FIXED;
    std::vector<double> theta0; // FIXED start; empty means derived from seed_base

    void validate() const {
        optimizer.validate();
        if (!theta0.empty() && theta0.size() != static_cast<std::size_t>(build_ansatz(ansatz, 4).n_params)) {
            throw std::invalid_argument("sweep: theta0 length does not match the ansatz");
        }
        fixed_noise.validate();
        if (repetitions < 1) {
            throw std::invalid_argument("sweep: repetitions must be >= 1");
        }
        if (intensities.empty()) {
            throw std::invalid_argument("sweep: intensities must not be empty");
        }
        for (std::size_t i = 0; i < intensities.size(); ++i) {
            if (!std::isfinite(intensities[i])) {
                throw std::invalid_argument("sweep: non-finite intensity");
            }
            if (i > 0 && !(intensities[i] > intensities[i - 1])) {
                throw std::invalid_argument("sweep: intensities must be strictly increasing");
            }
        }
        if (axis == NoiseAxis::SHOTS) {
            for (double s : intensities) {
                if (s < 1 || s != std::floor(s)) {
                    throw std::invalid_argument("sweep: SHOTS intensities must be positive integers");
                }
            }
        } else {
            for (double p : intensities) {
                if (p < 0 || p > 1) {
                    throw std::invalid_argument("sweep: probabilities must lie in [0, 1]");
                }
            }
            if (shots < 1) {
                throw std::invalid_argument("sweep: shots must be >= 1");
            }
        }
    }
};

/// Backend of one sweep cell: the axis intensity substituted into the fixed
/// noise model (or the shot count for the SHOTS axis).
inline BackendConfig cell_backend(const SweepConfig &cfg, double intensity) {
    BackendConfig b;
    b.grouping = cfg.grouping;
    b.noise = cfg.fixed_noise;
    b.shots = cfg.shots;
    switch (cfg.axis) {
    case NoiseAxis::READOUT:
        b.noise.p_readout = intensity;
        break;
    case NoiseAxis::DEP1:
        b.noise.p_dep1 = intensity;
        break;
    case NoiseAxis::DEP2:
        b.noise.p_dep2 = intensity;
        break;
    case NoiseAxis::AMP:
        b.noise.p_amp = intensity;
        break;
    case NoiseAxis::PHASE:
        b.noise.p_phase = intensity;
        break;
    case NoiseAxis::SHOTS:
        b.shots = static_cast<std::uint64_t>(intensity);
        break;
    }
    b.mode = cfg.axis == NoiseAxis::SHOTS && b.noise.is_noiseless() ? BackendMode::SHOTS : BackendMode::NOISY;
    return b;
}

/// Start point shared by every cell in FIXED mode.
inline std::vector<double> fixed_theta0(const SweepConfig &cfg) {
    if (!cfg.theta0.empty()) {
        return cfg.theta0;
    }
    return random_angles(static_cast<std::size_t>(build_ansatz(cfg.ansatz, 4).n_params), hash64(cfg.seed_base, ~0ULL, 0));
}

/// Smallest seed_base >= first whose FIXED start reaches chemical accuracy in a
/// noiseless run with the sweep's optimizer. Throws after max_tries seeds.
inline std::uint64_t find_converging_seed_base(SweepConfig cfg, std::uint64_t first = 0, int max_tries = 100) {
    cfg.theta0.clear();
    for (int i = 0; i < max_tries; ++i) {
        cfg.seed_base = first + static_cast<std::uint64_t>(i);
        const auto r = run_vqe(cfg.ansatz, cfg.optimizer, BackendConfig::exact(), fixed_theta0(cfg), cfg.seed_base);
        if (r.final_energy <= kH2GroundEnergy + kChemicalAccuracy) {
            return cfg.seed_base;
        }
    }
    throw std::runtime_error("no converging start among " + std::to_string(max_tries) + " seeds");
}

struct SweepRow {
    double intensity = 0.0;
    int repetition = 0;
    double final_energy = 0.0;
    double best_energy = 0.0;
    std::vector<double> final_params;
    std::uint64_t seed = 0;
    OptimizationTrace trace; // empty unless traces are kept

    bool operator==(const SweepRow &) const = default;
};

inline constexpr double kHistogramLow = -1.25;
inline constexpr double kHistogramHigh = -0.35;
inline constexpr double kHistogramBinWidth = 0.01;

struct HistogramBin {
    double lower = 0.0;
    std::uint64_t count = 0;

    bool operator==(const HistogramBin &) const = default;
};

struct IntensityStats {
    double intensity = 0.0;
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1)
    std::vector<HistogramBin> histogram; // non-empty 0.01 Ha bins on [-1.25, -0.35)
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    bool operator==(const IntensityStats &) const = default;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;
    std::vector<IntensityStats> stats;
};

/// Fixed-width histogram; bin i covers [low + i*w, low + (i+1)*w).
inline void fill_histogram(IntensityStats &s, std::span<const double> values) {
    const auto n_bins = static_cast<std::size_t>(std::llround((kHistogramHigh - kHistogramLow) / kHistogramBinWidth));
    std::vector<std::uint64_t> counts(n_bins, 0);
    for (double v : values) {
        const double pos = (v - kHistogramLow) / kHistogramBinWidth;
        if (pos < 0) {
            ++s.underflow;
        } else if (pos >= static_cast<double>(n_bins)) {
            ++s.overflow;
        } else {
            ++counts[static_cast<std::size_t>(pos)];
        }
    }
    for (std::size_t i = 0; i < n_bins; ++i) {
        if (counts[i] > 0) {
            s.histogram.push_back({kHistogramLow + kHistogramBinWidth * static_cast<double>(i), counts[i]});
        }
    }
}

/// Per-intensity mean, sample standard deviation and histogram of the final energies.
inline std::vector<IntensityStats> compute_stats(std::span<const SweepRow> rows, std::span<const double> intensities) {
    std::vector<IntensityStats> out;
    for (double p : intensities) {
        std::vector<double> values;
        for (const auto &r : rows) {
            if (r.intensity == p) {
                values.push_back(r.final_energy);
            }
        }
        IntensityStats s;
        s.intensity = p;
        s.n = static_cast<int>(values.size());
        for (double v : values) {
            s.mean += v / static_cast<double>(values.size());
        }
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) {
                ss += (v - s.mean) * (v - s.mean);
            }
            s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        fill_histogram(s, values);
        out.push_back(std::move(s));
    }
    return out;
}

/// Worker count from NOISY_VQE_WORKERS, else 1.
inline int default_workers() {
    if (const char *env = std::getenv("NOISY_VQE_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) {
                return n;
            }
        } catch (const std::exception &) {
        }
    }
    return 1;
}

/// Runs every (intensity, repetition) cell; cell seed is
/// hash64(seed_base, intensity_index, repetition). Rows come out in
/// (intensity, repetition) order regardless of the worker count.
inline SweepResult run_noise_sweep(const SweepConfig &cfg, int workers = 1, bool keep_traces = false,
                                   const std::function<void(const SweepRow &)> &on_row = {}) {
    cfg.validate();
    const auto n_params = static_cast<std::size_t>(build_ansatz(cfg.ansatz, 4).n_params);
    const auto theta_fixed = fixed_theta0(cfg);
    const std::size_t n_cells = cfg.intensities.size() * static_cast<std::size_t>(cfg.repetitions);
    SweepResult result;
    result.config = cfg;
    result.rows.resize(n_cells);

    std::atomic<std::size_t> next{0};
    std::mutex report_mutex;
    std::exception_ptr failure;
    auto work = [&] {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= n_cells) {
                return;
            }
            try {
                const std::size_t ii = cell / static_cast<std::size_t>(cfg.repetitions);
                const int rep = static_cast<int>(cell % static_cast<std::size_t>(cfg.repetitions));
                const double p = cfg.intensities[ii];
                const std::uint64_t seed = hash64(cfg.seed_base, ii, static_cast<std::uint64_t>(rep));
                const auto theta0 = cfg.init_mode == InitMode::FIXED ? theta_fixed : random_angles(n_params, hash64(seed, 3, 0));
                auto vqe = run_vqe(cfg.ansatz, cfg.optimizer, cell_backend(cfg, p), theta0, seed);
                SweepRow row{p, rep, vqe.final_energy, vqe.best_seen_energy, vqe.final_params, seed, {}};
                if (keep_traces) {
                    row.trace = std::move(vqe.trace);
                }
                result.rows[cell] = std::move(row);
                if (on_row) {
                    const std::lock_guard lock(report_mutex);
                    on_row(result.rows[cell]);
                }
            } catch (...) {
                const std::lock_guard lock(report_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = n_cells;
                return;
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n_cells)));
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    result.stats = compute_stats(result.rows, cfg.intensities);
    return result;
}

} // namespace noisy_vqe
