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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "noisy_vqe/estimator.hpp"
#include "noisy_vqe/optimize.hpp"

using namespace noisy_vqe;
using std::numbers::pi;

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

Loss h2_loss(AnsatzKind kind) {
    auto est = std::make_shared<EnergyEstimator>(build_ansatz(kind, 4), h2_hamiltonian(), BackendConfig::exact());
    return [est](std::span<const double> p) { return est->mean_energy(p); };
}

std::vector<double> random_params(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> out(n);
    for (auto &x : out) {
        x = u(rng);
    }
    return out;
}

void expect_trace_invariants(const OptimizationTrace &t) {
    ASSERT_FALSE(t.records.empty());
    double lowest = t.records.front().energy;
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        lowest = std::min(lowest, t.records[i].energy);
        if (i > 0) {
            EXPECT_GE(t.records[i].cumulative_evals, t.records[i - 1].cumulative_evals);
        }
    }
    EXPECT_EQ(t.best_energy, lowest);
    EXPECT_EQ(t.total_evals, t.records.back().cumulative_evals);
    EXPECT_FALSE(t.final_params.empty());
}

OptimizerConfig config_for(OptimizerKind kind, int iterations, std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.kind = kind;
    cfg.limits.max_iterations = iterations;
    cfg.limits.seed = seed;
    cfg.bayesian.n_initial = 5;
    cfg.bayesian.n_iterations = 10;
    cfg.bayesian.acq_candidates = 200;
    return cfg;
}

constexpr OptimizerKind kAllKinds[] = {OptimizerKind::NFT,         OptimizerKind::SPSA, OptimizerKind::SPSA_REOPT,
                                       OptimizerKind::NELDER_MEAD, OptimizerKind::ADAM, OptimizerKind::BAYESIAN};

} // namespace

// ---- NFT ----

TEST(nft, one_step_exact_on_sinusoid) {
    const Loss f = [](std::span<const double> t) { return 2 + std::cos(t[0] - 0.3); };
    RunLimits limits;
    limits.max_iterations = 1;
    const auto trace = nft_minimize(f, {0.0}, {}, limits);
    ASSERT_EQ(trace.records.size(), 2u);
    const double x = trace.final_params[0];
    EXPECT_NEAR(std::remainder(x - (0.3 + pi), 2 * pi), 0.0, 1e-14);
    EXPECT_NEAR(trace.records[1].energy, 1.0, 1e-15);
    EXPECT_NEAR(f(trace.final_params), 1.0, 1e-15);
}

TEST(nft, sinusoid_argmin_examples) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = std::abs(u(rng)) + 0.01;
        const double b = u(rng);
        const double c = u(rng);
        const double x = u(rng);
        auto L = [&](double t) { return a * std::cos(t - b) + c; };
        const auto s = sinusoid_argmin(x, L(x), L(x + pi / 2), L(x - pi / 2));
        EXPECT_NEAR(s.predicted, c - a, 1e-12);
        EXPECT_NEAR(L(s.x), c - a, 1e-12);
        EXPECT_LE(std::abs(s.x - x), pi + 1e-12);
    }
    const auto flat = sinusoid_argmin(0.7, 1.0, 1.0, 1.0);
    EXPECT_EQ(flat.x, 0.7);
    EXPECT_EQ(flat.predicted, 1.0);
}

TEST(nft, separable_sinusoids_solved_in_one_sweep) {
    const std::vector<double> amp{1.0, 0.5, 2.0, 0.1};
    const std::vector<double> phase{0.3, -2.0, 1.1, 3.0};
    const Loss f = [&](std::span<const double> t) {
        double s = 0.25;
        for (std::size_t j = 0; j < t.size(); ++j) {
            s += amp[j] * std::cos(t[j] - phase[j]);
        }
        return s;
    };
    for (auto ordering : {NftOrdering::ORDERED, NftOrdering::RANDOM_NO_REPLACEMENT}) {
        NftOptions opt;
        opt.ordering = ordering;
        opt.sweeps = 1;
        RunLimits limits;
        limits.max_iterations = 1000;
        limits.seed = 5;
        const auto trace = nft_minimize(f, random_params(4, 1), opt, limits);
        EXPECT_EQ(trace.records.size(), 5u);
        EXPECT_NEAR(f(trace.final_params), 0.25 - 3.6, 1e-12);
        std::vector<int> moved(4, 0);
        for (std::size_t k = 1; k < trace.records.size(); ++k) {
            for (std::size_t j = 0; j < 4; ++j) {
                moved[j] += trace.records[k].params[j] != trace.records[k - 1].params[j];
            }
        }
        EXPECT_EQ(moved, (std::vector<int>{1, 1, 1, 1}));
    }
}

TEST(nft, evaluation_counts) {
    const Loss f = [](std::span<const double> t) { return std::cos(t[0]) + std::sin(t[1]); };
    NftOptions opt;
    opt.reset_interval = 4;
    RunLimits limits;
    limits.max_iterations = 10;
    const auto trace = nft_minimize(f, {0.1, 0.2}, opt, limits);
    ASSERT_EQ(trace.records.size(), 11u);
    for (int k = 0; k <= 10; ++k) {
        EXPECT_EQ(trace.records[static_cast<std::size_t>(k)].cumulative_evals, 1u + 2u * k + k / 4) << k;
    }
    opt.model = NftModel::TWO_HARMONIC;
    const auto t5 = nft_minimize(f, {0.1, 0.2}, opt, limits);
    EXPECT_EQ(t5.total_evals, 1u + 4u * 10u + 2u);
}

TEST(nft, budget_stops_before_overrun) {
    const Loss f = [](std::span<const double> t) { return std::cos(t[0]); };
    RunLimits limits;
    limits.max_iterations = 100;
    limits.eval_budget = 8;
    const auto trace = nft_minimize(f, {0.1}, {}, limits);
    EXPECT_EQ(trace.terminated_by, Termination::BUDGET);
    EXPECT_EQ(trace.total_evals, 7u);
}

TEST(nft, random_ordering_is_a_permutation_per_sweep) {
    const Loss f = [](std::span<const double> t) {
        double s = 0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            s += std::cos(t[j] + static_cast<double>(j));
        }
        return s;
    };
    NftOptions opt;
    opt.ordering = NftOrdering::RANDOM_NO_REPLACEMENT;
    RunLimits limits;
    limits.max_iterations = 36;
    limits.seed = 11;
    const auto trace = nft_minimize(f, std::vector<double>(6, 1.0), opt, limits);
    std::vector<std::size_t> visits;
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (std::abs(trace.records[k].params[j] - trace.records[k - 1].params[j]) > 1e-9) {
                visits.push_back(j);
            }
        }
    }
    // Only the first sweep moves coordinates by more than rounding.
    ASSERT_EQ(visits.size(), 6u);
    std::sort(visits.begin(), visits.end());
    EXPECT_EQ(visits, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
}

TEST(nft, two_harmonic_model) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const double a1 = u(rng), b1 = u(rng), a2 = u(rng), b2 = u(rng);
        auto L = [&](double t) {
            return a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) + b2 * std::sin(2 * t);
        };
        double grid_min = L(0.0);
        for (int i = 0; i < 200000; ++i) {
            grid_min = std::min(grid_min, L(2 * pi * i / 200000));
        }
        const double x = u(rng);
        std::vector<double> values;
        for (int m = 0; m < 5; ++m) {
            values.push_back(L(x + 2 * pi * m / 5));
        }
        const auto s = two_harmonic_argmin(x, values);
        EXPECT_NEAR(s.predicted, L(s.x), 1e-12);
        EXPECT_LE(s.predicted, grid_min + 1e-9);
        EXPECT_GE(s.predicted, grid_min - 1e-9);
    }
}

TEST(nft, sinusoid_premise_holds_for_every_ansatz) {
    for (auto kind : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        const auto loss = h2_loss(kind);
        const int n = build_ansatz(kind, 4).n_params;
        for (int trial = 0; trial < 3; ++trial) {
            const auto theta = random_params(static_cast<std::size_t>(n), 100 + trial);
            for (std::size_t j = 0; j < theta.size(); ++j) {
                EXPECT_LT(sinusoid_residual(loss, theta, j), 1e-8) << ansatz_name(kind) << " coordinate " << j;
            }
        }
    }
    const Loss not_sinusoidal = [](std::span<const double> t) { return std::cos(2 * t[0]); };
    EXPECT_GT(sinusoid_residual(not_sinusoidal, std::vector<double>{0.0}, 0), 0.5);
}

TEST(nft, h2_trace_replays_and_is_shift_invariant) {
    const auto loss = h2_loss(AnsatzKind::RXYZ);
    NftOptions opt;
    opt.reset_interval = 5;
    RunLimits limits;
    limits.max_iterations = 60;
    const auto theta0 = random_params(12, 21);
    const auto trace = nft_minimize(loss, theta0, opt, limits);
    expect_trace_invariants(trace);
    EXPECT_NEAR(loss(trace.best_params), trace.best_energy, 1e-12);
    for (const auto &r : trace.records) {
        EXPECT_NEAR(loss(r.params), r.energy, 1e-12);
    }

    auto shifted0 = theta0;
    shifted0[3] += 2 * pi;
    shifted0[7] -= 4 * pi;
    const auto shifted = nft_minimize(loss, shifted0, opt, limits);
    ASSERT_EQ(shifted.records.size(), trace.records.size());
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        EXPECT_NEAR(shifted.records[k].energy, trace.records[k].energy, 1e-10);
    }
}

// ---- SPSA ----

TEST(spsa, linear_loss_gradient_is_exact) {
    // In one dimension the central difference of a linear loss is exactly w,
    // so the iterate moves by -a_k * w whatever the perturbation.
    const Loss f1 = [](std::span<const double> t) { return -1.5 * t[0]; };
    SpsaGains g;
    g.a = 0.3;
    g.c = 0.7;
    RunLimits limits;
    limits.max_iterations = 5;
    limits.seed = 3;
    const auto t1 = spsa_minimize(f1, {0.0}, g, limits);
    double total_gain = 0.0;
    for (int k = 0; k < 5; ++k) {
        total_gain += g.a_k(k);
    }
    EXPECT_NEAR(t1.final_params[0], 1.5 * total_gain, 1e-12);
    EXPECT_EQ(t1.total_evals, 10u);

    // In n dimensions the estimate is (w . delta) delta_i, which still does not
    // depend on c_k: trajectories for different c coincide.
    const std::vector<double> w{0.5, -1.5, 2.0};
    const Loss f = [&](std::span<const double> t) { return w[0] * t[0] + w[1] * t[1] + w[2] * t[2]; };
    const auto a = spsa_minimize(f, {0.0, 0.0, 0.0}, g, limits);
    g.c = 0.01;
    const auto b = spsa_minimize(f, {0.0, 0.0, 0.0}, g, limits);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(a.final_params[i], b.final_params[i], 1e-12);
    }
}

TEST(spsa, gradient_estimate_is_unbiased_on_linear_loss) {
    const std::vector<double> w{0.5, -1.5, 2.0};
    std::mt19937_64 rng(12);
    std::vector<double> mean(3, 0.0);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        const auto d = rademacher(3, rng);
        const double wd = w[0] * d[0] + w[1] * d[1] + w[2] * d[2];
        for (std::size_t j = 0; j < 3; ++j) {
            mean[j] += wd / d[j] / draws;
        }
    }
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(mean[j], w[j], 0.05);
    }
}

TEST(spsa, matches_reference_loop_on_quadratic) {
    // Independent reference: same Rademacher convention (top bit of each draw).
    std::mt19937_64 rng(7);
    std::vector<double> x{1.0, 1.0};
    for (int k = 0; k < 500; ++k) {
        const double ck = 0.1 / std::pow(k + 1, 0.101);
        const double ak = 0.2 / std::pow(k + 1, 0.602);
        const double d0 = (rng() >> 63) ? 1.0 : -1.0;
        const double d1 = (rng() >> 63) ? 1.0 : -1.0;
        const double fp = std::pow(x[0] + ck * d0, 2) + std::pow(x[1] + ck * d1, 2);
        const double fm = std::pow(x[0] - ck * d0, 2) + std::pow(x[1] - ck * d1, 2);
        x[0] -= ak * (fp - fm) / (2 * ck) / d0;
        x[1] -= ak * (fp - fm) / (2 * ck) / d1;
    }
    EXPECT_LT(std::sqrt(norm2(x)), 0.05);

    SpsaGains g;
    g.a = 0.2;
    g.c = 0.1;
    RunLimits limits;
    limits.max_iterations = 500;
    limits.seed = 7;
    const Loss f = [](std::span<const double> t) { return norm2(t); };
    const auto trace = spsa_minimize(f, {1.0, 1.0}, g, limits);
    EXPECT_NEAR(trace.final_params[0], x[0], 1e-12);
    EXPECT_NEAR(trace.final_params[1], x[1], 1e-12);
    EXPECT_LT(std::sqrt(norm2(trace.final_params)), 0.05);
    EXPECT_EQ(trace.total_evals, 1000u);
    expect_trace_invariants(trace);
    for (const auto &r : trace.records) {
        EXPECT_EQ(f(r.params), r.energy);
    }
}

TEST(spsa, reopt_marks_a_single_transition) {
    const Loss f = [](std::span<const double> t) { return norm2(t); };
    SpsaReoptOptions opt;
    opt.convergence_window = 5;
    opt.convergence_tol = 1e-2;
    RunLimits limits;
    limits.max_iterations = 200;
    limits.seed = 2;
    const auto trace = spsa_reopt_minimize(f, {1.0, -2.0, 0.5}, opt, limits);
    int transitions = 0;
    ASSERT_EQ(trace.records.front().stage, 1);
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
        ASSERT_GE(trace.records[k].stage, trace.records[k - 1].stage);
        transitions += trace.records[k].stage != trace.records[k - 1].stage;
    }
    EXPECT_EQ(transitions, 1);
    EXPECT_EQ(trace.records.back().stage, 2);
    expect_trace_invariants(trace);
}

TEST(spsa, reopt_transition_is_the_first_settled_window) {
    // Reconstruct the probe means from a stage-1-only run and check that the
    // transition happens at the first iteration whose windows agree.
    const Loss f = [](std::span<const double> t) { return norm2(t) + 0.1 * std::cos(3 * t[0]); };
    SpsaReoptOptions opt;
    opt.convergence_window = 4;
    opt.convergence_tol = 5e-3;
    opt.max_coarse_iterations = 1000;
    RunLimits limits;
    limits.max_iterations = 120;
    limits.seed = 9;
    const auto trace = spsa_reopt_minimize(f, {0.8, -0.6}, opt, limits);

    // Same stream driving plain coarse SPSA with probe means recorded.
    std::vector<double> means;
    const Loss recording = [&](std::span<const double> t) { return f(t); };
    std::vector<double> plus_minus;
    const Loss spy = [&](std::span<const double> t) {
        const double v = recording(t);
        plus_minus.push_back(v);
        if (plus_minus.size() % 2 == 0) {
            means.push_back(0.5 * (plus_minus[plus_minus.size() - 2] + v));
        }
        return v;
    };
    RunLimits coarse_limits = limits;
    spsa_minimize(spy, {0.8, -0.6}, opt.coarse, coarse_limits);
    int expected = -1;
    for (std::size_t k = 2 * 4 - 1; k < means.size(); ++k) {
        double prev = 0.0;
        double last = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            prev += means[k - 7 + i];
            last += means[k - 3 + i];
        }
        if (std::abs(last - prev) / 4 < 5e-3) {
            expected = static_cast<int>(k);
            break;
        }
    }
    ASSERT_GE(expected, 0);
    int first_fine = -1;
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        if (trace.records[k].stage == 2) {
            first_fine = static_cast<int>(k);
            break;
        }
    }
    EXPECT_EQ(first_fine, expected + 1);
}

TEST(spsa, reopt_not_worse_than_fine_spsa_on_quadratic) {
    // Hessian 0.5 I, comparable to the curvature of the H2 landscapes.
    const Loss f = [](std::span<const double> t) { return 0.25 * norm2(t); };
    const std::vector<double> start{2.5, -1.5, 3.0, 0.5};
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        RunLimits limits;
        limits.max_iterations = 300;
        limits.seed = seed;
        const auto plain = spsa_minimize(f, start, SpsaGains::fine(), limits);
        const auto reopt = spsa_reopt_minimize(f, start, SpsaReoptOptions{}, limits);
        EXPECT_LE(f(reopt.final_params), f(plain.final_params)) << "seed " << seed;
    }
}

// ---- Nelder-Mead ----

TEST(nelder_mead, one_dimensional_parabola) {
    const Loss f = [](std::span<const double> t) { return (t[0] - 2) * (t[0] - 2); };
    NelderMeadOptions opt;
    opt.initial_simplex_size = 1.0;
    opt.ftol = 1e-16;
    opt.restart = false;
    RunLimits limits;
    limits.max_iterations = 500;
    const auto trace = nelder_mead_minimize(f, {0.0}, opt, limits);
    EXPECT_EQ(trace.terminated_by, Termination::CONVERGED);
    EXPECT_NEAR(trace.final_params[0], 2.0, 1e-6);
    expect_trace_invariants(trace);
}

TEST(nelder_mead, rosenbrock) {
    const Loss f = [](std::span<const double> t) {
        return 100 * std::pow(t[1] - t[0] * t[0], 2) + std::pow(1 - t[0], 2);
    };
    NelderMeadOptions opt;
    opt.initial_simplex_size = 0.5;
    opt.ftol = 1e-20;
    opt.restart = false;
    RunLimits limits;
    limits.max_iterations = 5000;
    const auto trace = nelder_mead_minimize(f, {-1.2, 1.0}, opt, limits);
    EXPECT_NEAR(trace.final_params[0], 1.0, 1e-3);
    EXPECT_NEAR(trace.final_params[1], 1.0, 1e-3);
    for (const auto &r : trace.records) {
        EXPECT_EQ(f(r.params), r.energy);
    }
}

TEST(nelder_mead, restart_fires_iff_above_threshold) {
    const Loss f = [](std::span<const double> t) { return (t[0] - 1) * (t[0] - 1) + t[1] * t[1] - 0.5; };
    for (double threshold : {-1.0, 0.0}) {
        NelderMeadOptions opt;
        opt.ftol = 1e-12;
        opt.restart_threshold = threshold;
        RunLimits limits;
        limits.max_iterations = 2000;
        const auto trace = nelder_mead_minimize(f, {3.0, 2.0}, opt, limits);
        const bool restarted = std::any_of(trace.records.begin(), trace.records.end(),
                                           [](const TraceRecord &r) { return r.stage == 2; });
        EXPECT_EQ(restarted, threshold < -0.5) << threshold;
        EXPECT_EQ(trace.terminated_by, Termination::CONVERGED);
        EXPECT_NEAR(trace.best_energy, -0.5, 1e-10);
    }
}

// ---- Adam ----

TEST(adam, first_step_is_alpha_times_sign) {
    const std::vector<double> g{0.3, -2.0, 5.0};
    const Loss f = [&](std::span<const double> t) { return g[0] * t[0] + g[1] * t[1] + g[2] * t[2]; };
    AdamOptions opt;
    opt.alpha = 0.01;
    opt.gradient_mode = GradientMode::CENTRAL_DIFF;
    RunLimits limits;
    limits.max_iterations = 1;
    const auto trace = adam_minimize(f, {1.0, 1.0, 1.0}, opt, limits);
    for (std::size_t i = 0; i < 3; ++i) {
        const double step = trace.final_params[i] - 1.0;
        const double expected = -opt.alpha * g[i] / (std::abs(g[i]) + opt.epsilon);
        EXPECT_NEAR(step, expected, 1e-12);
    }
    EXPECT_EQ(trace.records.size(), 2u);
    EXPECT_EQ(trace.total_evals, 1u + 6u + 1u);
}

TEST(adam, parameter_shift_matches_central_difference_on_h2) {
    for (auto kind : {AnsatzKind::RXYZ, AnsatzKind::RY, AnsatzKind::UCCSD}) {
        const auto loss = h2_loss(kind);
        const auto n = static_cast<std::size_t>(build_ansatz(kind, 4).n_params);
        for (int trial = 0; trial < 10; ++trial) {
            const auto theta = random_params(n, 300 + trial);
            const auto ps = parameter_shift_gradient(loss, theta);
            const auto cd = central_difference_gradient(loss, theta, 1e-5);
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_NEAR(ps[j], cd[j], 1e-6) << ansatz_name(kind);
            }
        }
    }
}

TEST(adam, quadratic_converges) {
    const Loss f = [](std::span<const double> t) { return norm2(t); };
    AdamOptions opt;
    opt.alpha = 0.1;
    opt.gradient_mode = GradientMode::CENTRAL_DIFF;
    RunLimits limits;
    limits.max_iterations = 500;
    const auto trace = adam_minimize(f, {1.0, -0.5, 2.0}, opt, limits);
    EXPECT_LT(std::sqrt(norm2(trace.final_params)), 1e-3);
}

TEST(adam, reaches_h2_ground_state_with_parameter_shift) {
    const auto loss = h2_loss(AnsatzKind::UCCSD);
    AdamOptions opt;
    opt.alpha = 0.05;
    RunLimits limits;
    limits.max_iterations = 300;
    const auto trace = adam_minimize(loss, {0.1, -0.1, 0.05}, opt, limits);
    EXPECT_LT(trace.best_energy, kH2GroundEnergy + kChemicalAccuracy);
}

// ---- Bayesian ----

TEST(bayesian, gp_interpolates_without_noise) {
    std::vector<std::vector<double>> x{{0.0}, {0.7}, {1.9}, {3.1}, {4.4}};
    std::vector<double> y;
    for (const auto &p : x) {
        y.push_back(std::sin(p[0]) + 0.3 * p[0]);
    }
    const GaussianProcess gp(x, y, 0.8, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto pred = gp.predict(x[i]);
        EXPECT_NEAR(pred.mean, y[i], 1e-12);
        EXPECT_NEAR(pred.variance, 0.0, 1e-10);
    }
    EXPECT_GT(gp.predict({10.0}).variance, 0.0);
}

TEST(bayesian, singular_kernel_is_reported) {
    std::vector<std::vector<double>> x{{1.0}, {1.0}};
    EXPECT_THROW(GaussianProcess(x, {0.0, 1.0}, 1.0, 0.0), OptimizerError);
    EXPECT_NO_THROW(GaussianProcess(x, {0.0, 1.0}, 1.0, 1e-6));
}

TEST(bayesian, expected_improvement_is_nonnegative) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 10000; ++i) {
        EXPECT_GE(expected_improvement(u(rng), std::abs(u(rng)), u(rng)), 0.0);
    }
    EXPECT_EQ(expected_improvement(1.0, 0.0, 0.5), 0.0);
    EXPECT_EQ(expected_improvement(0.0, 0.0, 0.5), 0.5);
}

TEST(bayesian, halton_points_are_in_bounds_and_distinct) {
    const Bounds b{{0.0, 1.0}, {-2.0, 2.0}, {5.0, 6.0}};
    EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
    EXPECT_DOUBLE_EQ(radical_inverse(3, 2), 0.75);
    EXPECT_DOUBLE_EQ(radical_inverse(1, 3), 1.0 / 3);
    std::vector<std::vector<double>> pts;
    for (std::uint64_t i = 1; i <= 50; ++i) {
        auto p = halton_point(i, b);
        for (std::size_t d = 0; d < 3; ++d) {
            EXPECT_GE(p[d], b[d].first);
            EXPECT_LT(p[d], b[d].second);
        }
        EXPECT_EQ(std::count(pts.begin(), pts.end(), p), 0);
        pts.push_back(p);
    }
}

TEST(bayesian, finds_sine_minimum) {
    // Dense-grid oracle: argmin of sin on [0, 2pi] is 3pi/2.
    const Loss f = [](std::span<const double> t) { return std::sin(t[0]); };
    BayesianOptions opt;
    opt.n_initial = 5;
    opt.n_iterations = 20;
    RunLimits limits;
    limits.seed = 3;
    const auto trace = bayesian_minimize(f, {{0.0, 2 * pi}}, opt, limits);
    EXPECT_EQ(trace.records.size(), 25u);
    EXPECT_NEAR(trace.best_params[0], 3 * pi / 2, 0.15);
    expect_trace_invariants(trace);
}

// ---- shared contracts ----

TEST(optimizers, trace_invariants_and_determinism_on_noisy_h2) {
    auto make_loss = [] {
        auto est = std::make_shared<EnergyEstimator>(build_ansatz(AnsatzKind::RY, 4), h2_hamiltonian(),
                                                     BackendConfig::sampled(256, 17));
        return Loss([est](std::span<const double> p) { return (*est)(p); });
    };
    for (auto kind : kAllKinds) {
        const auto cfg = config_for(kind, 20, 99);
        const auto a = minimize(cfg, make_loss(), {0.1, 0.2, 0.3, 0.4});
        const auto b = minimize(cfg, make_loss(), {0.1, 0.2, 0.3, 0.4});
        expect_trace_invariants(a);
        EXPECT_EQ(a, b) << optimizer_name(kind);
    }
}

TEST(optimizers, best_params_replay_exactly_in_exact_mode) {
    const auto loss = h2_loss(AnsatzKind::RY);
    for (auto kind : kAllKinds) {
        const auto t = minimize(config_for(kind, 20, 5), loss, {0.1, 0.2, 0.3, 0.4});
        if (kind == OptimizerKind::NFT) {
            // NFT records the analytic minimum of the fitted sinusoid.
            EXPECT_NEAR(loss(t.best_params), t.best_energy, 1e-12);
        } else {
            EXPECT_EQ(loss(t.best_params), t.best_energy) << optimizer_name(kind);
        }
    }
}

TEST(optimizers, eval_budget_is_respected) {
    const auto loss = h2_loss(AnsatzKind::RY);
    for (auto kind : kAllKinds) {
        auto cfg = config_for(kind, 1000, 5);
        cfg.limits.eval_budget = 23;
        std::uint64_t calls = 0;
        const Loss counted = [&](std::span<const double> p) {
            ++calls;
            return loss(p);
        };
        const auto t = minimize(cfg, counted, {0.1, 0.2, 0.3, 0.4});
        EXPECT_LE(calls, 23u) << optimizer_name(kind);
        EXPECT_EQ(t.total_evals, calls) << optimizer_name(kind);
        if (kind != OptimizerKind::BAYESIAN) {
            EXPECT_EQ(t.terminated_by, Termination::BUDGET) << optimizer_name(kind);
        }
    }
}

TEST(optimizers, non_finite_loss_is_an_error) {
    const Loss bad = [](std::span<const double> t) { return t[0] > 0.5 ? std::nan("") : t[0]; };
    for (auto kind : kAllKinds) {
        auto cfg = config_for(kind, 50, 1);
        cfg.bayesian.lower = 0.0;
        cfg.bayesian.upper = 1.0;
        EXPECT_THROW(minimize(cfg, bad, {0.6, 0.0}), OptimizerError) << optimizer_name(kind);
    }
}

TEST(optimizers, config_validation) {
    auto cfg = config_for(OptimizerKind::NFT, 10, 0);
    cfg.nft.reset_interval = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = config_for(OptimizerKind::ADAM, 10, 0);
    cfg.adam.beta1 = 1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = config_for(OptimizerKind::SPSA, 0, 0);
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = config_for(OptimizerKind::BAYESIAN, 10, 0);
    cfg.bayesian.n_initial = 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    for (const auto &[kind, name] : kOptimizerNames) {
        EXPECT_EQ(optimizer_kind_from_name(name), kind);
    }
    EXPECT_THROW(optimizer_kind_from_name("LBFGS"), std::invalid_argument);
}
