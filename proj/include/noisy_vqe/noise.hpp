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
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "noisy_vqe/core/channel.hpp"
#include "noisy_vqe/core/gates.hpp"

namespace noisy_vqe {

namespace detail {

inline void check_probability(double p, std::string_view what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

} // namespace detail

/// Noise intensities as dimensionless probabilities.
struct NoiseModel {
    double p_readout = 0.0;
    double p_dep1 = 0.0; // after 1-qubit gates
    double p_dep2 = 0.0; // after 2-qubit gates
    double p_amp = 0.0;
    double p_phase = 0.0;
    double epsilon = 0.0; // excited-state weight of the amplitude-damping fixed point

    void validate() const {
        detail::check_probability(p_readout, "p_readout");
        detail::check_probability(p_dep1, "p_dep1");
        detail::check_probability(p_dep2, "p_dep2");
        detail::check_probability(p_amp, "p_amp");
        detail::check_probability(p_phase, "p_phase");
        detail::check_probability(epsilon, "epsilon");
    }

    [[nodiscard]] bool has_gate_noise() const {
        return p_dep1 > 0.0 || p_dep2 > 0.0 || p_amp > 0.0 || p_phase > 0.0;
    }

    [[nodiscard]] bool is_noiseless() const { return !has_gate_noise() && p_readout == 0.0; }

    /// Typical superconducting-device intensities.
    static NoiseModel device_defaults() {
        NoiseModel m;
        m.p_readout = 0.03;
        m.p_dep1 = 0.001;
        m.p_dep2 = 0.01;
        return m;
    }

    friend bool operator==(const NoiseModel &, const NoiseModel &) = default;
};

inline KrausChannel readout_flip_channel(double p) {
    detail::check_probability(p, "readout flip probability");
    return KrausChannel(1, {pauli::matrix('I') * std::sqrt(1.0 - p), pauli::matrix('X') * std::sqrt(p)}, "readout");
}

/// arity 1: {sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z}, so <Z> -> (1 - 4p/3) <Z>.
/// arity 2: sqrt(1-p) II plus sqrt(p/15) for each of the 15 non-identity pairs.
inline KrausChannel depolarizing_channel(int arity, double p) {
    detail::check_probability(p, "depolarizing probability");
    if (arity == 1) {
        const double w = std::sqrt(p / 3.0);
        return KrausChannel(1,
                            {pauli::matrix('I') * std::sqrt(1.0 - p), pauli::matrix('X') * w, pauli::matrix('Y') * w,
                             pauli::matrix('Z') * w},
                            "depolarizing1");
    }
    if (arity == 2) {
        std::vector<Matrix> ops;
        const double w = std::sqrt(p / 15.0);
        for (char a : std::string_view("IXYZ")) {
            for (char b : std::string_view("IXYZ")) {
                const char axis[2] = {a, b};
                Matrix m = pauli::string_matrix(std::string_view(axis, 2));
                const bool identity = a == 'I' && b == 'I';
                m *= identity ? std::sqrt(1.0 - p) : w;
                ops.push_back(std::move(m));
            }
        }
        return KrausChannel(2, std::move(ops), "depolarizing2");
    }
    throw std::invalid_argument("depolarizing_channel: arity must be 1 or 2");
}

/// Generalized amplitude damping; epsilon = 0 keeps only the two decay operators.
inline KrausChannel amplitude_damping_channel(double p_amp, double epsilon = 0.0) {
    detail::check_probability(p_amp, "amplitude damping probability");
    detail::check_probability(epsilon, "epsilon");
    const double keep = std::sqrt(1.0 - p_amp);
    const double decay = std::sqrt(p_amp);
    std::vector<Matrix> ops;
    const double ground = std::sqrt(1.0 - epsilon);
    ops.push_back(Matrix{{ground, 0.0}, {0.0, ground * keep}});
    ops.push_back(Matrix{{0.0, ground * decay}, {0.0, 0.0}});
    if (epsilon > 0.0) {
        const double excited = std::sqrt(epsilon);
        ops.push_back(Matrix{{excited * keep, 0.0}, {0.0, excited}});
        ops.push_back(Matrix{{0.0, 0.0}, {excited * decay, 0.0}});
    }
    return KrausChannel(1, std::move(ops), "amplitude_damping");
}

inline KrausChannel phase_damping_channel(double p_phase) {
    detail::check_probability(p_phase, "phase damping probability");
    return KrausChannel(1,
                        {Matrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p_phase)}},
                         Matrix{{0.0, 0.0}, {0.0, std::sqrt(p_phase)}}},
                        "phase_damping");
}

/// Relaxation characteristics; an infinite t1 or t_phi switches that decay off.
struct RelaxationTimes {
    double t1 = 0.0;
    double t_phi = 0.0;
    double gate_time = 0.0;
};

struct DecayProbabilities {
    double p_amp = 0.0;
    double p_phase = 0.0;
    double t2 = 0.0;
};

/// p_a = 1 - exp(-t/T1), p_phi = 1 - exp(-t/(2 T_phi)), 1/T2 = 1/(2 T1) + 1/T_phi.
inline DecayProbabilities decay_probabilities(const RelaxationTimes &times) {
    if (!(times.t1 > 0.0) || !(times.t_phi > 0.0)) {
        throw std::invalid_argument("relaxation times must be strictly positive");
    }
    if (!(times.gate_time >= 0.0) || !std::isfinite(times.gate_time)) {
        throw std::invalid_argument("gate time must be finite and non-negative");
    }
    DecayProbabilities out;
    out.p_amp = -std::expm1(-times.gate_time / times.t1);
    out.p_phase = -std::expm1(-times.gate_time / (2.0 * times.t_phi));
    out.t2 = 1.0 / (1.0 / (2.0 * times.t1) + 1.0 / times.t_phi);
    return out;
}

/// A channel application inside a noisy instruction stream.
struct ChannelOp {
    std::shared_ptr<const KrausChannel> channel;
    std::vector<int> qubits;
};

/// Readout flips are applied to sampled bits, not to the state.
struct ReadoutMarker {
    int qubit = 0;
    double p_flip = 0.0;
};

using NoisyOp = std::variant<GateOp, ChannelOp, ReadoutMarker>;

/// Where gate noise goes.
///   PerGate: after every gate.
///   FusedSingleQubitRuns: after every maximal run of consecutive 1-qubit gates
///   on a qubit (the run is executed as one compiled 1-qubit gate), and after
///   every 2-qubit gate.
enum class NoiseGrouping { PerGate, FusedSingleQubitRuns };

inline std::string_view grouping_name(NoiseGrouping g) {
    return g == NoiseGrouping::PerGate ? "per_gate" : "fused_single_qubit_runs";
}

inline NoiseGrouping grouping_from_name(std::string_view name) {
    if (name == "per_gate") {
        return NoiseGrouping::PerGate;
    }
    if (name == "fused_single_qubit_runs") {
        return NoiseGrouping::FusedSingleQubitRuns;
    }
    throw std::invalid_argument("unknown noise grouping: " + std::string(name));
}

/// Incremental form of attach_noise. Copyable, so a shared circuit prefix can
/// be scheduled once and continued with different suffixes.
class NoiseScheduler {
  public:
    NoiseScheduler(const NoiseModel &model, int n_qubits, NoiseGrouping grouping = NoiseGrouping::PerGate)
        : model_(model), grouping_(grouping), pending_(static_cast<std::size_t>(n_qubits), false) {
        model_.validate();
        if (model_.p_dep1 > 0.0) {
            dep1_ = std::make_shared<KrausChannel>(depolarizing_channel(1, model_.p_dep1));
        }
        if (model_.p_dep2 > 0.0) {
            dep2_ = std::make_shared<KrausChannel>(depolarizing_channel(2, model_.p_dep2));
        }
        if (model_.p_amp > 0.0) {
            amp_ = std::make_shared<KrausChannel>(amplitude_damping_channel(model_.p_amp, model_.epsilon));
        }
        if (model_.p_phase > 0.0) {
            phase_ = std::make_shared<KrausChannel>(phase_damping_channel(model_.p_phase));
        }
    }

    /// Appends a gate; Pauli rotations are expanded into their staircase form
    /// whenever gate noise is present, so noise follows each elementary gate.
    void append(const GateOp &gate, std::vector<NoisyOp> &out) {
        if (!model_.has_gate_noise()) {
            out.emplace_back(gate);
            return;
        }
        for (const auto &g : decompose_pauli_rotation(gate)) {
            append_elementary(g, out);
        }
    }

    /// Flushes pending single-qubit noise and appends one readout marker per qubit.
    void finish(std::vector<NoisyOp> &out) {
        for (std::size_t q = 0; q < pending_.size(); ++q) {
            flush(static_cast<int>(q), out);
        }
        if (model_.p_readout > 0.0) {
            for (std::size_t q = 0; q < pending_.size(); ++q) {
                out.emplace_back(ReadoutMarker{static_cast<int>(q), model_.p_readout});
            }
        }
    }

  private:
    void append_elementary(const GateOp &g, std::vector<NoisyOp> &out) {
        if (g.arity() == 1) {
            const int q = g.qubits[0];
            if (grouping_ == NoiseGrouping::PerGate) {
                out.emplace_back(g);
                single_qubit_noise(q, out);
            } else {
                out.emplace_back(g);
                pending_.at(static_cast<std::size_t>(q)) = true;
            }
            return;
        }
        if (g.arity() != 2) {
            throw std::invalid_argument("noise policy only covers 1- and 2-qubit gates");
        }
        for (int q : g.qubits) {
            flush(q, out);
        }
        out.emplace_back(g);
        if (dep2_) {
            out.emplace_back(ChannelOp{dep2_, g.qubits});
        }
        for (int q : g.qubits) {
            damping(q, out);
        }
    }

    void flush(int q, std::vector<NoisyOp> &out) {
        auto flag = pending_.at(static_cast<std::size_t>(q));
        if (flag) {
            flag = false;
            single_qubit_noise(q, out);
        }
    }

    void single_qubit_noise(int q, std::vector<NoisyOp> &out) {
        if (dep1_) {
            out.emplace_back(ChannelOp{dep1_, {q}});
        }
        damping(q, out);
    }

    void damping(int q, std::vector<NoisyOp> &out) {
        if (amp_) {
            out.emplace_back(ChannelOp{amp_, {q}});
        }
        if (phase_) {
            out.emplace_back(ChannelOp{phase_, {q}});
        }
    }

    NoiseModel model_;
    NoiseGrouping grouping_;
    std::vector<bool> pending_;
    std::shared_ptr<const KrausChannel> dep1_;
    std::shared_ptr<const KrausChannel> dep2_;
    std::shared_ptr<const KrausChannel> amp_;
    std::shared_ptr<const KrausChannel> phase_;
};

/// Interleaves the model's channels with a gate list: after each 1-qubit gate
/// depolarizing(1), amplitude and phase damping on that qubit; after each
/// 2-qubit gate depolarizing(2) on the pair and damping on each qubit; one
/// readout marker per qubit at the end. Zero-probability channels are omitted.
inline std::vector<NoisyOp> attach_noise(const std::vector<GateOp> &gates, const NoiseModel &model, int n_qubits,
                                         NoiseGrouping grouping = NoiseGrouping::PerGate) {
    NoiseScheduler scheduler(model, n_qubits, grouping);
    std::vector<NoisyOp> out;
    for (const auto &g : gates) {
        scheduler.append(g, out);
    }
    scheduler.finish(out);
    return out;
}

/// Executes gates and channels on a density matrix; readout markers are skipped.
inline void run_noisy_ops(DensityMatrix &rho, const std::vector<NoisyOp> &ops) {
    for (const auto &op : ops) {
        if (const auto *g = std::get_if<GateOp>(&op)) {
            apply_gate(rho, *g);
        } else if (const auto *c = std::get_if<ChannelOp>(&op)) {
            apply_channel(rho, *c->channel, c->qubits);
        }
    }
}

struct NoiseCounts {
    int gates = 0;
    int channels = 0;
    int readout_markers = 0;
};

inline NoiseCounts count_noisy_ops(const std::vector<NoisyOp> &ops) {
    NoiseCounts c;
    for (const auto &op : ops) {
        if (std::holds_alternative<GateOp>(op)) {
            ++c.gates;
        } else if (std::holds_alternative<ChannelOp>(op)) {
            ++c.channels;
        } else {
            ++c.readout_markers;
        }
    }
    return c;
}

} // namespace noisy_vqe
