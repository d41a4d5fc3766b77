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

#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "noisy_vqe/ansatz.hpp"
#include "noisy_vqe/estimator.hpp"
#include "noisy_vqe/experiment.hpp"
#include "noisy_vqe/hamiltonian.hpp"
#include "noisy_vqe/noise.hpp"
#include "noisy_vqe/optimize.hpp"

namespace noisy_vqe::io {

using nlohmann::json;

/// Schema violation at a dotted path such as "sweep.intensities[2]".
class SchemaError : public std::runtime_error {
  public:
    SchemaError(std::string path, const std::string &message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)),
          message_(message) {}

    [[nodiscard]] const std::string &path() const { return path_; }
    [[nodiscard]] const std::string &message() const { return message_; }

  private:
    std::string path_;
    std::string message_;
};

inline std::string join_path(const std::string &parent, const std::string &key) {
    return parent.empty() ? key : parent + "." + key;
}

namespace detail {

template <typename T>
T convert(const json &v, const std::string &path);

template <>
inline double convert<double>(const json &v, const std::string &path) {
    if (!v.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    return v.get<double>();
}

template <>
inline bool convert<bool>(const json &v, const std::string &path) {
    if (!v.is_boolean()) {
        throw SchemaError(path, "expected true or false");
    }
    return v.get<bool>();
}

template <>
inline std::string convert<std::string>(const json &v, const std::string &path) {
    if (!v.is_string()) {
        throw SchemaError(path, "expected a string");
    }
    return v.get<std::string>();
}

template <>
inline std::int64_t convert<std::int64_t>(const json &v, const std::string &path) {
    if (v.is_number_unsigned()) {
        if (v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw SchemaError(path, "integer out of range");
        }
        return static_cast<std::int64_t>(v.get<std::uint64_t>());
    }
    if (!v.is_number_integer()) {
        throw SchemaError(path, "expected an integer");
    }
    return v.get<std::int64_t>();
}

template <>
inline int convert<int>(const json &v, const std::string &path) {
    const auto x = convert<std::int64_t>(v, path);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw SchemaError(path, "integer out of range");
    }
    return static_cast<int>(x);
}

template <>
inline std::uint64_t convert<std::uint64_t>(const json &v, const std::string &path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw SchemaError(path, "expected a non-negative integer");
    }
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

template <>
inline std::vector<double> convert<std::vector<double>>(const json &v, const std::string &path) {
    if (!v.is_array()) {
        throw SchemaError(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<double>(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

template <>
inline std::vector<std::string> convert<std::vector<std::string>>(const json &v, const std::string &path) {
    if (!v.is_array()) {
        throw SchemaError(path, "expected an array of strings");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<std::string>(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

} // namespace detail

/// Read access to one JSON object that remembers which keys were consumed;
/// finish() rejects the rest.
class Reader {
  public:
    Reader(const json &j, std::string path) : j_(&j), path_(std::move(path)) {
        if (!j.is_object()) {
            throw SchemaError(path_, "expected a table/object");
        }
    }

    [[nodiscard]] const std::string &path() const { return path_; }
    [[nodiscard]] std::string path_of(const std::string &key) const { return join_path(path_, key); }

    [[nodiscard]] bool has(const std::string &key) const {
        seen_.insert(key);
        return j_->contains(key);
    }

    [[nodiscard]] const json &raw(const std::string &key) const {
        seen_.insert(key);
        if (!j_->contains(key)) {
            throw SchemaError(path_of(key), "missing required key");
        }
        return j_->at(key);
    }

    template <typename T>
    [[nodiscard]] T get(const std::string &key) const {
        return detail::convert<T>(raw(key), path_of(key));
    }

    template <typename T>
    [[nodiscard]] T get_or(const std::string &key, T fallback) const {
        return has(key) ? get<T>(key) : fallback;
    }

    /// Named enum value; `from_name` throws std::invalid_argument on unknown names.
    template <typename F>
    [[nodiscard]] auto get_enum(const std::string &key, F from_name) const {
        const auto name = get<std::string>(key);
        try {
            return from_name(name);
        } catch (const std::invalid_argument &e) {
            throw SchemaError(path_of(key), e.what());
        }
    }

    template <typename E, typename F>
    [[nodiscard]] E get_enum_or(const std::string &key, E fallback, F from_name) const {
        return has(key) ? get_enum(key, from_name) : fallback;
    }

    [[nodiscard]] Reader child(const std::string &key) const { return Reader(raw(key), path_of(key)); }

    void finish() const {
        for (const auto &item : j_->items()) {
            if (!seen_.contains(item.key())) {
                throw SchemaError(path_of(item.key()), "unknown key '" + item.key() + "'" +
                                                           (path_.empty() ? std::string() : " in [" + path_ + "]"));
            }
        }
    }

  private:
    const json *j_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

/// Wraps a library validate() call so its message carries the section path.
template <typename F>
void validated(const std::string &path, F &&check) {
    try {
        check();
    } catch (const std::invalid_argument &e) {
        throw SchemaError(path, e.what());
    }
}

// Noise model ---------------------------------------------------------------

inline json to_json(const NoiseModel &m) {
    return {{"p_readout", m.p_readout}, {"p_dep1", m.p_dep1}, {"p_dep2", m.p_dep2},
            {"p_amp", m.p_amp},         {"p_phase", m.p_phase}, {"epsilon", m.epsilon}};
}

inline NoiseModel read_noise_model(const Reader &r) {
    NoiseModel m;
    m.p_readout = r.get_or("p_readout", 0.0);
    m.p_dep1 = r.get_or("p_dep1", 0.0);
    m.p_dep2 = r.get_or("p_dep2", 0.0);
    m.p_amp = r.get_or("p_amp", 0.0);
    m.p_phase = r.get_or("p_phase", 0.0);
    m.epsilon = r.get_or("epsilon", 0.0);
    r.finish();
    validated(r.path(), [&] { m.validate(); });
    return m;
}

// Hamiltonian ---------------------------------------------------------------

inline json to_json(const Hamiltonian &h) {
    json terms = json::array();
    for (const auto &t : h.terms()) {
        terms.push_back({{"coeff", t.coefficient}, {"paulis", t.paulis}});
    }
    return {{"n_qubits", h.n_qubits()}, {"terms", terms}};
}

inline Hamiltonian read_hamiltonian(const Reader &r) {
    const int n = r.get<int>("n_qubits");
    const auto &terms = r.raw("terms");
    if (!terms.is_array()) {
        throw SchemaError(r.path_of("terms"), "expected an array");
    }
    r.finish();
    try {
        Hamiltonian h(n);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Reader t(terms[i], r.path_of("terms") + "[" + std::to_string(i) + "]");
            h.add_term({t.get<double>("coeff"), t.get<std::string>("paulis")});
            t.finish();
        }
        return h;
    } catch (const std::invalid_argument &e) {
        throw SchemaError(r.path(), e.what());
    }
}

// Optimizer -----------------------------------------------------------------

inline json to_json(const SpsaGains &g) {
    return {{"a", g.a}, {"c", g.c}, {"A", g.A}, {"alpha", g.alpha}, {"gamma", g.gamma}};
}

inline SpsaGains read_spsa_gains(const Reader &r, SpsaGains g) {
    g.a = r.get_or("a", g.a);
    g.c = r.get_or("c", g.c);
    g.A = r.get_or("A", g.A);
    g.alpha = r.get_or("alpha", g.alpha);
    g.gamma = r.get_or("gamma", g.gamma);
    r.finish();
    return g;
}

inline json to_json(const OptimizerConfig &c) {
    json j = {
        {"kind", optimizer_name(c.kind)},
        {"max_iterations", c.limits.max_iterations},
        {"seed", c.limits.seed},
        {"nft",
         {{"reset_interval", c.nft.reset_interval},
          {"ordering", nft_ordering_name(c.nft.ordering)},
          {"sweeps", c.nft.sweeps},
          {"model", nft_model_name(c.nft.model)}}},
        {"spsa", to_json(c.spsa)},
        {"spsa_reopt",
         {{"coarse", to_json(c.spsa_reopt.coarse)},
          {"fine", to_json(c.spsa_reopt.fine)},
          {"convergence_window", c.spsa_reopt.convergence_window},
          {"convergence_tol", c.spsa_reopt.convergence_tol},
          {"max_coarse_iterations", c.spsa_reopt.max_coarse_iterations}}},
        {"nelder_mead",
         {{"initial_simplex_size", c.nelder_mead.initial_simplex_size},
          {"restart", c.nelder_mead.restart},
          {"restart_scale", c.nelder_mead.restart_scale},
          {"ftol", c.nelder_mead.ftol},
          {"restart_threshold", c.nelder_mead.restart_threshold}}},
        {"adam",
         {{"alpha", c.adam.alpha},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"epsilon", c.adam.epsilon},
          {"gradient_mode", gradient_mode_name(c.adam.gradient_mode)},
          {"fd_step", c.adam.fd_step}}},
        {"bayesian",
         {{"n_initial", c.bayesian.n_initial},
          {"n_iterations", c.bayesian.n_iterations},
          {"kernel_lengthscale", c.bayesian.kernel_lengthscale},
          {"noise_variance", c.bayesian.noise_variance},
          {"acq_candidates", c.bayesian.acq_candidates},
          {"lower", c.bayesian.lower},
          {"upper", c.bayesian.upper}}},
    };
    if (c.limits.eval_budget) {
        j["eval_budget"] = *c.limits.eval_budget;
    }
    return j;
}

inline OptimizerConfig read_optimizer_config(const Reader &r) {
    OptimizerConfig c;
    c.kind = r.get_enum_or("kind", c.kind, optimizer_kind_from_name);
    c.limits.max_iterations = r.get_or("max_iterations", c.limits.max_iterations);
    c.limits.seed = r.get_or("seed", c.limits.seed);
    if (r.has("eval_budget")) {
        c.limits.eval_budget = r.get<std::uint64_t>("eval_budget");
    }
    if (r.has("nft")) {
        const auto s = r.child("nft");
        c.nft.reset_interval = s.get_or("reset_interval", c.nft.reset_interval);
        c.nft.ordering = s.get_enum_or("ordering", c.nft.ordering, nft_ordering_from_name);
        c.nft.sweeps = s.get_or("sweeps", c.nft.sweeps);
        c.nft.model = s.get_enum_or("model", c.nft.model, nft_model_from_name);
        s.finish();
    }
    if (r.has("spsa")) {
        c.spsa = read_spsa_gains(r.child("spsa"), c.spsa);
    }
    if (r.has("spsa_reopt")) {
        const auto s = r.child("spsa_reopt");
        auto &o = c.spsa_reopt;
        if (s.has("coarse")) {
            o.coarse = read_spsa_gains(s.child("coarse"), o.coarse);
        }
        if (s.has("fine")) {
            o.fine = read_spsa_gains(s.child("fine"), o.fine);
        }
        o.convergence_window = s.get_or("convergence_window", o.convergence_window);
        o.convergence_tol = s.get_or("convergence_tol", o.convergence_tol);
        o.max_coarse_iterations = s.get_or("max_coarse_iterations", o.max_coarse_iterations);
        s.finish();
    }
    if (r.has("nelder_mead")) {
        const auto s = r.child("nelder_mead");
        auto &o = c.nelder_mead;
        o.initial_simplex_size = s.get_or("initial_simplex_size", o.initial_simplex_size);
        o.restart = s.get_or("restart", o.restart);
        o.restart_scale = s.get_or("restart_scale", o.restart_scale);
        o.ftol = s.get_or("ftol", o.ftol);
        o.restart_threshold = s.get_or("restart_threshold", o.restart_threshold);
        s.finish();
    }
    if (r.has("adam")) {
        const auto s = r.child("adam");
        auto &o = c.adam;
        o.alpha = s.get_or("alpha", o.alpha);
        o.beta1 = s.get_or("beta1", o.beta1);
        o.beta2 = s.get_or("beta2", o.beta2);
        o.epsilon = s.get_or("epsilon", o.epsilon);
        o.gradient_mode = s.get_enum_or("gradient_mode", o.gradient_mode, gradient_mode_from_name);
        o.fd_step = s.get_or("fd_step", o.fd_step);
        s.finish();
    }
    if (r.has("bayesian")) {
        const auto s = r.child("bayesian");
        auto &o = c.bayesian;
        o.n_initial = s.get_or("n_initial", o.n_initial);
        o.n_iterations = s.get_or("n_iterations", o.n_iterations);
        o.kernel_lengthscale = s.get_or("kernel_lengthscale", o.kernel_lengthscale);
        o.noise_variance = s.get_or("noise_variance", o.noise_variance);
        o.acq_candidates = s.get_or("acq_candidates", o.acq_candidates);
        o.lower = s.get_or("lower", o.lower);
        o.upper = s.get_or("upper", o.upper);
        s.finish();
    }
    r.finish();
    validated(r.path(), [&] { c.validate(); });
    return c;
}

// Backend -------------------------------------------------------------------

inline json to_json(const BackendConfig &b) {
    return {{"mode", backend_mode_name(b.mode)},
            {"shots", b.shots},
            {"grouping", grouping_name(b.grouping)},
            {"rng_seed", b.rng_seed},
            {"noise", to_json(b.noise)}};
}

inline BackendConfig read_backend_config(const Reader &r) {
    BackendConfig b;
    b.mode = r.get_enum_or("mode", b.mode, backend_mode_from_name);
    b.shots = r.get_or("shots", b.shots);
    b.grouping = r.get_enum_or("grouping", b.grouping, grouping_from_name);
    b.rng_seed = r.get_or("rng_seed", b.rng_seed);
    if (r.has("noise")) {
        b.noise = read_noise_model(r.child("noise"));
    }
    r.finish();
    validated(r.path(), [&] { b.validate(); });
    return b;
}

// Sweep ---------------------------------------------------------------------

/// Sweep-specific fields; ansatz and optimizer live in their own sections.
inline json sweep_fields_to_json(const SweepConfig &c) {
    return {{"axis", noise_axis_name(c.axis)},
            {"intensities", c.intensities},
            {"fixed_noise", to_json(c.fixed_noise)},
            {"grouping", grouping_name(c.grouping)},
            {"repetitions", c.repetitions},
            {"shots", c.shots},
            {"seed_base", c.seed_base},
            {"init_mode", init_mode_name(c.init_mode)},
            {"theta0", c.theta0}};
}

/// Reads the sweep-specific fields into `c` without calling finish(), so
/// callers may accept extra keys of their own.
inline void read_sweep_fields(const Reader &r, SweepConfig &c) {
    c.axis = r.get_enum_or("axis", c.axis, noise_axis_from_name);
    c.intensities = r.get_or("intensities", default_intensities(c.axis));
    if (r.has("fixed_noise")) {
        c.fixed_noise = read_noise_model(r.child("fixed_noise"));
    }
    c.grouping = r.get_enum_or("grouping", c.grouping, grouping_from_name);
    c.repetitions = r.get_or("repetitions", c.repetitions);
    c.shots = r.get_or("shots", c.shots);
    c.seed_base = r.get_or("seed_base", c.seed_base);
    c.init_mode = r.get_enum_or("init_mode", c.init_mode, init_mode_from_name);
    c.theta0 = r.get_or("theta0", c.theta0);
}

inline json to_json(const SweepConfig &c) {
    json j = sweep_fields_to_json(c);
    j["ansatz"] = ansatz_name(c.ansatz);
    j["optimizer"] = to_json(c.optimizer);
    return j;
}

inline SweepConfig read_sweep_config(const Reader &r) {
    SweepConfig c;
    c.ansatz = r.get_enum(std::string("ansatz"), ansatz_kind_from_name);
    c.optimizer = read_optimizer_config(r.child("optimizer"));
    read_sweep_fields(r, c);
    r.finish();
    validated(r.path(), [&] { c.validate(); });
    return c;
}

// Results -------------------------------------------------------------------

inline json to_json(const IntensityStats &s) {
    json bins = json::array();
    for (const auto &b : s.histogram) {
        bins.push_back({{"lower", b.lower}, {"count", b.count}});
    }
    return {{"intensity", s.intensity}, {"n", s.n},         {"mean", s.mean},        {"stddev", s.stddev},
            {"histogram", bins},        {"underflow", s.underflow}, {"overflow", s.overflow}};
}

inline IntensityStats read_intensity_stats(const Reader &r) {
    IntensityStats s;
    s.intensity = r.get<double>("intensity");
    s.n = r.get<int>("n");
    s.mean = r.get<double>("mean");
    s.stddev = r.get<double>("stddev");
    s.underflow = r.get<std::uint64_t>("underflow");
    s.overflow = r.get<std::uint64_t>("overflow");
    const auto &bins = r.raw("histogram");
    if (!bins.is_array()) {
        throw SchemaError(r.path_of("histogram"), "expected an array");
    }
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const Reader b(bins[i], r.path_of("histogram") + "[" + std::to_string(i) + "]");
        s.histogram.push_back({b.get<double>("lower"), b.get<std::uint64_t>("count")});
        b.finish();
    }
    r.finish();
    return s;
}

inline json to_json(const FitResult &f) {
    return {{"model", fit_model_name(f.model)},
            {"coefficients", f.coefficients},
            {"residual_sum_squares", f.residual_sum_squares},
            {"r_squared", f.r_squared},
            {"iterations", f.iterations}};
}

/// JSON has no infinities; a missing R^2 (constant data, imperfect fit) is stored as null.
inline FitResult read_fit_result(const Reader &r) {
    FitResult f;
    f.model = r.get_enum(std::string("model"), fit_model_from_name);
    f.coefficients = r.get<std::vector<double>>("coefficients");
    f.residual_sum_squares = r.get<double>("residual_sum_squares");
    f.r_squared = r.raw("r_squared").is_null() ? -std::numeric_limits<double>::infinity() : r.get<double>("r_squared");
    f.iterations = r.get<int>("iterations");
    r.finish();
    const std::size_t need = f.model == FitModel::LINEAR ? 2 : 3;
    if (f.coefficients.size() != need) {
        throw SchemaError(r.path_of("coefficients"), "expected " + std::to_string(need) + " coefficients");
    }
    return f;
}

inline json to_json(const SplittingResult &s) {
    return {{"levels", s.levels},
            {"centers", s.centers},
            {"gap", s.gap},
            {"within_std", s.within_std},
            {"sizes", s.sizes},
            {"assignment", s.assignment},
            {"center_params", s.center_params},
            {"param_period_check", s.param_period_check}};
}

inline SplittingResult read_splitting_result(const Reader &r) {
    SplittingResult s;
    s.levels = r.get<int>("levels");
    s.centers = r.get<std::vector<double>>("centers");
    s.gap = r.get<double>("gap");
    const auto ws = r.get<std::vector<double>>("within_std");
    const auto &sizes = r.raw("sizes");
    if (ws.size() != 2 || !sizes.is_array() || sizes.size() != 2) {
        throw SchemaError(r.path(), "within_std and sizes need two entries");
    }
    s.within_std = {ws[0], ws[1]};
    s.sizes = {detail::convert<int>(sizes[0], r.path_of("sizes[0]")),
               detail::convert<int>(sizes[1], r.path_of("sizes[1]"))};
    const auto &assignment = r.raw("assignment");
    if (!assignment.is_array()) {
        throw SchemaError(r.path_of("assignment"), "expected an array");
    }
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        s.assignment.push_back(detail::convert<int>(assignment[i], r.path_of("assignment")));
    }
    const auto &params = r.raw("center_params");
    if (!params.is_array()) {
        throw SchemaError(r.path_of("center_params"), "expected an array");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        s.center_params.push_back(
            detail::convert<std::vector<double>>(params[i], r.path_of("center_params") + "[" + std::to_string(i) + "]"));
    }
    s.param_period_check = r.get<bool>("param_period_check");
    r.finish();
    return s;
}

// Circuit description (write-only) ------------------------------------------

inline json to_json(const GateOp &g) {
    json j = {{"name", gate_name(g.kind)}, {"qubits", g.qubits}};
    if (g.angle) {
        j["angle"] = *g.angle;
    }
    if (!g.pauli_axis.empty()) {
        j["pauli_axis"] = g.pauli_axis;
    }
    return j;
}

inline json circuit_to_json(const ParametrizedCircuit &c) {
    json prep = json::array();
    for (const auto &g : c.prep) {
        prep.push_back(to_json(g));
    }
    json slots = json::array();
    for (const auto &slot : c.slots) {
        if (const auto *g = std::get_if<GateOp>(&slot)) {
            slots.push_back(to_json(*g));
        } else {
            const auto &r = std::get<RotationSlot>(slot);
            json j = {{"name", gate_name(r.kind)},
                      {"qubits", r.qubits},
                      {"parameter_index", r.parameter_index},
                      {"scale", r.scale}};
            if (!r.pauli_axis.empty()) {
                j["pauli_axis"] = r.pauli_axis;
            }
            slots.push_back(std::move(j));
        }
    }
    const std::vector<double> zeros(static_cast<std::size_t>(c.n_params), 0.0);
    const auto counts = count_gates(bind_params(c, zeros), c.n_qubits);
    return {{"ansatz", ansatz_name(c.kind)},
            {"n_qubits", c.n_qubits},
            {"n_params", c.n_params},
            {"prep", prep},
            {"gates", slots},
            {"decomposed_counts",
             {{"single_qubit", counts.single_qubit}, {"two_qubit", counts.two_qubit}, {"depth", counts.depth}}}};
}

} // namespace noisy_vqe::io
