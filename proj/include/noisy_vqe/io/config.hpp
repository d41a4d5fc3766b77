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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <toml.hpp>

#include "noisy_vqe/io/json.hpp"

namespace noisy_vqe::io {

enum class ExperimentKind { EXACT_SPECTRUM, VQE, OPTIMIZER_BAKEOFF, SWEEP, RECALC, FIT, SPLITTING };

inline constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kExperimentNames{{
    {ExperimentKind::EXACT_SPECTRUM, "EXACT_SPECTRUM"},
    {ExperimentKind::VQE, "VQE"},
    {ExperimentKind::OPTIMIZER_BAKEOFF, "OPTIMIZER_BAKEOFF"},
    {ExperimentKind::SWEEP, "SWEEP"},
    {ExperimentKind::RECALC, "RECALC"},
    {ExperimentKind::FIT, "FIT"},
    {ExperimentKind::SPLITTING, "SPLITTING"},
}};

inline std::string_view experiment_name(ExperimentKind k) {
    for (const auto &[kind, name] : kExperimentNames) {
        if (kind == k) {
            return name;
        }
    }
    throw std::invalid_argument("unknown experiment kind");
}

inline ExperimentKind experiment_kind_from_name(std::string_view name) {
    for (const auto &[kind, n] : kExperimentNames) {
        if (n == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown experiment: " + std::string(name));
}

struct VqeSection {
    std::uint64_t seed = 0;
    std::vector<double> theta0; // empty: random_angles(n, hash64(seed, 3, 0))
};

struct BakeoffSection {
    std::vector<OptimizerKind> optimizers{OptimizerKind::NFT, OptimizerKind::SPSA, OptimizerKind::SPSA_REOPT,
                                          OptimizerKind::NELDER_MEAD, OptimizerKind::ADAM};
    int repetitions = 10;
    std::uint64_t seed = 0;
};

struct FitSection {
    std::string input_dir;
    std::vector<FitModel> models{FitModel::LINEAR, FitModel::ERF};
};

struct SplittingSection {
    std::string input_dir;
    std::optional<double> intensity; // unset: every intensity
};

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::EXACT_SPECTRUM;
    std::string output_dir; // empty: runs/<config hash>
    std::optional<Hamiltonian> hamiltonian; // unset: the built-in H2 Hamiltonian
    std::optional<AnsatzKind> ansatz;
    std::optional<OptimizerConfig> optimizer;
    std::optional<BackendConfig> backend;
    std::optional<VqeSection> vqe;
    std::optional<BakeoffSection> bakeoff;
    std::optional<SweepConfig> sweep; // ansatz and optimizer copied in from their sections
    bool keep_traces = false;
    std::optional<FitSection> fit;
    std::optional<SplittingSection> splitting;

    [[nodiscard]] Hamiltonian hamiltonian_or_default() const { return hamiltonian ? *hamiltonian : h2_hamiltonian(); }
};

/// Which top-level sections an experiment needs (required) and may use.
struct SectionRule {
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

inline SectionRule section_rule(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::EXACT_SPECTRUM:
        return {{}, {"hamiltonian", "ansatz"}};
    case ExperimentKind::VQE:
        return {{"ansatz", "optimizer", "backend"}, {"vqe"}};
    case ExperimentKind::OPTIMIZER_BAKEOFF:
        return {{"ansatz", "optimizer", "backend"}, {"bakeoff"}};
    case ExperimentKind::SWEEP:
    case ExperimentKind::RECALC:
        return {{"ansatz", "optimizer", "sweep"}, {}};
    case ExperimentKind::FIT:
        return {{"fit"}, {}};
    case ExperimentKind::SPLITTING:
        return {{"splitting"}, {}};
    }
    return {};
}

// Parsing -------------------------------------------------------------------

/// Line of each dotted key path in the source file.
using SourceLines = std::map<std::string, int>;

/// Config problem with the source line it anchors to (0 when unknown).
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &file, int line, const std::string &message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), line_(line) {}

    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

namespace detail {

inline json toml_to_json(const toml::node &node, const std::string &path, SourceLines &lines) {
    if (const auto *t = node.as_table()) {
        json j = json::object();
        for (const auto &[key, value] : *t) {
            const auto child = join_path(path, std::string(key.str()));
            lines[child] = static_cast<int>(key.source().begin.line);
            j[std::string(key.str())] = toml_to_json(value, child, lines);
        }
        return j;
    }
    if (const auto *a = node.as_array()) {
        json j = json::array();
        for (std::size_t i = 0; i < a->size(); ++i) {
            const auto child = path + "[" + std::to_string(i) + "]";
            lines[child] = static_cast<int>((*a)[i].source().begin.line);
            j.push_back(toml_to_json((*a)[i], child, lines));
        }
        return j;
    }
    if (const auto *v = node.as_integer()) {
        return v->get();
    }
    if (const auto *v = node.as_floating_point()) {
        return v->get();
    }
    if (const auto *v = node.as_boolean()) {
        return v->get();
    }
    if (const auto *v = node.as_string()) {
        return v->get();
    }
    throw SchemaError(path, "dates and times are not supported");
}

inline int line_at(const std::string &text, std::size_t pos) {
    int line = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
        line += text[i] == '\n' ? 1 : 0;
    }
    return line;
}

// JSON carries no positions; each key is located by searching for "key":
// after its parent's position.
inline void json_key_lines(const json &j, const std::string &text, std::size_t from, const std::string &path,
                           SourceLines &lines) {
    if (!j.is_object()) {
        return;
    }
    for (const auto &item : j.items()) {
        std::size_t pos = from;
        const auto needle = json(item.key()).dump();
        while ((pos = text.find(needle, pos)) != std::string::npos) {
            auto after = text.find_first_not_of(" \t\r\n", pos + needle.size());
            if (after != std::string::npos && text[after] == ':') {
                break;
            }
            pos += needle.size();
        }
        const auto child = join_path(path, item.key());
        if (pos == std::string::npos) {
            continue;
        }
        lines[child] = line_at(text, pos);
        json_key_lines(item.value(), text, pos, child, lines);
    }
}

// Longest known prefix of `path` ("sweep.intensities[3]" falls back to "sweep.intensities").
inline int lookup_line(const SourceLines &lines, std::string path) {
    while (!path.empty()) {
        if (auto it = lines.find(path); it != lines.end()) {
            return it->second;
        }
        const auto cut = path.find_last_of(".[");
        if (cut == std::string::npos) {
            break;
        }
        path.resize(cut);
    }
    return 1;
}

} // namespace detail

struct ParsedDocument {
    json doc;
    SourceLines lines;
};

inline bool is_json_path(const std::filesystem::path &p) { return p.extension() == ".json"; }

/// Parses TOML (or JSON for *.json) into a JSON tree plus key lines.
inline ParsedDocument parse_document(const std::string &text, const std::string &file, bool as_json) {
    ParsedDocument out;
    if (as_json) {
        try {
            out.doc = json::parse(text);
        } catch (const json::parse_error &e) {
            throw ConfigError(file, detail::line_at(text, e.byte > 0 ? e.byte - 1 : 0), "parse error: " + std::string(e.what()));
        }
        if (!out.doc.is_object()) {
            throw ConfigError(file, 1, "top level must be an object");
        }
        detail::json_key_lines(out.doc, text, 0, "", out.lines);
        return out;
    }
    try {
        const auto table = toml::parse(text, file);
        out.doc = detail::toml_to_json(table, "", out.lines);
    } catch (const toml::parse_error &e) {
        throw ConfigError(file, static_cast<int>(e.source().begin.line), "parse error: " + std::string(e.description()));
    } catch (const SchemaError &e) {
        throw ConfigError(file, detail::lookup_line(out.lines, e.path()), e.message());
    }
    return out;
}

namespace detail {

inline RunConfig read_run_config(const Reader &top) {
    RunConfig c;
    c.experiment = top.get_enum(std::string("experiment"), experiment_kind_from_name);
    c.output_dir = top.get_or("output_dir", std::string());

    const auto rule = section_rule(c.experiment);
    for (const auto &s : rule.required) {
        if (!top.has(s)) {
            throw SchemaError("experiment", "experiment " + std::string(experiment_name(c.experiment)) +
                                                " needs a [" + s + "] section");
        }
    }
    auto allowed = [&rule](const std::string &s) {
        return std::find(rule.required.begin(), rule.required.end(), s) != rule.required.end() ||
               std::find(rule.optional.begin(), rule.optional.end(), s) != rule.optional.end();
    };
    for (const auto *s : {"hamiltonian", "ansatz", "optimizer", "backend", "vqe", "bakeoff", "sweep", "fit", "splitting"}) {
        if (top.has(s) && !allowed(s)) {
            throw SchemaError(s, "section [" + std::string(s) + "] is not used by experiment " +
                                     std::string(experiment_name(c.experiment)));
        }
    }

    if (top.has("hamiltonian")) {
        const auto r = top.child("hamiltonian");
        c.hamiltonian = read_hamiltonian(r);
    }
    if (top.has("ansatz")) {
        const auto r = top.child("ansatz");
        c.ansatz = r.get_enum(std::string("kind"), ansatz_kind_from_name);
        r.finish();
    }
    if (top.has("optimizer")) {
        c.optimizer = read_optimizer_config(top.child("optimizer"));
    }
    if (top.has("backend")) {
        c.backend = read_backend_config(top.child("backend"));
    }
    if (c.experiment == ExperimentKind::VQE) {
        VqeSection v;
        if (top.has("vqe")) {
            const auto r = top.child("vqe");
            v.seed = r.get_or("seed", v.seed);
            v.theta0 = r.get_or("theta0", v.theta0);
            r.finish();
            if (!v.theta0.empty() && v.theta0.size() != static_cast<std::size_t>(build_ansatz(*c.ansatz, 4).n_params)) {
                throw SchemaError(r.path_of("theta0"), "length does not match the ansatz");
            }
        }
        c.vqe = v;
    }
    if (c.experiment == ExperimentKind::OPTIMIZER_BAKEOFF) {
        BakeoffSection b;
        if (top.has("bakeoff")) {
            const auto r = top.child("bakeoff");
            if (r.has("optimizers")) {
                b.optimizers.clear();
                const auto names = r.get<std::vector<std::string>>("optimizers");
                for (std::size_t i = 0; i < names.size(); ++i) {
                    try {
                        b.optimizers.push_back(optimizer_kind_from_name(names[i]));
                    } catch (const std::invalid_argument &e) {
                        throw SchemaError(r.path_of("optimizers") + "[" + std::to_string(i) + "]", e.what());
                    }
                }
                if (b.optimizers.empty()) {
                    throw SchemaError(r.path_of("optimizers"), "must not be empty");
                }
            }
            b.repetitions = r.get_or("repetitions", b.repetitions);
            b.seed = r.get_or("seed", b.seed);
            r.finish();
            if (b.repetitions < 1) {
                throw SchemaError(r.path_of("repetitions"), "must be >= 1");
            }
        }
        c.bakeoff = b;
    }
    if (top.has("sweep")) {
        const auto r = top.child("sweep");
        SweepConfig s;
        s.ansatz = *c.ansatz;
        s.optimizer = *c.optimizer;
        read_sweep_fields(r, s);
        c.keep_traces = r.get_or("keep_traces", false);
        r.finish();
        validated(r.path(), [&] { s.validate(); });
        c.sweep = s;
    }
    if (top.has("fit")) {
        const auto r = top.child("fit");
        FitSection f;
        f.input_dir = r.get<std::string>("input_dir");
        if (r.has("models")) {
            f.models.clear();
            const auto names = r.get<std::vector<std::string>>("models");
            for (std::size_t i = 0; i < names.size(); ++i) {
                try {
                    f.models.push_back(fit_model_from_name(names[i]));
                } catch (const std::invalid_argument &e) {
                    throw SchemaError(r.path_of("models") + "[" + std::to_string(i) + "]", e.what());
                }
            }
        }
        r.finish();
        c.fit = f;
    }
    if (top.has("splitting")) {
        const auto r = top.child("splitting");
        SplittingSection s;
        s.input_dir = r.get<std::string>("input_dir");
        if (r.has("intensity")) {
            s.intensity = r.get<double>("intensity");
        }
        r.finish();
        c.splitting = s;
    }
    top.finish();
    return c;
}

} // namespace detail

/// Strict schema check: unknown keys, wrong types, missing or unused sections
/// all raise ConfigError anchored at the offending line.
inline RunConfig parse_run_config(const std::string &text, const std::string &file, bool as_json) {
    const auto parsed = parse_document(text, file, as_json);
    try {
        return detail::read_run_config(Reader(parsed.doc, ""));
    } catch (const SchemaError &e) {
        std::string msg = e.message();
        if (!e.path().empty() && msg.rfind("unknown key", 0) != 0) {
            msg = e.path() + ": " + msg;
        }
        throw ConfigError(file, detail::lookup_line(parsed.lines, e.path()), msg);
    }
}

inline RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string(), 0, "cannot read config file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.string(), is_json_path(path));
}

// Normalized form and hash ----------------------------------------------------

/// Every field with defaults filled in; output_dir excluded. Parsing this
/// document yields the same RunConfig.
inline json normalized_json(const RunConfig &c) {
    json j = {{"experiment", experiment_name(c.experiment)}};
    if (c.hamiltonian) {
        j["hamiltonian"] = to_json(*c.hamiltonian);
    }
    if (c.ansatz) {
        j["ansatz"] = {{"kind", ansatz_name(*c.ansatz)}};
    }
    if (c.optimizer) {
        j["optimizer"] = to_json(*c.optimizer);
    }
    if (c.backend) {
        j["backend"] = to_json(*c.backend);
    }
    if (c.vqe) {
        j["vqe"] = {{"seed", c.vqe->seed}, {"theta0", c.vqe->theta0}};
    }
    if (c.bakeoff) {
        json names = json::array();
        for (auto k : c.bakeoff->optimizers) {
            names.push_back(optimizer_name(k));
        }
        j["bakeoff"] = {{"optimizers", names}, {"repetitions", c.bakeoff->repetitions}, {"seed", c.bakeoff->seed}};
    }
    if (c.sweep) {
        j["sweep"] = sweep_fields_to_json(*c.sweep);
        j["sweep"]["keep_traces"] = c.keep_traces;
    }
    if (c.fit) {
        json names = json::array();
        for (auto m : c.fit->models) {
            names.push_back(fit_model_name(m));
        }
        j["fit"] = {{"input_dir", c.fit->input_dir}, {"models", names}};
    }
    if (c.splitting) {
        j["splitting"] = {{"input_dir", c.splitting->input_dir}};
        if (c.splitting->intensity) {
            j["splitting"]["intensity"] = *c.splitting->intensity;
        }
    }
    return j;
}

/// FNV-1a over the canonical dump (object keys sorted), as 16 hex digits.
inline std::string config_hash(const RunConfig &c) {
    const auto text = normalized_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace noisy_vqe::io
