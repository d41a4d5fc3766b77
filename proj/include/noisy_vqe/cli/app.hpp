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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "noisy_vqe/io/config.hpp"
#include "noisy_vqe/io/csv.hpp"
#include "noisy_vqe/io/json.hpp"
#include "noisy_vqe/io/report.hpp"

namespace noisy_vqe::cli {

namespace fs = std::filesystem;
using io::json;

inline constexpr const char *kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Every file of a run goes through one writer: a mutex serializes writes
/// from sweep workers, and each file is written to a temporary name first and
/// renamed into place.
class ArtifactWriter {
  public:
    explicit ArtifactWriter(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

    [[nodiscard]] const fs::path &root() const { return root_; }

    void write(const std::string &relative, const std::string &content) {
        const std::lock_guard lock(mutex_);
        const auto target = root_ / relative;
        fs::create_directories(target.parent_path());
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
            if (!out) {
                throw std::runtime_error("cannot write " + target.string());
            }
        }
        fs::rename(tmp, target);
        written_.insert(relative);
    }

    void write_json(const std::string &relative, const json &j) { write(relative, j.dump(2) + "\n"); }

    void write_csv(const std::string &relative, const io::CsvTable &t) {
        std::ostringstream ss;
        io::write_csv(ss, t);
        write(relative, ss.str());
    }

    [[nodiscard]] std::vector<std::string> written() const {
        const std::lock_guard lock(mutex_);
        return {written_.begin(), written_.end()};
    }

  private:
    fs::path root_;
    mutable std::mutex mutex_;
    std::set<std::string> written_;
};

struct NoiseOverrides {
    std::optional<double> p_readout;
    std::optional<double> p_dep1;
    std::optional<double> p_dep2;
    std::optional<double> p_amp;
    std::optional<double> p_phase;
    std::optional<double> epsilon;

    [[nodiscard]] bool any() const { return p_readout || p_dep1 || p_dep2 || p_amp || p_phase || epsilon; }

    void apply(NoiseModel &m) const {
        m.p_readout = p_readout.value_or(m.p_readout);
        m.p_dep1 = p_dep1.value_or(m.p_dep1);
        m.p_dep2 = p_dep2.value_or(m.p_dep2);
        m.p_amp = p_amp.value_or(m.p_amp);
        m.p_phase = p_phase.value_or(m.p_phase);
        m.epsilon = epsilon.value_or(m.epsilon);
    }
};

struct RunOptions {
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    int workers = default_workers();
    bool dump_circuit = false;
    bool verbose = false;
    NoiseOverrides noise;
};

/// Command-line overrides; the result is what gets hashed.
inline void apply_overrides(io::RunConfig &cfg, const RunOptions &opt) {
    const std::string file = opt.config_path;
    if (opt.seed) {
        if (cfg.sweep) {
            cfg.sweep->seed_base = *opt.seed;
        } else if (cfg.vqe) {
            cfg.vqe->seed = *opt.seed;
        } else if (cfg.bakeoff) {
            cfg.bakeoff->seed = *opt.seed;
        } else {
            throw io::ConfigError(file, 0, "--seed has no effect on experiment " +
                                               std::string(io::experiment_name(cfg.experiment)));
        }
    }
    if (opt.noise.any()) {
        NoiseModel *target = cfg.sweep ? &cfg.sweep->fixed_noise : cfg.backend ? &cfg.backend->noise : nullptr;
        if (target == nullptr) {
            throw io::ConfigError(file, 0, "noise overrides need a [backend] or [sweep] section");
        }
        opt.noise.apply(*target);
        try {
            if (cfg.sweep) {
                cfg.sweep->validate();
            } else {
                if (cfg.backend->mode != BackendMode::NOISY && !cfg.backend->noise.is_noiseless()) {
                    cfg.backend->mode = BackendMode::NOISY;
                }
                cfg.backend->validate();
            }
        } catch (const std::invalid_argument &e) {
            throw io::ConfigError(file, 0, std::string("after noise overrides: ") + e.what());
        }
    }
}

namespace detail {

inline std::string fixed8(double x) { return io::svg::fixed(x, 8); }

inline json gate_counts_json(const GateCounts &g) {
    return {{"single_qubit", g.single_qubit}, {"two_qubit", g.two_qubit}, {"depth", g.depth}};
}

inline json channel_counts_json(const NoiseCounts &c) {
    return {{"gates", c.gates}, {"channels", c.channels}, {"readout_markers", c.readout_markers}};
}

inline std::string trace_name(std::size_t intensity_index, int repetition) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "traces/i%02zu_r%02d.csv", intensity_index, repetition);
    return buf;
}

inline json fits_json(std::span<const CurvePoint> pts, const std::vector<FitModel> &models) {
    json out = json::object();
    for (auto m : models) {
        try {
            out[std::string(fit_model_name(m))] = io::to_json(fit_noise_curve(pts, m));
        } catch (const FitError &e) {
            out[std::string(fit_model_name(m))] = {{"error", e.what()}};
        }
    }
    return out;
}

inline json stats_json(std::span<const IntensityStats> stats) {
    json out = json::array();
    for (const auto &s : stats) {
        out.push_back(io::to_json(s));
    }
    return out;
}

inline std::vector<SweepRow> load_sweep_rows(const fs::path &dir) {
    const auto path = dir / "sweep.csv";
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    auto rows = io::sweep_rows(io::read_csv(in));
    if (rows.empty()) {
        throw std::runtime_error(path.string() + " has no rows");
    }
    return rows;
}

struct RunContext {
    const io::RunConfig &cfg;
    const RunOptions &opt;
    ArtifactWriter &writer;
    std::ostream &out;
    json summary = json::object();
    json seeds = json::object();
};

inline void run_exact_spectrum(RunContext &ctx) {
    const auto h = ctx.cfg.hamiltonian_or_default();
    const auto spectrum = exact_spectrum(h);
    ctx.writer.write_json("hamiltonian.json", io::to_json(h));
    ctx.summary["ground_energy"] = spectrum.front();
    ctx.summary["spectrum"] = spectrum;
    ctx.summary["n_qubits"] = h.n_qubits();
    ctx.out << "ground energy " << io::format_number(spectrum.front()) << " Ha\n";
}

inline void run_single_vqe(RunContext &ctx) {
    const auto &cfg = ctx.cfg;
    const auto h = cfg.hamiltonian_or_default();
    const auto circuit = build_ansatz(*cfg.ansatz, h.n_qubits());
    auto theta0 = cfg.vqe->theta0;
    if (theta0.empty()) {
        theta0 = random_angles(static_cast<std::size_t>(circuit.n_params), hash64(cfg.vqe->seed, 3, 0));
    }
    const auto r = run_vqe(*cfg.ansatz, *cfg.optimizer, *cfg.backend, theta0, cfg.vqe->seed, h);
    ctx.writer.write_csv("trace.csv", io::trace_table(r.trace.records));

    const double recalculated = estimate_energy(circuit, r.final_params, h, BackendConfig::exact()).value;
    ctx.seeds = {{"seed", r.seed}, {"backend_seed", r.backend_seed}, {"optimizer_seed", r.optimizer_seed}};
    ctx.summary["theta0"] = r.theta0;
    ctx.summary["final_params"] = r.final_params;
    ctx.summary["final_energy"] = r.final_energy;
    ctx.summary["best_seen_energy"] = r.best_seen_energy;
    ctx.summary["recalculated_final_energy"] = recalculated;
    ctx.summary["iterations"] = r.trace.records.size();
    ctx.summary["total_evals"] = r.trace.total_evals;
    ctx.summary["terminated_by"] = termination_name(r.trace.terminated_by);
    ctx.summary["nft_model"] = nft_model_name(r.nft_model);
    ctx.summary["gate_counts"] = gate_counts_json(r.gate_counts);
    ctx.summary["channel_counts"] = channel_counts_json(r.channel_counts);
    ctx.out << "final energy " << io::format_number(r.final_energy) << " Ha (noiseless "
            << io::format_number(recalculated) << ")\n";

    if (ctx.opt.verbose) {
        auto backend = *cfg.backend;
        backend.rng_seed = r.backend_seed;
        const auto est = estimate_energy(circuit, r.final_params, h, backend, r.trace.total_evals + 1);
        std::vector<std::vector<std::string>> cells;
        json terms = json::array();
        for (const auto &t : est.per_term) {
            cells.push_back({t.term.paulis, fixed8(t.term.coefficient), fixed8(t.estimate),
                             fixed8(t.term.coefficient * t.estimate)});
            terms.push_back({{"paulis", t.term.paulis}, {"coefficient", t.term.coefficient}, {"estimate", t.estimate}});
        }
        ctx.out << io::text_table({"term", "coefficient", "<P>", "contribution"}, cells);
        ctx.summary["per_term"] = terms;
    }
}

inline void run_bakeoff(RunContext &ctx) {
    const auto &cfg = ctx.cfg;
    const auto h = cfg.hamiltonian_or_default();
    const auto n_params = static_cast<std::size_t>(build_ansatz(*cfg.ansatz, h.n_qubits()).n_params);
    std::vector<io::BakeoffRow> rows;
    json per_optimizer = json::array();
    std::vector<std::vector<std::string>> cells;
    for (auto kind : cfg.bakeoff->optimizers) {
        auto oc = *cfg.optimizer;
        oc.kind = kind;
        std::vector<double> finals;
        for (int rep = 0; rep < cfg.bakeoff->repetitions; ++rep) {
            const std::uint64_t seed = hash64(cfg.bakeoff->seed, static_cast<std::uint64_t>(rep), 0);
            const auto theta0 = random_angles(n_params, hash64(seed, 3, 0));
            const auto r = run_vqe(*cfg.ansatz, oc, *cfg.backend, theta0, seed, h);
            rows.push_back({kind, rep, r.final_energy, r.best_seen_energy, r.trace.total_evals, seed});
            ctx.writer.write_csv("traces/" + std::string(optimizer_name(kind)) + "_r" + std::to_string(rep) + ".csv",
                                 io::trace_table(r.trace.records));
            finals.push_back(r.final_energy);
        }
        double mean = 0.0;
        for (double e : finals) {
            mean += e / static_cast<double>(finals.size());
        }
        double ss = 0.0;
        for (double e : finals) {
            ss += (e - mean) * (e - mean);
        }
        const double sd = finals.size() > 1 ? std::sqrt(ss / static_cast<double>(finals.size() - 1)) : 0.0;
        const double best = *std::min_element(finals.begin(), finals.end());
        per_optimizer.push_back({{"optimizer", optimizer_name(kind)}, {"mean", mean}, {"stddev", sd}, {"best", best}});
        cells.push_back({std::string(optimizer_name(kind)), fixed8(mean), fixed8(sd), fixed8(best)});
    }
    ctx.writer.write_csv("bakeoff.csv", io::bakeoff_table(rows));
    ctx.summary["optimizers"] = per_optimizer;
    ctx.seeds = {{"seed", cfg.bakeoff->seed}, {"run_seed", "hash64(seed, repetition, 0)"}};
    ctx.out << io::text_table({"optimizer", "mean", "std", "best"}, cells);
}

inline void run_sweep(RunContext &ctx, bool recalc) {
    const auto &cfg = ctx.cfg;
    const auto &sc = *cfg.sweep;
    const bool keep = cfg.keep_traces || recalc;
    const std::size_t n_cells = sc.intensities.size() * static_cast<std::size_t>(sc.repetitions);
    std::size_t done = 0;
    auto on_row = [&](const SweepRow &row) {
        ++done;
        const auto ii = static_cast<std::size_t>(
            std::find(sc.intensities.begin(), sc.intensities.end(), row.intensity) - sc.intensities.begin());
        if (keep) {
            ctx.writer.write_csv(trace_name(ii, row.repetition), io::trace_table(row.trace.records));
        }
        if (ctx.opt.verbose) {
            ctx.out << "cell " << done << "/" << n_cells << " intensity " << io::format_number(row.intensity)
                    << " repetition " << row.repetition << " energy " << io::format_number(row.final_energy) << "\n";
        }
    };
    const auto result = run_noise_sweep(sc, ctx.opt.workers, keep, on_row);
    ctx.writer.write_csv("sweep.csv", io::sweep_table(result.rows));

    const auto pts = io::curve_points(result.stats);
    ctx.summary["stats"] = stats_json(result.stats);
    ctx.summary["fits"] = fits_json(pts, {FitModel::LINEAR, FitModel::ERF});
    ctx.seeds = {{"seed_base", sc.seed_base},
                 {"cell_seed", "hash64(seed_base, intensity_index, repetition)"},
                 {"theta0", sc.init_mode == InitMode::FIXED ? json(fixed_theta0(sc)) : json("hash64(cell_seed, 3, 0)")}};

    std::vector<std::vector<std::string>> cells;
    for (const auto &s : result.stats) {
        cells.push_back({io::format_number(s.intensity), std::to_string(s.n), fixed8(s.mean), fixed8(s.stddev)});
    }
    ctx.out << io::text_table({"intensity", "n", "mean", "std"}, cells);

    if (!recalc) {
        return;
    }
    const auto h = cfg.hamiltonian_or_default();
    const auto circuit = build_ansatz(sc.ansatz, h.n_qubits());
    std::vector<io::RecalcRow> recalc_rows;
    json per_intensity = json::array();
    for (double p : sc.intensities) {
        int hits = 0;
        int total = 0;
        double mean = 0.0;
        for (const auto &row : result.rows) {
            if (row.intensity != p) {
                continue;
            }
            const auto points = recalculate_trace(row.trace, sc.ansatz, h);
            for (std::size_t i = 0; i < points.size(); ++i) {
                recalc_rows.push_back({p, row.repetition, points[i].iteration, row.trace.records[i].energy, points[i].energy});
            }
            const double final_exact = estimate_energy(circuit, row.final_params, h, BackendConfig::exact()).value;
            hits += final_exact <= kH2GroundEnergy + kChemicalAccuracy ? 1 : 0;
            ++total;
            mean += final_exact;
        }
        per_intensity.push_back({{"intensity", p},
                                 {"within_chemical_accuracy", hits},
                                 {"repetitions", total},
                                 {"fraction", static_cast<double>(hits) / total},
                                 {"mean_recalculated_final_energy", mean / total}});
    }
    ctx.writer.write_csv("recalc.csv", io::recalc_table(recalc_rows));
    ctx.summary["recalc"] = per_intensity;
}

inline void run_fit(RunContext &ctx) {
    const auto rows = load_sweep_rows(ctx.cfg.fit->input_dir);
    const auto stats = compute_stats(rows, io::sweep_intensities(rows));
    ctx.summary["input_dir"] = ctx.cfg.fit->input_dir;
    ctx.summary["stats"] = stats_json(stats);
    ctx.summary["fits"] = fits_json(io::curve_points(stats), ctx.cfg.fit->models);
    for (const auto &[model, fit] : ctx.summary["fits"].items()) {
        ctx.out << model << ": " << fit.dump() << "\n";
    }
}

inline void run_splitting(RunContext &ctx) {
    const auto &sp = *ctx.cfg.splitting;
    const auto rows = load_sweep_rows(sp.input_dir);
    auto intensities = io::sweep_intensities(rows);
    if (sp.intensity) {
        if (std::find(intensities.begin(), intensities.end(), *sp.intensity) == intensities.end()) {
            throw std::runtime_error("intensity " + io::format_number(*sp.intensity) + " not present in sweep.csv");
        }
        intensities = {*sp.intensity};
    }
    json results = json::array();
    for (double p : intensities) {
        std::vector<double> energies;
        std::vector<std::vector<double>> params;
        for (const auto &r : rows) {
            if (r.intensity == p) {
                energies.push_back(r.final_energy);
                params.push_back(r.final_params);
            }
        }
        json entry = {{"intensity", p}};
        try {
            const auto s = detect_level_splitting(energies, params);
            entry["result"] = io::to_json(s);
            ctx.out << "intensity " << io::format_number(p) << ": " << s.levels << " level(s), gap "
                    << io::format_number(s.gap) << ", period check " << (s.param_period_check ? "true" : "false") << "\n";
        } catch (const std::invalid_argument &e) {
            entry["error"] = e.what();
        }
        results.push_back(std::move(entry));
    }
    ctx.summary["input_dir"] = sp.input_dir;
    ctx.summary["splitting"] = results;
}

inline json versions_json() {
    return {{"noisy_vqe", kVersion},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                  "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"tomlplusplus", std::to_string(TOML_LIB_MAJOR) + "." + std::to_string(TOML_LIB_MINOR) + "." +
                                 std::to_string(TOML_LIB_PATCH)},
            {"compiler", __VERSION__},
            {"cplusplus", __cplusplus}};
}

} // namespace detail

/// Loads, validates and executes one experiment. Exit 2 on config errors
/// (diagnostic "file:line: message" on `err`), 1 on runtime errors.
inline int cmd_run(const RunOptions &opt, std::ostream &out, std::ostream &err) {
    io::RunConfig cfg;
    std::string hash;
    try {
        cfg = io::load_run_config(opt.config_path);
        apply_overrides(cfg, opt);
        if (opt.dump_circuit && !cfg.ansatz) {
            throw io::ConfigError(opt.config_path, 0, "--dump-circuit needs an [ansatz] section");
        }
        if (opt.workers < 1) {
            throw io::ConfigError(opt.config_path, 0, "--workers must be >= 1");
        }
        hash = io::config_hash(cfg);
    } catch (const io::ConfigError &e) {
        err << e.what() << "\n";
        return kExitConfig;
    }

    try {
        fs::path dir = !opt.output_dir.empty() ? fs::path(opt.output_dir)
                       : !cfg.output_dir.empty() ? fs::path(cfg.output_dir)
                                                 : fs::path("runs") / hash;
        ArtifactWriter writer(dir);
        detail::RunContext ctx{cfg, opt, writer, out};
        if (opt.dump_circuit) {
            writer.write_json("circuit.json", io::circuit_to_json(build_ansatz(*cfg.ansatz, cfg.hamiltonian_or_default().n_qubits())));
        }
        switch (cfg.experiment) {
        case io::ExperimentKind::EXACT_SPECTRUM:
            detail::run_exact_spectrum(ctx);
            break;
        case io::ExperimentKind::VQE:
            detail::run_single_vqe(ctx);
            break;
        case io::ExperimentKind::OPTIMIZER_BAKEOFF:
            detail::run_bakeoff(ctx);
            break;
        case io::ExperimentKind::SWEEP:
            detail::run_sweep(ctx, false);
            break;
        case io::ExperimentKind::RECALC:
            detail::run_sweep(ctx, true);
            break;
        case io::ExperimentKind::FIT:
            detail::run_fit(ctx);
            break;
        case io::ExperimentKind::SPLITTING:
            detail::run_splitting(ctx);
            break;
        }
        ctx.summary["experiment"] = io::experiment_name(cfg.experiment);
        ctx.summary["reference_ground_energy"] = kH2GroundEnergy;
        writer.write_json("summary.json", ctx.summary);

        auto artifacts = writer.written();
        artifacts.emplace_back("metadata.json");
        std::sort(artifacts.begin(), artifacts.end());
        writer.write_json("metadata.json", {{"config_hash", hash},
                                            {"experiment", io::experiment_name(cfg.experiment)},
                                            {"config", io::normalized_json(cfg)},
                                            {"seeds", ctx.seeds},
                                            {"versions", detail::versions_json()},
                                            {"artifacts", artifacts}});
        out << "wrote " << dir.string() << "\n";
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

inline const std::vector<std::string> &report_kinds() {
    static const std::vector<std::string> kinds{"heatmap", "noise_curve", "trace", "histogram"};
    return kinds;
}

/// Renders SVG figures and text tables into run_dir. Empty `kinds` means
/// every kind whose inputs exist. Missing inputs: exit 1 listing them.
inline int cmd_report(const std::string &run_dir, std::vector<std::string> kinds, std::ostream &out, std::ostream &err) {
    const fs::path dir(run_dir);
    if (!fs::is_directory(dir)) {
        err << "error: run directory " << run_dir << " does not exist\n";
        return kExitRuntime;
    }
    for (const auto &k : kinds) {
        if (std::find(report_kinds().begin(), report_kinds().end(), k) == report_kinds().end()) {
            err << "error: unknown report kind '" << k << "' (expected heatmap, noise_curve, trace, histogram)\n";
            return kExitConfig;
        }
    }
    const bool has_sweep = fs::exists(dir / "sweep.csv");
    const bool has_recalc = fs::exists(dir / "recalc.csv");
    const bool has_trace = fs::exists(dir / "trace.csv");
    if (kinds.empty()) {
        for (const auto &k : report_kinds()) {
            if (k == "trace" ? (has_recalc || has_trace) : has_sweep) {
                kinds.push_back(k);
            }
        }
        if (kinds.empty()) {
            err << "error: no reportable artifacts in " << run_dir << " (need sweep.csv, recalc.csv or trace.csv)\n";
            return kExitRuntime;
        }
    }
    std::set<std::string> missing;
    for (const auto &k : kinds) {
        if (k == "trace" && !has_recalc && !has_trace) {
            missing.insert("recalc.csv (or trace.csv)");
        } else if (k != "trace" && !has_sweep) {
            missing.insert("sweep.csv");
        }
    }
    if (!missing.empty()) {
        err << "error: missing artifacts in " << run_dir << ":\n";
        for (const auto &m : missing) {
            err << "  " << m << "\n";
        }
        return kExitRuntime;
    }

    try {
        io::RunLabels labels;
        if (std::ifstream meta(dir / "metadata.json"); meta) {
            const auto j = json::parse(meta, nullptr, false);
            if (!j.is_discarded() && j.contains("config")) {
                const auto &c = j["config"];
                if (c.contains("sweep") && c["sweep"].contains("axis")) {
                    labels.axis = c["sweep"]["axis"].get<std::string>();
                }
                if (c.contains("ansatz") && c["ansatz"].contains("kind")) {
                    labels.ansatz = c["ansatz"]["kind"].get<std::string>();
                }
            }
        }
        ArtifactWriter writer(dir);
        std::vector<SweepRow> rows;
        if (has_sweep) {
            rows = detail::load_sweep_rows(dir);
        }
        for (const auto &k : kinds) {
            io::Figure fig;
            if (k == "noise_curve") {
                fig = io::render_noise_curve(rows, labels);
            } else if (k == "heatmap") {
                fig = io::render_heatmap(rows, labels);
            } else if (k == "histogram") {
                fig = io::render_histogram(rows, labels);
            } else if (has_recalc) {
                std::ifstream in(dir / "recalc.csv");
                const auto rr = io::recalc_rows(io::read_csv(in));
                if (rr.empty()) {
                    throw std::runtime_error("recalc.csv has no rows");
                }
                fig = io::render_recalc_trace(rr, labels);
            } else {
                std::ifstream in(dir / "trace.csv");
                fig = io::render_single_trace(io::trace_records(io::read_csv(in)), labels);
            }
            writer.write(k + ".svg", fig.svg);
            writer.write(k + ".txt", fig.table);
            out << "wrote " << (dir / (k + ".svg")).string() << "\n" << fig.table;
        }
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace noisy_vqe::cli
