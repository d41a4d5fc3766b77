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

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "noisy_vqe/io/config.hpp"
#include "noisy_vqe/io/csv.hpp"
#include "noisy_vqe/io/json.hpp"
#include "noisy_vqe/io/report.hpp"

namespace nv = noisy_vqe;
namespace io = noisy_vqe::io;
using io::json;

namespace {

template <typename T, typename R>
T reparse(const json &j, R read) {
    // Through text, as on disk.
    const auto back = json::parse(j.dump());
    return read(io::Reader(back, ""));
}

io::CsvTable through_text(const io::CsvTable &t) {
    std::stringstream ss;
    io::write_csv(ss, t);
    return io::read_csv(ss);
}

int error_line(const std::string &text, bool as_json) {
    try {
        (void)io::parse_run_config(text, "cfg", as_json);
    } catch (const io::ConfigError &e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string &text, bool as_json) {
    try {
        (void)io::parse_run_config(text, "cfg", as_json);
    } catch (const io::ConfigError &e) {
        return e.what();
    }
    return "";
}

const char *kSweepToml = R"(experiment = "SWEEP"
output_dir = "out"

[ansatz]
kind = "RY"

[optimizer]
kind = "NFT"
max_iterations = 16

[optimizer.nft]
reset_interval = 8

[sweep]
axis = "DEP2"
intensities = [0, 0.01, 0.05]
repetitions = 3
shots = 512
seed_base = 7

[sweep.fixed_noise]
p_readout = 0.03
)";

} // namespace

TEST(JsonRoundTrip, NoiseModel) {
    nv::NoiseModel m{0.03, 0.001, 0.01, 0.02, 0.05, 0.1};
    const auto back = reparse<nv::NoiseModel>(io::to_json(m), io::read_noise_model);
    EXPECT_EQ(back.p_readout, m.p_readout);
    EXPECT_EQ(back.p_dep1, m.p_dep1);
    EXPECT_EQ(back.p_dep2, m.p_dep2);
    EXPECT_EQ(back.p_amp, m.p_amp);
    EXPECT_EQ(back.p_phase, m.p_phase);
    EXPECT_EQ(back.epsilon, m.epsilon);
}

TEST(JsonRoundTrip, Hamiltonian) {
    const auto h = nv::h2_hamiltonian();
    const auto j = io::to_json(h);
    EXPECT_EQ(j["n_qubits"], 4);
    EXPECT_EQ(j["terms"].size(), 15u);
    const auto back = reparse<nv::Hamiltonian>(j, io::read_hamiltonian);
    ASSERT_EQ(back.terms().size(), h.terms().size());
    for (std::size_t i = 0; i < h.terms().size(); ++i) {
        EXPECT_EQ(back.terms()[i].paulis, h.terms()[i].paulis);
        EXPECT_EQ(back.terms()[i].coefficient, h.terms()[i].coefficient);
    }
}

TEST(JsonRoundTrip, HamiltonianRejectsBadStrings) {
    const json j = {{"n_qubits", 2}, {"terms", {{{"coeff", 1.0}, {"paulis", "ZQ"}}}}};
    EXPECT_THROW(io::read_hamiltonian(io::Reader(j, "hamiltonian")), io::SchemaError);
}

TEST(JsonRoundTrip, OptimizerConfig) {
    nv::OptimizerConfig c;
    c.kind = nv::OptimizerKind::SPSA_REOPT;
    c.limits.max_iterations = 77;
    c.limits.eval_budget = 1234;
    c.limits.seed = 99;
    c.nft.ordering = nv::NftOrdering::RANDOM_NO_REPLACEMENT;
    c.nft.model = nv::NftModel::TWO_HARMONIC;
    c.spsa.a = 0.3;
    c.spsa_reopt.coarse.c = 0.7;
    c.spsa_reopt.convergence_window = 4;
    c.nelder_mead.restart = false;
    c.adam.gradient_mode = nv::GradientMode::CENTRAL_DIFF;
    c.bayesian.upper = 3.0;
    const auto b = reparse<nv::OptimizerConfig>(io::to_json(c), io::read_optimizer_config);
    EXPECT_EQ(b.kind, c.kind);
    EXPECT_EQ(b.limits.max_iterations, 77);
    EXPECT_EQ(b.limits.eval_budget, c.limits.eval_budget);
    EXPECT_EQ(b.limits.seed, 99u);
    EXPECT_EQ(b.nft.ordering, c.nft.ordering);
    EXPECT_EQ(b.nft.model, c.nft.model);
    EXPECT_EQ(b.spsa, c.spsa);
    EXPECT_EQ(b.spsa_reopt.coarse, c.spsa_reopt.coarse);
    EXPECT_EQ(b.spsa_reopt.fine, c.spsa_reopt.fine);
    EXPECT_EQ(b.spsa_reopt.convergence_window, 4);
    EXPECT_EQ(b.nelder_mead.restart, false);
    EXPECT_EQ(b.adam.gradient_mode, c.adam.gradient_mode);
    EXPECT_EQ(b.bayesian.upper, 3.0);
}

TEST(JsonRoundTrip, SweepConfig) {
    nv::SweepConfig c;
    c.ansatz = nv::AnsatzKind::UCCSD;
    c.axis = nv::NoiseAxis::AMP;
    c.intensities = {0.0, 0.02, 0.08};
    c.fixed_noise.p_readout = 0.03;
    c.grouping = nv::NoiseGrouping::PerGate;
    c.repetitions = 5;
    c.shots = 8192;
    c.seed_base = 0xfedcba9876543210ULL;
    c.init_mode = nv::InitMode::RANDOM;
    c.theta0 = {0.1, -0.2, 0.3};
    const auto b = reparse<nv::SweepConfig>(io::to_json(c), io::read_sweep_config);
    EXPECT_EQ(b.ansatz, c.ansatz);
    EXPECT_EQ(b.axis, c.axis);
    EXPECT_EQ(b.intensities, c.intensities);
    EXPECT_EQ(b.fixed_noise.p_readout, 0.03);
    EXPECT_EQ(b.grouping, c.grouping);
    EXPECT_EQ(b.repetitions, 5);
    EXPECT_EQ(b.shots, 8192u);
    EXPECT_EQ(b.seed_base, c.seed_base);
    EXPECT_EQ(b.init_mode, c.init_mode);
    EXPECT_EQ(b.theta0, c.theta0);
}

TEST(JsonRoundTrip, BackendConfig) {
    auto b = nv::BackendConfig::noisy({0.01, 0.0, 0.02, 0.0, 0.0, 0.0}, 2048, 5);
    b.grouping = nv::NoiseGrouping::PerGate;
    const auto r = reparse<nv::BackendConfig>(io::to_json(b), io::read_backend_config);
    EXPECT_EQ(r.mode, b.mode);
    EXPECT_EQ(r.shots, b.shots);
    EXPECT_EQ(r.grouping, b.grouping);
    EXPECT_EQ(r.rng_seed, b.rng_seed);
    EXPECT_EQ(r.noise.p_dep2, 0.02);
}

TEST(JsonRoundTrip, IntensityStatsAndFits) {
    std::vector<nv::SweepRow> rows;
    for (int i = 0; i < 6; ++i) {
        rows.push_back({0.01, i, -1.1 + 0.013 * i, -1.11, {}, 0, {}});
        rows.push_back({0.05, i, -0.2 - 0.3 * i, -1.0, {}, 0, {}});
    }
    const std::vector<double> ps{0.01, 0.05};
    const auto stats = nv::compute_stats(rows, ps);
    for (const auto &s : stats) {
        EXPECT_EQ(reparse<nv::IntensityStats>(io::to_json(s), io::read_intensity_stats), s);
    }

    const std::vector<nv::CurvePoint> pts{{0, -1.1, 0}, {0.1, -0.9, 0}, {0.2, -0.72, 0}, {0.3, -0.61, 0}, {0.5, -0.5, 0}};
    for (auto model : {nv::FitModel::LINEAR, nv::FitModel::ERF}) {
        const auto f = nv::fit_noise_curve(pts, model);
        const auto b = reparse<nv::FitResult>(io::to_json(f), io::read_fit_result);
        EXPECT_EQ(b.model, f.model);
        EXPECT_EQ(b.coefficients, f.coefficients);
        EXPECT_EQ(b.residual_sum_squares, f.residual_sum_squares);
        EXPECT_EQ(b.r_squared, f.r_squared);
        EXPECT_EQ(b.iterations, f.iterations);
    }
}

TEST(JsonRoundTrip, FitWithoutRSquaredUsesNull) {
    nv::FitResult f;
    f.coefficients = {0.0, 1.0};
    f.r_squared = -std::numeric_limits<double>::infinity();
    const auto j = json::parse(io::to_json(f).dump());
    EXPECT_TRUE(j["r_squared"].is_null());
    EXPECT_EQ(io::read_fit_result(io::Reader(j, "")).r_squared, f.r_squared);
}

TEST(JsonRoundTrip, SplittingResult) {
    nv::SplittingResult s;
    s.levels = 2;
    s.centers = {-0.7, -0.55};
    s.gap = 0.15;
    s.within_std = {0.01, 0.02};
    s.sizes = {3, 2};
    s.assignment = {0, 1, 0, 0, 1};
    s.center_params = {{0.1, 0.2, 0.3}, {6.3, 0.2, -6.0}};
    s.param_period_check = true;
    const auto b = reparse<nv::SplittingResult>(io::to_json(s), io::read_splitting_result);
    EXPECT_EQ(b.levels, s.levels);
    EXPECT_EQ(b.centers, s.centers);
    EXPECT_EQ(b.gap, s.gap);
    EXPECT_EQ(b.within_std, s.within_std);
    EXPECT_EQ(b.sizes, s.sizes);
    EXPECT_EQ(b.assignment, s.assignment);
    EXPECT_EQ(b.center_params, s.center_params);
    EXPECT_EQ(b.param_period_check, s.param_period_check);
}

TEST(JsonRoundTrip, UnknownKeyRejected) {
    json j = io::to_json(nv::NoiseModel{});
    j["p_typo"] = 0.1;
    try {
        (void)io::read_noise_model(io::Reader(j, "backend.noise"));
        FAIL() << "expected SchemaError";
    } catch (const io::SchemaError &e) {
        EXPECT_EQ(e.path(), "backend.noise.p_typo");
    }
}

TEST(CircuitJson, ListsGatesWithParameterIndices) {
    const auto c = nv::build_ansatz(nv::AnsatzKind::UCCSD, 4);
    const auto j = io::circuit_to_json(c);
    EXPECT_EQ(j["ansatz"], "UCCSD");
    EXPECT_EQ(j["n_params"], 3);
    EXPECT_EQ(j["prep"].size(), 2u);
    std::set<int> indices;
    for (const auto &g : j["gates"]) {
        ASSERT_TRUE(g.contains("name"));
        ASSERT_TRUE(g.contains("qubits"));
        if (g.contains("parameter_index")) {
            indices.insert(g["parameter_index"].get<int>());
        }
    }
    EXPECT_EQ(indices, (std::set<int>{0, 1, 2}));
    EXPECT_GT(j["decomposed_counts"]["two_qubit"].get<int>(), 0);
}

TEST(Csv, NumbersRoundTripExactly) {
    for (double x : {0.1, -1.136189454088, 1e-300, 6.02214076e23, -0.0, 1.0 / 3.0}) {
        EXPECT_EQ(io::parse_field<double>(io::format_number(x)), x);
    }
    EXPECT_THROW(io::parse_field<double>("1.5x"), io::CsvError);
    EXPECT_THROW(io::parse_field<int>(""), io::CsvError);
}

TEST(Csv, SweepRowsRoundTrip) {
    std::vector<nv::SweepRow> rows;
    for (int i = 0; i < 3; ++i) {
        rows.push_back({0.01 * i, i, -1.1 + 0.1 / (i + 3), -1.2 + i * 1e-17, {0.1 * i, -2.0 / 3.0, 1e-12 + i},
                        nv::hash64(1, static_cast<std::uint64_t>(i), 2), {}});
    }
    const auto t = io::sweep_table(rows);
    const std::vector<std::string> head{"intensity", "repetition", "final_energy", "params_0",
                                        "params_1",  "params_2",   "seed",         "best_energy"};
    EXPECT_EQ(t.header, head);
    EXPECT_EQ(io::sweep_rows(through_text(t)), rows);
}

TEST(Csv, TraceRoundTrip) {
    nv::OptimizationTrace trace;
    trace.add({0, {0.5, -0.25}, -0.3, 3, 1});
    trace.add({1, {0.1 / 3, 2.0}, -0.9, 9, 2});
    const auto t = io::trace_table(trace.records);
    EXPECT_EQ(t.header.front(), "iteration");
    EXPECT_EQ(t.header[1], "cumulative_evals");
    EXPECT_EQ(t.header[2], "energy");
    EXPECT_EQ(t.header[3], "params_0");
    EXPECT_EQ(io::trace_records(through_text(t)), trace.records);
}

TEST(Csv, RecalcAndBakeoffRoundTrip) {
    const std::vector<io::RecalcRow> rr{{0.03, 1, 4, -1.01, -1.13}, {0.1, 0, 0, 0.2, 0.1 / 7}};
    EXPECT_EQ(io::recalc_rows(through_text(io::recalc_table(rr))), rr);
    const std::vector<io::BakeoffRow> br{{nv::OptimizerKind::ADAM, 2, -1.0, -1.1, 800, 42},
                                         {nv::OptimizerKind::NELDER_MEAD, 0, -0.9, -0.95, 37, 0}};
    EXPECT_EQ(io::bakeoff_rows(through_text(io::bakeoff_table(br))), br);
}

TEST(Csv, RaggedRowRejected) {
    std::stringstream ss("a,b\n1,2\n3\n");
    EXPECT_THROW(io::read_csv(ss), io::CsvError);
}

TEST(Config, TomlSweepParsesWithDefaults) {
    const auto c = io::parse_run_config(kSweepToml, "cfg", false);
    EXPECT_EQ(c.experiment, io::ExperimentKind::SWEEP);
    EXPECT_EQ(c.output_dir, "out");
    ASSERT_TRUE(c.sweep);
    EXPECT_EQ(c.sweep->ansatz, nv::AnsatzKind::RY);
    EXPECT_EQ(c.sweep->optimizer.limits.max_iterations, 16);
    EXPECT_EQ(c.sweep->optimizer.nft.reset_interval, 8);
    EXPECT_EQ(c.sweep->axis, nv::NoiseAxis::DEP2);
    EXPECT_EQ(c.sweep->intensities, (std::vector<double>{0, 0.01, 0.05}));
    EXPECT_EQ(c.sweep->fixed_noise.p_readout, 0.03);
    EXPECT_EQ(c.sweep->seed_base, 7u);
    EXPECT_EQ(c.sweep->init_mode, nv::InitMode::FIXED);
    EXPECT_FALSE(c.keep_traces);
}

TEST(Config, AxisDefaultGridWhenIntensitiesOmitted) {
    const auto c = io::parse_run_config(
        "experiment = \"SWEEP\"\n[ansatz]\nkind = \"RY\"\n[optimizer]\n[sweep]\naxis = \"PHASE\"\n", "cfg", false);
    EXPECT_EQ(c.sweep->intensities, nv::default_intensities(nv::NoiseAxis::PHASE));
}

TEST(Config, UnknownKeyIsLineAnchored) {
    std::string text = kSweepToml;
    text.insert(text.find("seed_base"), "shotz = 10\n");
    EXPECT_EQ(error_line(text, false), 19);
    EXPECT_NE(error_text(text, false).find("unknown key 'shotz'"), std::string::npos);
}

TEST(Config, JsonUnknownKeyIsLineAnchored) {
    const std::string text = "{\n  \"experiment\": \"FIT\",\n  \"fit\": {\n    \"input_dir\": \"x\",\n    \"modelz\": []\n  }\n}\n";
    EXPECT_EQ(error_line(text, true), 5);
    EXPECT_NE(error_text(text, true).find("modelz"), std::string::npos);
}

TEST(Config, TypeAndValueErrorsAreLineAnchored) {
    std::string text = kSweepToml;
    text.replace(text.find("repetitions = 3"), 15, "repetitions = \"3\"");
    EXPECT_EQ(error_line(text, false), 17);

    text = kSweepToml;
    text.replace(text.find("axis = \"DEP2\""), 13, "axis = \"DEP3\"");
    EXPECT_EQ(error_line(text, false), 15);
    EXPECT_NE(error_text(text, false).find("DEP3"), std::string::npos);
}

TEST(Config, SyntaxErrorsAreLineAnchored) {
    EXPECT_EQ(error_line("experiment = \"SWEEP\"\n[ansatz\n", false), 2);
    EXPECT_EQ(error_line("{\n\"experiment\": \"FIT\",\n\"fit\": {,}\n}", true), 3);
}

TEST(Config, SectionsMustMatchExperiment) {
    EXPECT_NE(error_text("experiment = \"SWEEP\"\n[ansatz]\nkind = \"RY\"\n", false).find("needs a [optimizer]"),
              std::string::npos);
    EXPECT_EQ(error_line("experiment = \"EXACT_SPECTRUM\"\n\n[sweep]\nshots = 3\n", false), 3);
    EXPECT_NE(error_text("experiment = \"NOPE\"\n", false).find("NOPE"), std::string::npos);
    EXPECT_NE(error_text("output_dir = \"x\"\n", false).find("experiment"), std::string::npos);
}

TEST(Config, LibraryValidationSurfacesAsConfigError) {
    std::string text = kSweepToml;
    text.replace(text.find("[0, 0.01, 0.05]"), 15, "[0.05, 0.01]");
    EXPECT_NE(error_text(text, false).find("strictly increasing"), std::string::npos);
}

TEST(Config, HashIgnoresKeyOrderAndOutputDir) {
    const std::string a = R"({"experiment": "SWEEP", "output_dir": "a",
        "ansatz": {"kind": "RY"},
        "optimizer": {"kind": "NFT", "max_iterations": 16},
        "sweep": {"axis": "AMP", "repetitions": 2, "shots": 64, "seed_base": 3}})";
    const std::string b = R"({"sweep": {"seed_base": 3, "shots": 64, "repetitions": 2, "axis": "AMP"},
        "optimizer": {"max_iterations": 16, "kind": "NFT"},
        "output_dir": "b", "ansatz": {"kind": "RY"}, "experiment": "SWEEP"})";
    const std::string toml = "experiment = \"SWEEP\"\n[sweep]\nseed_base = 3\naxis = \"AMP\"\nshots = 64\nrepetitions = 2\n"
                             "[ansatz]\nkind = \"RY\"\n[optimizer]\nmax_iterations = 16\n";
    const auto ha = io::config_hash(io::parse_run_config(a, "a", true));
    EXPECT_EQ(ha, io::config_hash(io::parse_run_config(b, "b", true)));
    EXPECT_EQ(ha, io::config_hash(io::parse_run_config(toml, "c", false)));
    EXPECT_EQ(ha.size(), 16u);

    std::string c = a;
    c.replace(c.find("\"seed_base\": 3"), 14, "\"seed_base\": 4");
    EXPECT_NE(ha, io::config_hash(io::parse_run_config(c, "c", true)));
}

TEST(Config, NormalizedFormReparsesToSameHash) {
    const auto c = io::parse_run_config(kSweepToml, "cfg", false);
    const auto again = io::parse_run_config(io::normalized_json(c).dump(), "n", true);
    EXPECT_EQ(io::normalized_json(again), io::normalized_json(c));
    EXPECT_EQ(io::config_hash(again), io::config_hash(c));
}

TEST(Svg, DeterministicAndWellFormed) {
    std::vector<nv::SweepRow> rows;
    for (int i = 0; i < 5; ++i) {
        for (double p : {0.0, 0.05, 0.1}) {
            rows.push_back({p, i, -1.13 + 3 * p + 0.01 * i, -1.13, {0.1, 0.2}, 0, {}});
        }
    }
    const auto a = io::render_noise_curve(rows);
    const auto b = io::render_noise_curve(rows);
    EXPECT_EQ(a.svg, b.svg);
    EXPECT_EQ(a.svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(a.svg.find("width=\"720\" height=\"480\""), std::string::npos);
    EXPECT_NE(a.svg.find("<polyline"), std::string::npos);
    EXPECT_EQ(a.svg.substr(a.svg.size() - 7), "</svg>\n");
    EXPECT_NE(a.table.find("LINEAR"), std::string::npos);
    for (const auto &fig : {io::render_heatmap(rows), io::render_histogram(rows)}) {
        EXPECT_EQ(fig.svg.substr(fig.svg.size() - 7), "</svg>\n");
        EXPECT_FALSE(fig.table.empty());
    }
}

TEST(Svg, NiceTicks) {
    EXPECT_EQ(io::svg::nice_ticks(0.0, 1.0), (std::vector<double>{0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0}));
    const auto t = io::svg::nice_ticks(-1.2, -0.4);
    EXPECT_GE(t.size(), 3u);
    EXPECT_EQ(io::svg::fixed(-0.0001), "0.00");
    EXPECT_EQ(io::svg::escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
}

TEST(TextTable, AlignsColumns) {
    const auto t = io::text_table({"a", "long"}, {{"1", "2"}, {"333", "4"}});
    EXPECT_EQ(t, "  a  long\n---------\n  1     2\n333     4\n");
}
