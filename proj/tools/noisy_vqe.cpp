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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisy_vqe/cli/app.hpp"

int main(int argc, char **argv) {
    namespace cli = noisy_vqe::cli;

    CLI::App app{"Noisy VQE simulation experiments for the H2 ground state"};
    app.set_version_flag("--version", std::string(cli::kVersion));
    app.require_subcommand(1);

    cli::RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Execute the experiment described by a TOML or JSON config");
    run_cmd->add_option("--config", run.config_path, "Experiment config (*.toml, or *.json)")->required();
    run_cmd->add_option("--output-dir", run.output_dir, "Run directory (default: config output_dir, else runs/<hash>)");
    run_cmd->add_option("--seed", run.seed, "Override the experiment seed (seed_base for sweeps)");
    run_cmd->add_option("--workers", run.workers, "Parallel sweep cells (default: NOISY_VQE_WORKERS or 1)");
    run_cmd->add_flag("--dump-circuit", run.dump_circuit, "Write the ansatz gate list to circuit.json");
    run_cmd->add_flag("--verbose", run.verbose, "Per-term estimates and per-cell progress");
    run_cmd->add_option("--p-readout", run.noise.p_readout, "Override the readout flip probability");
    run_cmd->add_option("--p-dep1", run.noise.p_dep1, "Override the 1-qubit depolarizing probability");
    run_cmd->add_option("--p-dep2", run.noise.p_dep2, "Override the 2-qubit depolarizing probability");
    run_cmd->add_option("--p-amp", run.noise.p_amp, "Override the amplitude damping probability");
    run_cmd->add_option("--p-phase", run.noise.p_phase, "Override the phase damping probability");
    run_cmd->add_option("--epsilon", run.noise.epsilon, "Override the damping fixed-point excitation");

    std::string run_dir;
    std::vector<std::string> kinds;
    auto *report_cmd = app.add_subcommand("report", "Render SVG figures and text tables from a run directory");
    report_cmd->add_option("--run-dir", run_dir, "Directory written by `run`")->required();
    report_cmd->add_option("--kinds", kinds, "Subset of heatmap,noise_curve,trace,histogram (default: all available)")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitConfig;
    }

    if (run_cmd->parsed()) {
        return cli::cmd_run(run, std::cout, std::cerr);
    }
    return cli::cmd_report(run_dir, kinds, std::cout, std::cerr);
}
