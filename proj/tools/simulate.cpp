// Copyright 2026 The spinchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// simulate: run experiments from JSON configs or named presets.
//
//   simulate run <config.json> [--out DIR] [--solver rk4|spectral|auto]
//   simulate preset <id> [--out DIR] [--solver rk4|spectral|auto]
//   simulate presets [--json]
//   simulate spectrum <config.json> [--out DIR]
//
// Exit codes: 0 ok, 2 config, 3 solver failure, 4 capacity, 5 spectral
// decomposition refused.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spinchain/errors.hpp"
#include "spinchain/experiment.hpp"

namespace {

using spinchain::ConfigError;
using spinchain::ExitCode;

spinchain::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(ConfigError::Kind::syntax, "file", "cannot read config file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return spinchain::parse_config(text.str());
}

int execute(spinchain::ExperimentConfig config, const std::string& out_dir,
            const std::string& solver) {
  if (!solver.empty()) config.solver = spinchain::parse_solver(solver);
  const nlohmann::json summary = spinchain::run_experiment(config, out_dir);
  for (const auto& f : summary["files"]) {
    std::cout << (std::filesystem::path(out_dir) / f.get<std::string>()).string() << "\n";
  }
  std::cout << spinchain::summary_path(config, out_dir).string() << "\n";
  return 0;
}

void print_presets(bool as_json) {
  if (as_json) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& p : spinchain::list_presets()) {
      all.push_back({{"id", p.id}, {"summary", p.summary}, {"config", spinchain::to_json(p.config)}});
    }
    std::cout << all.dump(2) << "\n";
    return;
  }
  for (const auto& p : spinchain::list_presets()) {
    std::cout << p.id << "\t" << to_string(p.config.kind) << "\t" << p.summary << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open spin chain simulator: mean-field and exact master-equation dynamics"};
  app.require_subcommand(1);

  std::string config_path, preset_id, out_dir = ".", solver;
  bool presets_json = false;

  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--solver", solver, "Override the exact solver")
      ->check(CLI::IsMember({"rk4", "spectral", "auto"}));

  auto* preset = app.add_subcommand("preset", "Run a named preset");
  preset->add_option("id", preset_id, "Preset id (see `presets`)")->required();
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_option("--solver", solver, "Override the exact solver")
      ->check(CLI::IsMember({"rk4", "spectral", "auto"}));

  auto* presets = app.add_subcommand("presets", "List presets and their parameters");
  presets->add_flag("--json", presets_json, "Print expanded configs as JSON");

  auto* spectrum = app.add_subcommand("spectrum", "Emit the Liouvillian eigenvalue table");
  spectrum->add_option("config", config_path, "Config file")->required();
  spectrum->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
  }

  try {
    if (*run) return execute(load_config(config_path), out_dir, solver);
    if (*preset) return execute(spinchain::expand_preset(preset_id), out_dir, solver);
    if (*presets) {
      print_presets(presets_json);
      return 0;
    }
    if (*spectrum) {
      auto config = load_config(config_path);
      config.kind = spinchain::ExperimentKind::spectrum;
      if (config.output_path.empty()) config.output_path = config.name + "_spectrum.csv";
      return execute(config, out_dir, "");
    }
  } catch (const spinchain::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::solver_failure);
  }
  return 0;
}
