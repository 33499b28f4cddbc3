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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinchain/lindblad.hpp"
#include "spinchain/meanfield.hpp"
#include "spinchain/model.hpp"

// Experiment configuration, figure presets and orchestration.
//
// Configs are strict JSON: every object rejects unknown keys. A config may
// name a preset ({"preset": "fig2c", ...}); the remaining keys are then
// merged over the expanded preset.

namespace spinchain {

enum class ExperimentKind { dynamics, hysteresis, compare, correlations, spectrum };
enum class SolverChoice { rk4, spectral, auto_select };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(SolverChoice solver);
/// Throws ConfigError(constraint) for unknown names.
SolverChoice parse_solver(std::string_view name);

using Triple = std::array<double, 3>;

struct ModelSection {
  int n_sites = 1;
  Triple b_field{};
  Triple couplings{};
  ThermalRates thermal;
  /// When either table is present the rates come from the tables (a missing
  /// one is all zero) and only thermal.n_b is used.
  std::optional<RateTable> on_site_rates;
  std::optional<RateTable> neighbour_rates;

  bool operator==(const ModelSection&) const = default;
};

struct MeanFieldSection {
  DampingMode damping = DampingMode::fixed_d;
  double alpha = 0.0;
  std::optional<Triple> d_vector;
  MeanFieldMode mode = MeanFieldMode::collective;

  bool operator==(const MeanFieldSection&) const = default;
};

struct InitialState {
  enum class Kind { all_up_x, all_up_z, tilted };
  Kind kind = Kind::all_up_x;
  double theta = 0.0;
  double phi = 0.0;

  /// Unit Bloch vector shared by every site.
  Vec3 direction() const;

  bool operator==(const InitialState&) const = default;
};

struct CorrelationSpec {
  int i = 1;
  int j = 2;
  Axis a = Axis::x;
  Axis b = Axis::x;

  /// Column name, e.g. "Cxx12".
  std::string column() const;

  bool operator==(const CorrelationSpec&) const = default;
};

/// Per-run overrides of the model section. Each variant is run separately
/// and writes its own CSV.
struct Variant {
  std::string label;
  std::optional<int> n_sites;
  std::optional<Triple> b_field;
  std::optional<Triple> couplings;
  std::optional<double> gamma_total;
  std::optional<bool> all_axes;

  bool operator==(const Variant&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::dynamics;
  std::string name = "experiment";
  ModelSection model;
  MeanFieldSection meanfield;
  SolverChoice solver = SolverChoice::auto_select;
  double t_end = 10.0;
  double dt = 1e-3;
  /// Sampling interval; a multiple of dt.
  double sample_every = 0.01;
  /// Hysteresis fields, or steady-state sweep fields for kind = compare.
  std::vector<double> bz_grid;
  InitialState initial_state;
  /// CSV path; empty means "<name>.csv".
  std::string output_path;
  /// Reserved. All runs are deterministic.
  std::int64_t seed = 0;
  std::vector<CorrelationSpec> correlations;
  std::vector<std::pair<int, int>> concurrence_pairs;
  std::pair<double, double> deviation_window{0.0, 1e3};
  std::vector<Variant> variants;
  int max_sites = kDefaultMaxSites;

  bool operator==(const ExperimentConfig&) const = default;

  /// The chain model with the variant's overrides applied.
  ChainModel chain_model(const Variant* variant = nullptr) const;
  MeanFieldConfig meanfield_config(const Variant* variant = nullptr) const;
  /// Sampling stride in steps of dt.
  int sample_stride() const;
};

/// Throws ConfigError: syntax (field "line N"), unknown_key, or constraint.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
/// Pretty-printed to_json; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

struct PresetInfo {
  std::string id;
  std::string summary;
  ExperimentConfig config;
};

/// Every preset, in a fixed order.
const std::vector<PresetInfo>& list_presets();
/// Throws ConfigError(constraint) for unknown ids.
ExperimentConfig expand_preset(std::string_view id);

struct ResultTable {
  std::string label;
  std::vector<std::string> header;
  /// Optional leading text column (hysteresis branch names); empty or one
  /// entry per row.
  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
  std::vector<double> column_values(std::string_view name) const;
  /// CSV with a header row and %.17g numbers.
  std::string to_csv() const;
};

struct ExperimentResult {
  /// One table per variant, in variant order.
  std::vector<ResultTable> tables;
  nlohmann::json summary;
};

/// Runs every variant (concurrently when there are several) and collects
/// the tables in variant order. Solver and capacity errors propagate.
ExperimentResult compute_experiment(const ExperimentConfig& config);

/// CSV paths for a config: output_path (or <name>.csv) under out_dir, with
/// "_<label>" inserted before the extension for each variant.
std::vector<std::filesystem::path> output_paths(const ExperimentConfig& config,
                                                const std::filesystem::path& out_dir);
std::filesystem::path summary_path(const ExperimentConfig& config,
                                   const std::filesystem::path& out_dir);

/// compute_experiment, then writes the CSVs and the summary JSON (with wall
/// time). Nothing is left on disk if any step fails. Returns the summary.
nlohmann::json run_experiment(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir = ".");

}  // namespace spinchain
