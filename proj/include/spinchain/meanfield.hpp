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

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "spinchain/model.hpp"
#include "spinchain/types.hpp"

// Mean-field magnetization dynamics of the open chain.
//
// For a single magnetization vector M (normalized units, |M(0)| = 1):
//
//   dM/dt = -M x B_eff - (1/|M|) M x (M x D) - R M - R0
//
// with B_eff = B + m o V (m = M/|M|, o elementwise), R = diag(G/2, G/2, G)
// and R0 = (0, 0, G), G the total on-site damping. D is either fixed by the
// neighbour rates, D = g/2, or tied to the field, D = alpha B_eff.

namespace spinchain {

enum class DampingMode { fixed_d, ll_alpha };
enum class MeanFieldMode { collective, per_site };

struct MeanFieldConfig {
  ChainModel model;
  DampingMode damping = DampingMode::fixed_d;
  /// Used iff damping == ll_alpha.
  double alpha = 0.0;
  /// Used iff damping == fixed_d. When unset D = g / 2 from the model rates.
  std::optional<Vec3> d_vector;
  MeanFieldMode mode = MeanFieldMode::collective;
};

/// One vector (collective) or one per site.
struct MagnetizationState {
  std::vector<Vec3> vectors;
  MeanFieldMode mode = MeanFieldMode::collective;

  static MagnetizationState collective(const Vec3& m);
  static MagnetizationState uniform(const Vec3& m, int n_sites);

  /// Site average; the vector itself in collective mode.
  Vec3 mean() const;
  double max_abs_component() const;
  bool all_finite() const;
};

/// B_eff = B + m o V with gamma = 1. Throws ZeroMagnetizationError when
/// |m| == 0.
Vec3 effective_field(const Vec3& m_unit, const ChainModel& model);

/// Compact damping terms (L_x, L_y, L_z) for the neighbour-rate vector g.
/// Satisfies M . L = 0 identically.
Vec3 damping_terms(const Vec3& m, const Vec3& g);

/// The damping field D for a given effective field.
Vec3 damping_field(const MeanFieldConfig& config, const Vec3& b_eff);

/// Time derivative of the state, written component-wise:
///   dM_x/dt = M_z Beff_y - M_y Beff_z + L_x/(2|M|) - G M_x / 2
///   dM_y/dt = M_x Beff_z - M_z Beff_x + L_y/(2|M|) - G M_y / 2
///   dM_z/dt = M_y Beff_x - M_x Beff_y + L_z/(2|M|) - G (M_z + 1)
/// where L uses 2D in place of g (so fixed_d with D = g/2 is the bare form).
///
/// Per-site mode couples neighbours through the exchange field: site j sees
/// Beff = B + (V/2) o Sum_{k adjacent} m_k, which is B + m o V in the bulk of
/// a uniform chain and B + m o V/2 at the two ends.
///
/// Throws ConfigError(unsupported) for nonzero on-site x/y rates and
/// ZeroMagnetizationError for |M| == 0.
MagnetizationState mf_rhs(const MagnetizationState& state, const MeanFieldConfig& config);

/// Vector form of the collective equation. With include_noise = false the
/// constant R0 term is dropped (Callen form).
Vec3 ll_rhs(const Vec3& m, const MeanFieldConfig& config, bool include_noise = true);

struct MagnetizationTrajectory {
  std::vector<double> times;
  std::vector<MagnetizationState> states;
};

/// Classical fixed-step RK4. Samples at t = k * sample_stride * dt, starting
/// with the initial state. The final sample is always at t_end (the last
/// step is shortened if t_end is not a multiple of dt).
/// Throws IntegrationDivergedError on non-finite values.
MagnetizationTrajectory integrate(const MeanFieldConfig& config, const MagnetizationState& initial,
                                  double t_end, double dt, int sample_stride = 1);

/// Max-norm difference of the terminal states integrated with dt and dt/2.
double step_halving_error(const MeanFieldConfig& config, const MagnetizationState& initial,
                          double t_end, double dt);

struct SteadyStateOptions {
  double dt = 1e-3;
  /// Converged when ||dM/dt||_inf stays below this for `sustain` steps.
  double tolerance = 1e-9;
  int sustain = 10;
  double t_max = 1e4;
  /// Reject fixed points whose linearization has an eigenvalue with real
  /// part above this, kick the state off them and keep integrating.
  double instability_threshold = 1e-7;
  double kick = 1e-6;
  int max_kicks = 8;
};

struct SteadyStateResult {
  MagnetizationState state;
  double residual = 0.0;
  double time = 0.0;
  int kicks = 0;
};

/// Integrates until the residual criterion holds at a stable fixed point.
/// Throws NotConvergedError (carrying the last state) if t_max is reached.
SteadyStateResult steady_state(const MeanFieldConfig& config, const MagnetizationState& initial,
                               const SteadyStateOptions& options = {});

/// |M|(cos phi sin theta, sin phi sin theta, cos theta).
Vec3 tilted_direction(double theta, double phi, double magnitude = 1.0);

struct HysteresisSample {
  double bz;
  Vec3 m;
};

struct HysteresisCurve {
  /// Field increasing, seeded near M = -z.
  std::vector<HysteresisSample> branch_up;
  /// Field decreasing, seeded near M = +z.
  std::vector<HysteresisSample> branch_down;
  /// First field at which M_z changed sign on each branch.
  std::optional<double> switching_up;
  std::optional<double> switching_down;
  double coercive_field = 0.0;
};

struct HysteresisOptions {
  SteadyStateOptions steady;
  double theta0 = std::numbers::pi / 40.0;
  double phi0 = 0.0;
  /// Branches agreeing within this (max |dM_z|) count as no loop.
  double coincidence_tolerance = 1e-3;
  /// Run the two branches on separate threads.
  bool parallel = true;
};

/// Quasi-static sweep of B_z over a strictly monotone grid in both
/// directions, continuing each step from the previous steady state.
/// Requires ll_alpha damping and zero on-site damping.
HysteresisCurve hysteresis_sweep(const MeanFieldConfig& config, std::span<const double> bz_grid,
                                 const HysteresisOptions& options = {});

}  // namespace spinchain
