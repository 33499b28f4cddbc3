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

#include "spinchain/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinchain/errors.hpp"

namespace spinchain {

MagnetizationState MagnetizationState::collective(const Vec3& m) {
  return {{m}, MeanFieldMode::collective};
}

MagnetizationState MagnetizationState::uniform(const Vec3& m, int n_sites) {
  return {std::vector<Vec3>(static_cast<std::size_t>(std::max(n_sites, 1)), m),
          MeanFieldMode::per_site};
}

Vec3 MagnetizationState::mean() const {
  Vec3 sum = Vec3::Zero();
  for (const auto& v : vectors) sum += v;
  return vectors.empty() ? sum : Vec3(sum / static_cast<double>(vectors.size()));
}

double MagnetizationState::max_abs_component() const {
  double m = 0.0;
  for (const auto& v : vectors) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

bool MagnetizationState::all_finite() const {
  return std::all_of(vectors.begin(), vectors.end(), [](const Vec3& v) { return v.allFinite(); });
}

Vec3 effective_field(const Vec3& m_unit, const ChainModel& model) {
  if (m_unit.norm() == 0.0) {
    throw ZeroMagnetizationError("effective_field: zero magnetization has no direction");
  }
  return model.b_field + m_unit.cwiseProduct(model.couplings);
}

Vec3 damping_terms(const Vec3& m, const Vec3& g) {
  const double x = m.x(), y = m.y(), z = m.z();
  return {-g.z() * x * z - g.y() * x * y + g.x() * (y * y + z * z),
          -g.z() * y * z - g.x() * x * y + g.y() * (x * x + z * z),
          -g.y() * y * z - g.x() * x * z + g.z() * (x * x + y * y)};
}

Vec3 damping_field(const MeanFieldConfig& config, const Vec3& b_eff) {
  if (config.damping == DampingMode::ll_alpha) return config.alpha * b_eff;
  if (config.d_vector) return *config.d_vector;
  return 0.5 * config.model.neighbour_damping();
}

namespace {

void check_supported(const MeanFieldConfig& config) {
  const auto& r = config.model.on_site_rates;
  for (Axis a : {Axis::x, Axis::y}) {
    for (Sign s : kSigns) {
      if (r(a, s) != 0.0) {
        throw ConfigError(ConfigError::Kind::unsupported, "on_site_rates",
                          "mean-field equations support on-site damping along z only; "
                          "on_site_rates[" + std::string(to_string(a)) + std::string(to_string(s)) +
                              "] is nonzero");
      }
    }
  }
}

Vec3 unit(const Vec3& v) {
  const double n = v.norm();
  if (n == 0.0 || !std::isfinite(n)) {
    throw ZeroMagnetizationError("mean-field: magnetization vector has zero magnitude");
  }
  return v / n;
}

// Right-hand side for one site given its effective field.
Vec3 site_rhs(const Vec3& m, const Vec3& b_eff, const MeanFieldConfig& config, double gamma) {
  const double norm = m.norm();
  const Vec3 g_eff = 2.0 * damping_field(config, b_eff);
  const Vec3 l = damping_terms(m, g_eff);
  Vec3 d;
  d.x() = m.z() * b_eff.y() - m.y() * b_eff.z() + l.x() / (2.0 * norm) - 0.5 * gamma * m.x();
  d.y() = m.x() * b_eff.z() - m.z() * b_eff.x() + l.y() / (2.0 * norm) - 0.5 * gamma * m.y();
  d.z() = m.y() * b_eff.x() - m.x() * b_eff.y() + l.z() / (2.0 * norm) - gamma * (m.z() + 1.0);
  return d;
}

// Writes the derivative of `in` into `out` (same size). Supported-ness is
// checked by the callers once, not per evaluation.
void rhs_into(const std::vector<Vec3>& in, std::vector<Vec3>& out, const MeanFieldConfig& config,
              std::vector<Vec3>& directions) {
  const double gamma = config.model.total_damping();
  const auto n = in.size();
  if (config.mode == MeanFieldMode::collective) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 b_eff = effective_field(unit(in[j]), config.model);
      out[j] = site_rhs(in[j], b_eff, config, gamma);
    }
    return;
  }
  directions.resize(n);
  for (std::size_t j = 0; j < n; ++j) directions[j] = unit(in[j]);
  const Vec3 half_v = 0.5 * config.model.couplings;
  for (std::size_t j = 0; j < n; ++j) {
    Vec3 neighbours = Vec3::Zero();
    if (j > 0) neighbours += directions[j - 1];
    if (j + 1 < n) neighbours += directions[j + 1];
    const Vec3 b_eff = config.model.b_field + half_v.cwiseProduct(neighbours);
    out[j] = site_rhs(in[j], b_eff, config, gamma);
  }
}

// Fixed-buffer RK4 stepper; avoids allocation inside the time loop.
class Rk4Stepper {
 public:
  Rk4Stepper(const MeanFieldConfig& config, std::size_t n)
      : config_(config), k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void derivative(const std::vector<Vec3>& y, std::vector<Vec3>& out) {
    rhs_into(y, out, config_, dirs_);
  }

  /// Advances y by h. If `k1_known`, k1() must hold f(y).
  void step(std::vector<Vec3>& y, double h, bool k1_known = false) {
    const auto n = y.size();
    if (!k1_known) derivative(y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
    derivative(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
    derivative(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
    derivative(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

  std::vector<Vec3>& k1() { return k1_; }

 private:
  const MeanFieldConfig& config_;
  std::vector<Vec3> k1_, k2_, k3_, k4_, tmp_, dirs_;
};

double max_norm(const std::vector<Vec3>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.cwiseAbs().maxCoeff());
  return m;
}

bool finite(const std::vector<Vec3>& v) {
  return std::all_of(v.begin(), v.end(), [](const Vec3& x) { return x.allFinite(); });
}

void check_initial(const MagnetizationState& s, const MeanFieldConfig& config) {
  if (s.vectors.empty()) {
    throw ConfigError(ConfigError::Kind::constraint, "initial_state", "empty magnetization state");
  }
  if (config.mode == MeanFieldMode::collective && s.vectors.size() != 1) {
    throw ConfigError(ConfigError::Kind::constraint, "initial_state",
                      "collective mode takes exactly one vector");
  }
  if (config.mode == MeanFieldMode::per_site &&
      s.vectors.size() != static_cast<std::size_t>(config.model.n_sites)) {
    throw ConfigError(ConfigError::Kind::constraint, "initial_state",
                      "per-site mode takes one vector per site");
  }
}

}  // namespace

MagnetizationState mf_rhs(const MagnetizationState& state, const MeanFieldConfig& config) {
  check_supported(config);
  check_initial(state, config);
  MagnetizationState out{std::vector<Vec3>(state.vectors.size()), state.mode};
  std::vector<Vec3> dirs;
  rhs_into(state.vectors, out.vectors, config, dirs);
  return out;
}

Vec3 ll_rhs(const Vec3& m, const MeanFieldConfig& config, bool include_noise) {
  check_supported(config);
  const double norm = m.norm();
  if (norm == 0.0) throw ZeroMagnetizationError("ll_rhs: zero magnetization");
  const Vec3 b_eff = effective_field(m / norm, config.model);
  const Vec3 d = damping_field(config, b_eff);
  const double gamma = config.model.total_damping();
  const Vec3 relax(0.5 * gamma * m.x(), 0.5 * gamma * m.y(), gamma * m.z());
  Vec3 out = -m.cross(b_eff) - m.cross(m.cross(d)) / norm - relax;
  if (include_noise) out.z() -= gamma;
  return out;
}

MagnetizationTrajectory integrate(const MeanFieldConfig& config, const MagnetizationState& initial,
                                  double t_end, double dt, int sample_stride) {
  using K = ConfigError::Kind;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError(K::constraint, "dt", "dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ConfigError(K::constraint, "t_end", "t_end must be > 0");
  }
  if (sample_stride < 1) throw ConfigError(K::constraint, "sample_every", "stride must be >= 1");
  check_supported(config);
  check_initial(initial, config);

  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  MagnetizationTrajectory traj;
  const auto samples = static_cast<std::size_t>(steps / sample_stride + 2);
  traj.times.reserve(samples);
  traj.states.reserve(samples);

  std::vector<Vec3> y = initial.vectors;
  Rk4Stepper stepper(config, y.size());
  traj.times.push_back(0.0);
  traj.states.push_back({y, initial.mode});
  for (long long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    const double h = std::min(dt, t_end - t_prev);
    stepper.step(y, h);
    if (!finite(y)) {
      throw IntegrationDivergedError(t_prev + h, "integrate: non-finite magnetization at t = " +
                                                     std::to_string(t_prev + h));
    }
    if (k % sample_stride == 0 || k == steps) {
      traj.times.push_back(k == steps ? t_end : static_cast<double>(k) * dt);
      traj.states.push_back({y, initial.mode});
    }
  }
  return traj;
}

double step_halving_error(const MeanFieldConfig& config, const MagnetizationState& initial,
                          double t_end, double dt) {
  const auto coarse = integrate(config, initial, t_end, dt, 1 << 30);
  const auto fine = integrate(config, initial, t_end, dt / 2.0, 1 << 30);
  const auto& a = coarse.states.back().vectors;
  const auto& b = fine.states.back().vectors;
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return err;
}

namespace {

Eigen::VectorXd flatten(const std::vector<Vec3>& v) {
  Eigen::VectorXd out(3 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.segment<3>(3 * i) = v[i];
  return out;
}

std::vector<Vec3> unflatten(const Eigen::VectorXd& x) {
  std::vector<Vec3> out(x.size() / 3);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.segment<3>(3 * i);
  return out;
}

// Direction of fastest linear growth at a fixed point, if any eigenvalue of
// the central-difference Jacobian has real part above `threshold`.
std::optional<Eigen::VectorXd> unstable_direction(const std::vector<Vec3>& y,
                                                  const MeanFieldConfig& config,
                                                  double threshold) {
  const Eigen::VectorXd x = flatten(y);
  const auto n = x.size();
  Eigen::MatrixXd jac(n, n);
  std::vector<Vec3> fp(y.size()), fm(y.size()), dirs;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
    Eigen::VectorXd xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    rhs_into(unflatten(xp), fp, config, dirs);
    rhs_into(unflatten(xm), fm, config, dirs);
    jac.col(c) = (flatten(fp) - flatten(fm)) / (2.0 * h);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success) return std::nullopt;
  Eigen::Index best = 0;
  es.eigenvalues().real().maxCoeff(&best);
  if (es.eigenvalues()[best].real() <= threshold) return std::nullopt;
  const Eigen::VectorXcd v = es.eigenvectors().col(best);
  Eigen::VectorXd dir = v.real();
  if (dir.norm() < 1e-3 * v.norm()) dir = v.imag();
  return Eigen::VectorXd(dir.normalized());
}

}  // namespace

SteadyStateResult steady_state(const MeanFieldConfig& config, const MagnetizationState& initial,
                               const SteadyStateOptions& options) {
  using K = ConfigError::Kind;
  if (!(options.dt > 0.0)) throw ConfigError(K::constraint, "dt", "dt must be > 0");
  if (!(options.tolerance > 0.0)) {
    throw ConfigError(K::constraint, "tolerance", "steady-state tolerance must be > 0");
  }
  check_supported(config);
  check_initial(initial, config);

  std::vector<Vec3> y = initial.vectors;
  Rk4Stepper stepper(config, y.size());
  double t = 0.0;
  int below = 0;
  int kicks = 0;
  double residual = 0.0;
  while (true) {
    stepper.derivative(y, stepper.k1());
    residual = max_norm(stepper.k1());
    below = residual < options.tolerance ? below + 1 : 0;
    if (below >= options.sustain) {
      auto dir = kicks < options.max_kicks
                     ? unstable_direction(y, config, options.instability_threshold)
                     : std::nullopt;
      if (!dir) return {{y, initial.mode}, residual, t, kicks};
      // Unstable fixed point: push off along the growing mode, keeping
      // each site's magnitude.
      std::vector<double> norms;
      for (const auto& v : y) norms.push_back(v.norm());
      auto pushed = unflatten(flatten(y) + options.kick * (*dir));
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = pushed[i].normalized() * norms[i];
      ++kicks;
      below = 0;
      continue;
    }
    if (t >= options.t_max) {
      throw NotConvergedError(y, residual,
                              "steady_state: no convergence by t_max = " +
                                  std::to_string(options.t_max) +
                                  " (residual " + std::to_string(residual) + ")");
    }
    stepper.step(y, options.dt, true);
    t += options.dt;
    if (!finite(y)) {
      throw IntegrationDivergedError(t, "steady_state: non-finite magnetization at t = " +
                                            std::to_string(t));
    }
  }
}

Vec3 tilted_direction(double theta, double phi, double magnitude) {
  return magnitude * Vec3(std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta),
                          std::cos(theta));
}

namespace {

std::vector<HysteresisSample> sweep_branch(const MeanFieldConfig& base,
                                           const std::vector<double>& fields, const Vec3& seed,
                                           const SteadyStateOptions& options) {
  MeanFieldConfig config = base;
  MagnetizationState state = config.mode == MeanFieldMode::collective
                                 ? MagnetizationState::collective(seed)
                                 : MagnetizationState::uniform(seed, config.model.n_sites);
  std::vector<HysteresisSample> out;
  out.reserve(fields.size());
  for (double bz : fields) {
    config.model.b_field.z() = bz;
    state = steady_state(config, state, options).state;
    out.push_back({bz, state.mean()});
  }
  return out;
}

std::optional<double> first_switch(const std::vector<HysteresisSample>& branch) {
  if (branch.empty()) return std::nullopt;
  const double s0 = branch.front().m.z();
  for (const auto& s : branch) {
    if (s.m.z() * s0 < 0.0) return s.bz;
  }
  return std::nullopt;
}

}  // namespace

HysteresisCurve hysteresis_sweep(const MeanFieldConfig& config, std::span<const double> bz_grid,
                                 const HysteresisOptions& options) {
  using K = ConfigError::Kind;
  if (config.damping != DampingMode::ll_alpha) {
    throw ConfigError(K::constraint, "meanfield.damping", "hysteresis requires ll_alpha damping");
  }
  if (config.model.total_damping() != 0.0) {
    throw ConfigError(K::constraint, "model.gamma_total", "hysteresis requires zero on-site damping");
  }
  if (bz_grid.size() < 2) throw ConfigError(K::constraint, "bz_grid", "need at least two fields");
  std::vector<double> ascending(bz_grid.begin(), bz_grid.end());
  const bool increasing = ascending[1] > ascending[0];
  for (std::size_t i = 1; i < ascending.size(); ++i) {
    const bool ok = increasing ? ascending[i] > ascending[i - 1] : ascending[i] < ascending[i - 1];
    if (!ok) throw ConfigError(K::constraint, "bz_grid", "bz_grid must be strictly monotone");
  }
  if (!increasing) std::reverse(ascending.begin(), ascending.end());
  std::vector<double> descending(ascending.rbegin(), ascending.rend());

  const Vec3 seed_up = tilted_direction(std::numbers::pi - options.theta0, options.phi0);
  const Vec3 seed_down = tilted_direction(options.theta0, options.phi0);

  HysteresisCurve curve;
  if (options.parallel) {
    auto up = std::async(std::launch::async, sweep_branch, std::cref(config), std::cref(ascending),
                         seed_up, std::cref(options.steady));
    curve.branch_down = sweep_branch(config, descending, seed_down, options.steady);
    curve.branch_up = up.get();
  } else {
    curve.branch_up = sweep_branch(config, ascending, seed_up, options.steady);
    curve.branch_down = sweep_branch(config, descending, seed_down, options.steady);
  }

  curve.switching_up = first_switch(curve.branch_up);
  curve.switching_down = first_switch(curve.branch_down);

  // With no anisotropy, a vanishing total field makes every direction
  // stationary, so the branches may disagree there without forming a loop.
  const bool isotropic_free = config.model.couplings.isZero(0.0) &&
                              config.model.b_field.head<2>().isZero(0.0);
  double max_gap = 0.0;
  const auto n = curve.branch_up.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (isotropic_free && curve.branch_up[i].bz == 0.0) continue;
    max_gap = std::max(max_gap,
                       std::abs(curve.branch_up[i].m.z() - curve.branch_down[n - 1 - i].m.z()));
  }
  if (curve.switching_up && curve.switching_down && max_gap >= options.coincidence_tolerance) {
    curve.coercive_field = 0.5 * std::abs(*curve.switching_up - *curve.switching_down);
  }
  return curve;
}

}  // namespace spinchain
