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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "spinchain/errors.hpp"
#include "spinchain/meanfield.hpp"
#include "test_util.hpp"

using namespace spinchain;
using spinchain::testing::random_vec;
using spinchain::testing::uniform;

namespace {

// Component-wise cross product, written out independently of Eigen.
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

MeanFieldConfig base_config() {
  MeanFieldConfig c;
  c.model.n_sites = 1;
  return c;
}

MeanFieldConfig random_collective_config(bool ll_alpha) {
  MeanFieldConfig c;
  c.model.n_sites = 3;
  c.model.b_field = random_vec(-2, 2);
  c.model.couplings = random_vec(-2, 2);
  const double gamma = uniform(0.0, 0.3);
  c.model.on_site_rates(Axis::z, Sign::minus) = gamma * uniform(0.5, 1.0);
  c.model.on_site_rates(Axis::z, Sign::plus) = gamma * uniform(0.0, 0.5);
  for (Axis a : kAxes) {
    c.model.neighbour_rates(a, Sign::minus) = uniform(0.0, 0.1);
    c.model.neighbour_rates(a, Sign::plus) = uniform(0.0, 0.1);
  }
  if (ll_alpha) {
    c.damping = DampingMode::ll_alpha;
    c.alpha = uniform(0.0, 1.0);
  }
  return c;
}

Vec3 random_m() {
  Vec3 m;
  do {
    m = random_vec();
  } while (m.norm() < 0.05);
  return m;
}

}  // namespace

TEST_SUITE("meanfield") {

TEST_CASE("effective field examples") {
  ChainModel m;
  m.b_field = {0, 0, -2};
  m.couplings = {0, 0, 1};
  CHECK((effective_field({0, 0, 1}, m) - Vec3(0, 0, -1)).norm() < 1e-15);
  m.couplings = Vec3::Zero();
  const Vec3 dir = random_m().normalized();
  CHECK((effective_field(dir, m) - m.b_field).norm() == 0.0);
  m.b_field = Vec3::Zero();
  m.couplings = {0.5, 0, 0};
  CHECK((effective_field({1, 0, 0}, m) - Vec3(0.5, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(effective_field(Vec3::Zero(), m), ZeroMagnetizationError);
}

TEST_CASE("mf_rhs examples") {
  MeanFieldConfig c = base_config();
  c.model.on_site_rates(Axis::z, Sign::minus) = 0.1;
  auto d = mf_rhs(MagnetizationState::collective({0, 0, -1}), c).vectors[0];
  CHECK(d.norm() < 1e-15);

  c = base_config();
  const double bz = 0.8;
  c.model.b_field = {0, 0, bz};
  d = mf_rhs(MagnetizationState::collective({1, 0, 0}), c).vectors[0];
  CHECK((d - Vec3(0, bz, 0)).norm() < 1e-15);

  CHECK_THROWS_AS(mf_rhs(MagnetizationState::collective(Vec3::Zero()), c), ZeroMagnetizationError);
  c.model.on_site_rates(Axis::x, Sign::plus) = 0.1;
  CHECK_THROWS_AS(mf_rhs(MagnetizationState::collective({1, 0, 0}), c), ConfigError);
}

TEST_CASE("without on-site damping the derivative is orthogonal to M") {
  for (int k = 0; k < 200; ++k) {
    MeanFieldConfig c = random_collective_config(k % 2 == 0);
    c.model.on_site_rates = RateTable{};
    const Vec3 m = random_m();
    const Vec3 d = mf_rhs(MagnetizationState::collective(m), c).vectors[0];
    CHECK(std::abs(m.dot(d)) < 1e-12);
  }
}

TEST_CASE("damping terms are orthogonal to M") {
  for (int k = 0; k < 1000; ++k) {
    const Vec3 m = random_vec(-1, 1);
    const Vec3 g = random_vec(-1, 1);
    const Vec3 l = damping_terms(m, g);
    CHECK(std::abs(m[0] * l[0] + m[1] * l[1] + m[2] * l[2]) < 1e-12);
  }
}

TEST_CASE("ll_rhs agrees with the component equations") {
  for (int k = 0; k < 100; ++k) {
    const MeanFieldConfig c = random_collective_config(k % 2 == 1);
    const Vec3 m = random_m();
    const Vec3 a = ll_rhs(m, c);
    const Vec3 b = mf_rhs(MagnetizationState::collective(m), c).vectors[0];
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("ll_alpha without on-site damping reduces to the LL equation") {
  for (int k = 0; k < 100; ++k) {
    MeanFieldConfig c = random_collective_config(true);
    c.model.on_site_rates = RateTable{};
    const Vec3 m = random_m();
    const double norm = m.norm();
    const Vec3 mu = m / norm;
    Vec3 b_eff;
    for (int i = 0; i < 3; ++i) b_eff[i] = c.model.b_field[i] + mu[i] * c.model.couplings[i];
    const Vec3 expected = -cross(m, b_eff) - (c.alpha / norm) * cross(m, cross(m, b_eff));
    const Vec3 got = ll_rhs(m, c);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(m.dot(got)) < 1e-12);
  }
}

TEST_CASE("Callen form differs only by the constant noise term") {
  for (int k = 0; k < 50; ++k) {
    const MeanFieldConfig c = random_collective_config(k % 2 == 0);
    const Vec3 m = random_m();
    const Vec3 diff = ll_rhs(m, c, true) - ll_rhs(m, c, false);
    CHECK((diff - Vec3(0, 0, -c.model.total_damping())).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("pure precession keeps M_z when B_eff is along z") {
  MeanFieldConfig c = base_config();
  c.model.b_field = {0, 0, 1.3};
  const double th = 0.4;
  const Vec3 d = ll_rhs({std::sin(th), 0, std::cos(th)}, c);
  CHECK(std::abs(d.z()) < 1e-15);
}

TEST_CASE("per-site mode uses half couplings at the chain ends") {
  MeanFieldConfig c = base_config();
  c.model.n_sites = 3;
  c.model.couplings = {0.4, 0.7, 1.1};
  c.model.b_field = {0.1, -0.2, 0.3};
  c.mode = MeanFieldMode::per_site;
  const Vec3 m = random_m();
  const auto d = mf_rhs(MagnetizationState::uniform(m, 3), c).vectors;

  MeanFieldConfig bulk = base_config();
  bulk.model = c.model;
  MeanFieldConfig edge = bulk;
  edge.model.couplings *= 0.5;
  const Vec3 d_bulk = mf_rhs(MagnetizationState::collective(m), bulk).vectors[0];
  const Vec3 d_edge = mf_rhs(MagnetizationState::collective(m), edge).vectors[0];
  CHECK((d[0] - d_edge).norm() < 1e-14);
  CHECK((d[1] - d_bulk).norm() < 1e-14);
  CHECK((d[2] - d_edge).norm() < 1e-14);
  CHECK_THROWS_AS(mf_rhs(MagnetizationState::uniform(m, 2), c), ConfigError);
}

TEST_CASE("free precession against the closed form") {
  MeanFieldConfig c = base_config();
  const double w = 1.7;
  c.model.b_field = {0, 0, w};
  const auto traj = integrate(c, MagnetizationState::collective({1, 0, 0}), 10.0, 1e-3, 100);
  CHECK(traj.times.back() == 10.0);
  double err = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Vec3 m = traj.states[k].vectors[0];
    err = std::max(err, std::abs(m.x() - std::cos(w * traj.times[k])));
    err = std::max(err, std::abs(m.y() - std::sin(w * traj.times[k])));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("RK4 error drops by at least 12x when dt is halved") {
  MeanFieldConfig c = base_config();
  const double w = 2.0;
  c.model.b_field = {0, 0, w};
  auto error_at = [&](double dt) {
    const auto traj = integrate(c, MagnetizationState::collective({1, 0, 0}), 5.0, dt, 1 << 30);
    const Vec3 m = traj.states.back().vectors[0];
    return std::hypot(m.x() - std::cos(w * 5.0), m.y() - std::sin(w * 5.0));
  };
  const double coarse = error_at(0.04);
  const double fine = error_at(0.02);
  CHECK(coarse / fine >= 12.0);
  CHECK(step_halving_error(c, MagnetizationState::collective({1, 0, 0}), 5.0, 0.04) > 0.0);
}

TEST_CASE("longitudinal relaxation against the closed form") {
  MeanFieldConfig c = base_config();
  const double gamma = 0.3;
  c.model.on_site_rates(Axis::z, Sign::minus) = gamma;
  const double mz0 = 0.6;
  const auto traj = integrate(c, MagnetizationState::collective({0, 0, mz0}), 10.0, 1e-3, 50);
  double err = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double expected = -1.0 + (mz0 + 1.0) * std::exp(-gamma * traj.times[k]);
    err = std::max(err, std::abs(traj.states[k].vectors[0].z() - expected));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("integrate rejects bad arguments and shortens the last step") {
  const MeanFieldConfig c = base_config();
  const auto s = MagnetizationState::collective({1, 0, 0});
  CHECK_THROWS_AS(integrate(c, s, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(integrate(c, s, 0.0, 0.1), ConfigError);
  const auto traj = integrate(c, s, 0.25, 0.1, 1);
  REQUIRE(traj.times.size() == 4);
  CHECK(traj.times[3] == 0.25);
}

TEST_CASE("magnitude is conserved without on-site damping") {
  MeanFieldConfig c = base_config();
  c.model.b_field = {0.3, -0.2, -1.0};
  c.model.couplings = {0.2, 0.5, 1.0};
  c.d_vector = Vec3(0.05, 0.02, 0.1);
  const auto traj = integrate(c, MagnetizationState::collective(tilted_direction(0.3, 0.2)),
                              1000.0, 1e-3, 1000);
  double drift = 0.0;
  for (const auto& s : traj.states) drift = std::max(drift, std::abs(s.vectors[0].norm() - 1.0));
  CHECK(drift < 1e-6);
}

TEST_CASE("steady states") {
  MeanFieldConfig c = base_config();
  c.model.b_field = {0, 0, -2};
  c.damping = DampingMode::ll_alpha;
  c.alpha = 0.5;
  auto r = steady_state(c, MagnetizationState::collective(tilted_direction(std::numbers::pi / 40, 0.3)));
  CHECK((r.state.vectors[0] - Vec3(0, 0, -1)).cwiseAbs().maxCoeff() < 1e-6);

  c = base_config();
  c.model.on_site_rates(Axis::z, Sign::minus) = 0.2;
  r = steady_state(c, MagnetizationState::collective(random_m()));
  CHECK((r.state.vectors[0] - Vec3(0, 0, -1)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(r.residual < 1e-9);

  // With ll_alpha and no on-site damping the fixed point is parallel to B_eff.
  c = base_config();
  c.model.b_field = {1, 1, -2};
  c.model.couplings = {0, 0, 0.5};
  c.damping = DampingMode::ll_alpha;
  c.alpha = 0.5;
  r = steady_state(c, MagnetizationState::collective(tilted_direction(std::numbers::pi / 40, 0)));
  const Vec3 m = r.state.vectors[0];
  const Vec3 b_eff = effective_field(m.normalized(), c.model);
  CHECK(m.normalized().cross(b_eff.normalized()).norm() < 1e-6);
  CHECK(m.dot(b_eff) > 0.0);
}

TEST_CASE("steady_state reports non-convergence with the last state") {
  MeanFieldConfig c = base_config();
  c.model.b_field = {0, 0, 1};
  SteadyStateOptions opts;
  opts.t_max = 1.0;
  try {
    steady_state(c, MagnetizationState::collective({1, 0, 0}), opts);
    FAIL("expected NotConvergedError");
  } catch (const NotConvergedError& e) {
    REQUIRE(e.last_state().size() == 1);
    CHECK(std::abs(e.last_state()[0].norm() - 1.0) < 1e-9);
    CHECK(e.residual() > 0.1);
  }
}

TEST_CASE("hysteresis switching and coercivity") {
  std::vector<double> grid;
  for (int k = 0; k <= 80; ++k) grid.push_back(-2.0 + 4.0 * k / 80);
  const double spacing = 0.05;

  MeanFieldConfig c = base_config();
  c.damping = DampingMode::ll_alpha;
  c.alpha = 0.5;
  for (double vz : {0.5, 1.0}) {
    c.model.couplings = {0, 0, vz};
    c.model.b_field = Vec3::Zero();
    const HysteresisCurve h = hysteresis_sweep(c, grid);
    REQUIRE(h.switching_up.has_value());
    REQUIRE(h.switching_down.has_value());
    CHECK(std::abs(*h.switching_up - vz) <= spacing + 1e-12);
    CHECK(std::abs(*h.switching_down + vz) <= spacing + 1e-12);
    CHECK(std::abs(h.coercive_field - vz) <= spacing + 1e-12);
    CHECK(h.branch_up.size() == grid.size());
    CHECK(h.branch_down.size() == grid.size());
    CHECK(h.branch_up.front().bz == grid.front());
    CHECK(h.branch_down.front().bz == grid.back());
  }

  c.model.couplings = Vec3::Zero();
  const HysteresisCurve flat = hysteresis_sweep(c, grid);
  CHECK(flat.coercive_field == 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& up = flat.branch_up[k];
    const auto& down = flat.branch_down[grid.size() - 1 - k];
    CHECK(up.bz == down.bz);
    if (up.bz != 0.0) CHECK(std::abs(up.m.z() - down.m.z()) < 1e-3);
  }

  c.model.b_field = {1, 1, 0};
  for (double vz : {0.5, 1.0}) {
    c.model.couplings = {0, 0, vz};
    CHECK(hysteresis_sweep(c, grid).coercive_field == 0.0);
  }
}

TEST_CASE("hysteresis preconditions") {
  MeanFieldConfig c = base_config();
  const std::vector<double> grid{-1.0, 0.0, 1.0};
  CHECK_THROWS_AS(hysteresis_sweep(c, grid), ConfigError);
  c.damping = DampingMode::ll_alpha;
  c.alpha = 0.5;
  c.model.on_site_rates(Axis::z, Sign::minus) = 0.1;
  CHECK_THROWS_AS(hysteresis_sweep(c, grid), ConfigError);
  c.model.on_site_rates = RateTable{};
  const std::vector<double> bad{-1.0, 1.0, 0.0};
  CHECK_THROWS_AS(hysteresis_sweep(c, bad), ConfigError);
}

}  // TEST_SUITE
