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

#include "spinchain/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinchain/errors.hpp"

namespace spinchain {

bool RateTable::all_zero() const {
  for (const auto& row : values_) {
    for (double v : row) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

double RateTable::min() const {
  double m = values_[0][0];
  for (const auto& row : values_) m = std::min({m, row[0], row[1]});
  return m;
}

double ChainModel::total_damping() const {
  return on_site_rates(Axis::z, Sign::minus) + on_site_rates(Axis::z, Sign::plus);
}

Vec3 ChainModel::neighbour_damping() const {
  Vec3 g;
  for (Axis a : kAxes) {
    g[index(a)] = neighbour_rates(a, Sign::minus) - neighbour_rates(a, Sign::plus);
  }
  return g;
}

namespace {

void check_rates(const RateTable& t, const std::string& name) {
  for (Axis a : kAxes) {
    for (Sign s : kSigns) {
      const double v = t(a, s);
      if (!std::isfinite(v) || v < 0.0) {
        throw ConfigError(ConfigError::Kind::constraint,
                          name + "." + std::string(to_string(a)) + std::string(to_string(s)),
                          "rate " + name + "[" + std::string(to_string(a)) +
                              std::string(to_string(s)) + "] must be finite and >= 0, got " +
                              std::to_string(v));
      }
    }
  }
}

}  // namespace

void ChainModel::validate() const {
  using K = ConfigError::Kind;
  if (n_sites < 1) {
    throw ConfigError(K::constraint, "n_sites", "n_sites must be >= 1");
  }
  if (!b_field.allFinite()) throw ConfigError(K::constraint, "b_field", "b_field must be finite");
  if (!couplings.allFinite()) {
    throw ConfigError(K::constraint, "couplings", "couplings must be finite");
  }
  if (!std::isfinite(n_b) || n_b < 0.0) {
    throw ConfigError(K::constraint, "n_b", "n_b must be finite and >= 0");
  }
  check_rates(on_site_rates, "on_site_rates");
  check_rates(neighbour_rates, "neighbour_rates");
}

void apply_thermal_rates(ChainModel& model, const ThermalRates& rates) {
  using K = ConfigError::Kind;
  if (!std::isfinite(rates.gamma_total) || rates.gamma_total < 0.0) {
    throw ConfigError(K::constraint, "gamma_total", "gamma_total must be finite and >= 0");
  }
  if (!std::isfinite(rates.n_b) || rates.n_b < 0.0) {
    throw ConfigError(K::constraint, "n_b", "n_b must be finite and >= 0");
  }
  if (!std::isfinite(rates.g_ratio) || rates.g_ratio < 0.0) {
    throw ConfigError(K::constraint, "g_ratio", "g_ratio must be finite and >= 0");
  }
  const double gamma0 = rates.gamma_total / (2.0 * rates.n_b + 1.0);
  const double up = gamma0 * rates.n_b;
  const double down = gamma0 * (rates.n_b + 1.0);

  model.n_b = rates.n_b;
  model.on_site_rates = RateTable{};
  model.neighbour_rates = RateTable{};
  model.on_site_rates(Axis::z, Sign::plus) = up;
  model.on_site_rates(Axis::z, Sign::minus) = down;
  for (Axis a : kAxes) {
    if (a != Axis::z && !rates.all_axes) continue;
    model.neighbour_rates(a, Sign::plus) = rates.g_ratio * up;
    model.neighbour_rates(a, Sign::minus) = rates.g_ratio * down;
  }
}

}  // namespace spinchain
