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

#include "spinchain/types.hpp"

namespace spinchain {

/// Rates indexed by (axis, sign): absorption (+) and emission (-) per axis.
class RateTable {
 public:
  double operator()(Axis a, Sign s) const { return values_[index(a)][index(s)]; }
  double& operator()(Axis a, Sign s) { return values_[index(a)][index(s)]; }

  bool all_zero() const;
  double min() const;

  friend bool operator==(const RateTable&, const RateTable&) = default;

 private:
  std::array<std::array<double, 2>, 3> values_{};
};

/// Physical configuration of the open chain, in units where gamma = hbar = 1.
struct ChainModel {
  int n_sites = 1;
  Vec3 b_field = Vec3::Zero();
  /// Nearest-neighbour exchange (V_x, V_y, V_z).
  Vec3 couplings = Vec3::Zero();
  RateTable on_site_rates;
  RateTable neighbour_rates;
  /// Mean boson number of the bath.
  double n_b = 0.08;

  /// Gamma = gamma_{z,-} + gamma_{z,+}.
  double total_damping() const;

  /// g_alpha = g_{alpha,-} - g_{alpha,+}.
  Vec3 neighbour_damping() const;

  /// Throws ConfigError(constraint) on n_sites < 1, negative rates,
  /// negative n_b, or non-finite fields.
  void validate() const;
};

/// Thermal parameterization of the z-axis rates:
///   gamma_0 = Gamma / (2 n_b + 1)
///   gamma_{z,+} = gamma_0 n_b,  gamma_{z,-} = gamma_0 (n_b + 1)
///   g_{z,eta} = g_ratio * gamma_{z,eta}
/// With all_axes the same neighbour rates are applied to x and y as well.
struct ThermalRates {
  double gamma_total = 0.0;
  double n_b = 0.08;
  double g_ratio = 0.1;
  bool all_axes = false;

  friend bool operator==(const ThermalRates&, const ThermalRates&) = default;
};

/// Overwrites the model's on-site and neighbour rates and n_b.
void apply_thermal_rates(ChainModel& model, const ThermalRates& rates);

}  // namespace spinchain
