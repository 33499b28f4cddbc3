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

#include <span>
#include <utility>
#include <vector>

#include "spinchain/types.hpp"

// Observables of chain density matrices. Sites are 1-based, site 1 is the
// leftmost Kronecker factor.

namespace spinchain {

/// Reduced state on the sites in `keep`, ordered as given (must be strictly
/// increasing). Throws std::invalid_argument for empty, unordered or
/// out-of-range site lists.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_sites, std::span<const int> keep);

/// (Tr rho sigma_x, Tr rho sigma_y, Tr rho sigma_z) of a 2x2 state.
Vec3 bloch_vector(const ComplexMatrix& rho_site);

/// <sigma^{(j)}> for every site.
std::vector<Vec3> site_magnetizations(const ComplexMatrix& rho, int n_sites);

/// M = (1/N) Sum_j <sigma^{(j)}>.
Vec3 magnetization(const ComplexMatrix& rho, int n_sites);

/// C = <sigma_a^{(i)} sigma_b^{(j)}> - <sigma_a^{(i)}><sigma_b^{(j)}>.
/// Throws std::invalid_argument when i == j or the imaginary residue
/// exceeds 1e-10.
double two_point_correlation(const ComplexMatrix& rho, int n_sites, int i, int j, Axis a, Axis b);

struct CorrelationRecord {
  int site_i = 1;
  int site_j = 2;
  Axis axis_a = Axis::x;
  Axis axis_b = Axis::x;
  double value = 0.0;
  double time = 0.0;
};

/// Wootters concurrence of a two-qubit state.
double concurrence(const ComplexMatrix& rho_pair);

/// Concurrence of the reduced state of sites i and j.
double concurrence(const ComplexMatrix& rho, int n_sites, int i, int j);

struct DeviationSeries {
  std::vector<double> times;
  /// |M_mf - M_exact|^2 at each time.
  std::vector<double> values;
  /// Trapezoidal mean over the window.
  double time_average = 0.0;
};

/// Pointwise squared distance of two magnetization series on a shared time
/// grid; the average covers samples with window.first <= t <= window.second.
/// Throws std::invalid_argument for mismatched grids or a window holding
/// fewer than one sample.
DeviationSeries deviation_series(std::span<const double> times, std::span<const Vec3> mf,
                                 std::span<const Vec3> exact,
                                 std::pair<double, double> window = {0.0, 1e3});

}  // namespace spinchain
