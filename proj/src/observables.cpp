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

#include "spinchain/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinchain/spin_core.hpp"

namespace spinchain {

namespace {

void check_dimension(const ComplexMatrix& rho, int n_sites) {
  if (n_sites < 1 || n_sites > 30 || rho.rows() != (Eigen::Index{1} << n_sites) ||
      rho.cols() != rho.rows()) {
    throw std::invalid_argument("density matrix of size " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + " does not describe " +
                                std::to_string(n_sites) + " sites");
  }
}

void check_site(int site, int n_sites) {
  if (site < 1 || site > n_sites) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside [1, " +
                                std::to_string(n_sites) + "]");
  }
}

// Bit of site s (1-based) in a basis index; site 1 is the most significant.
inline int bit(Eigen::Index idx, int site, int n_sites) {
  return static_cast<int>((idx >> (n_sites - site)) & 1);
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_sites, std::span<const int> keep) {
  check_dimension(rho, n_sites);
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep must be nonempty");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    check_site(keep[k], n_sites);
    if (k > 0 && keep[k] <= keep[k - 1]) {
      throw std::invalid_argument("partial_trace: sites must be strictly increasing");
    }
  }
  std::vector<int> traced;
  for (int s = 1; s <= n_sites; ++s) {
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
  }
  const auto n_keep = static_cast<int>(keep.size());
  auto reduced_index = [&](Eigen::Index idx) {
    Eigen::Index r = 0;
    for (int s : keep) r = (r << 1) | bit(idx, s, n_sites);
    return r;
  };
  auto traced_index = [&](Eigen::Index idx) {
    Eigen::Index r = 0;
    for (int s : traced) r = (r << 1) | bit(idx, s, n_sites);
    return r;
  };

  const Eigen::Index d = rho.rows();
  std::vector<Eigen::Index> red(static_cast<std::size_t>(d)), env(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    red[k] = reduced_index(k);
    env[k] = traced_index(k);
  }
  const Eigen::Index dk = Eigen::Index{1} << n_keep;
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      if (env[r] == env[c]) out(red[r], red[c]) += rho(r, c);
    }
  }
  return out;
}

Vec3 bloch_vector(const ComplexMatrix& rho_site) {
  if (rho_site.rows() != 2 || rho_site.cols() != 2) {
    throw std::invalid_argument("bloch_vector: expected a 2x2 matrix");
  }
  Vec3 f;
  for (Axis a : kAxes) f[index(a)] = (rho_site * pauli(a)).trace().real();
  return f;
}

std::vector<Vec3> site_magnetizations(const ComplexMatrix& rho, int n_sites) {
  check_dimension(rho, n_sites);
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n_sites));
  for (int j = 1; j <= n_sites; ++j) {
    const std::array<int, 1> keep{j};
    out.push_back(bloch_vector(partial_trace(rho, n_sites, keep)));
  }
  return out;
}

Vec3 magnetization(const ComplexMatrix& rho, int n_sites) {
  Vec3 m = Vec3::Zero();
  for (const Vec3& f : site_magnetizations(rho, n_sites)) m += f;
  return m / n_sites;
}

double two_point_correlation(const ComplexMatrix& rho, int n_sites, int i, int j, Axis a, Axis b) {
  check_dimension(rho, n_sites);
  check_site(i, n_sites);
  check_site(j, n_sites);
  if (i == j) throw std::invalid_argument("two_point_correlation: sites must differ");
  const ComplexMatrix si = embed_site(pauli(a), i, n_sites);
  const ComplexMatrix sj = embed_site(pauli(b), j, n_sites);
  const Complex joint = (rho * si * sj).trace();
  const Complex mi = (rho * si).trace();
  const Complex mj = (rho * sj).trace();
  const Complex c = joint - mi * mj;
  if (std::abs(c.imag()) > 1e-10) {
    throw std::invalid_argument("two_point_correlation: imaginary part " +
                                std::to_string(c.imag()) + " exceeds 1e-10");
  }
  return c.real();
}

double concurrence(const ComplexMatrix& rho_pair) {
  if (rho_pair.rows() != 4 || rho_pair.cols() != 4) {
    throw std::invalid_argument("concurrence: expected a 4x4 matrix");
  }
  const ComplexMatrix yy = kron(pauli(Axis::y), pauli(Axis::y));
  const ComplexMatrix flipped = yy * rho_pair.conjugate() * yy;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(rho_pair * flipped, false);
  std::array<double, 4> alpha{};
  for (int k = 0; k < 4; ++k) {
    double ev = es.eigenvalues()[k].real();
    if (ev < 0.0 && ev > -1e-10) ev = 0.0;
    alpha[k] = std::sqrt(std::max(ev, 0.0));
  }
  std::sort(alpha.begin(), alpha.end(), std::greater<>());
  return std::clamp(alpha[0] - alpha[1] - alpha[2] - alpha[3], 0.0, 1.0);
}

double concurrence(const ComplexMatrix& rho, int n_sites, int i, int j) {
  check_dimension(rho, n_sites);
  check_site(i, n_sites);
  check_site(j, n_sites);
  if (i == j) throw std::invalid_argument("concurrence: sites must differ");
  const std::array<int, 2> keep{std::min(i, j), std::max(i, j)};
  return concurrence(partial_trace(rho, n_sites, keep));
}

DeviationSeries deviation_series(std::span<const double> times, std::span<const Vec3> mf,
                                 std::span<const Vec3> exact, std::pair<double, double> window) {
  if (mf.size() != times.size() || exact.size() != times.size()) {
    throw std::invalid_argument("deviation_series: series lengths differ (" +
                                std::to_string(times.size()) + ", " + std::to_string(mf.size()) +
                                ", " + std::to_string(exact.size()) + ")");
  }
  DeviationSeries out;
  out.times.assign(times.begin(), times.end());
  out.values.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    out.values.push_back((mf[k] - exact[k]).squaredNorm());
  }

  std::vector<std::size_t> in;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= window.first && times[k] <= window.second) in.push_back(k);
  }
  if (in.empty()) throw std::invalid_argument("deviation_series: no samples inside the window");
  if (in.size() == 1) {
    out.time_average = out.values[in.front()];
    return out;
  }
  double integral = 0.0;
  for (std::size_t k = 1; k < in.size(); ++k) {
    const double h = times[in[k]] - times[in[k - 1]];
    if (!(h > 0.0)) throw std::invalid_argument("deviation_series: times must increase");
    integral += 0.5 * h * (out.values[in[k]] + out.values[in[k - 1]]);
  }
  out.time_average = integral / (times[in.back()] - times[in.front()]);
  return out;
}

}  // namespace spinchain
