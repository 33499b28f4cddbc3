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

#include "spinchain/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "spinchain/errors.hpp"
#include "spinchain/spin_core.hpp"

namespace spinchain {

ComplexVector vectorize(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("vectorize: matrix must be square");
  }
  const Eigen::Index d = rho.rows();
  ComplexVector v(d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l < d; ++l) v[k * d + l] = rho(k, l);
  }
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) {
    throw std::invalid_argument("devectorize: length " + std::to_string(v.size()) +
                                " is not a perfect square");
  }
  ComplexMatrix rho(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l < d; ++l) rho(k, l) = v[k * d + l];
  }
  return rho;
}

Eigen::Index Liouvillian::hilbert_dim() const { return Eigen::Index{1} << model.n_sites; }

ComplexMatrix Liouvillian::apply(const ComplexMatrix& rho) const {
  return devectorize(matrix * vectorize(rho));
}

namespace {

// out += c * (a (x) b), visiting only nonzero entries of a.
void add_kron(ComplexMatrix& out, Complex c, const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows(), bc = b.cols();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Complex v = a(i, j);
      if (v == Complex{}) continue;
      out.block(i * br, j * bc, br, bc) += (c * v) * b;
    }
  }
}

// rate * D[A, B] in vectorized form.
void add_dissipator(ComplexMatrix& out, double rate, const ComplexMatrix& a,
                    const ComplexMatrix& b) {
  const Eigen::Index d = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix bda = b.adjoint() * a;
  add_kron(out, rate, a, b.conjugate());
  add_kron(out, -0.5 * rate, bda, id);
  add_kron(out, -0.5 * rate, id, bda.transpose());
}

}  // namespace

Liouvillian build_liouvillian(const ChainModel& model, int max_sites) {
  model.validate();
  if (model.n_sites > max_sites) {
    throw CapacityError(model.n_sites, max_sites,
                        "build_liouvillian: " + std::to_string(model.n_sites) +
                            " sites exceeds the cap of " + std::to_string(max_sites));
  }
  const int n = model.n_sites;
  const Eigen::Index d = Eigen::Index{1} << n;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix h = build_hamiltonian(model);

  ComplexMatrix l = ComplexMatrix::Zero(d * d, d * d);
  add_kron(l, -kI, h, id);
  add_kron(l, kI, id, h.transpose());

  for (Axis a : kAxes) {
    for (Sign s : kSigns) {
      const double on_site = model.on_site_rates(a, s);
      const double neighbour = model.neighbour_rates(a, s);
      if (on_site == 0.0 && neighbour == 0.0) continue;
      const ComplexMatrix jump = jump_operator(a, s);
      std::vector<ComplexMatrix> ops;
      ops.reserve(n);
      for (int j = 1; j <= n; ++j) ops.push_back(embed_site(jump, j, n));
      if (on_site != 0.0) {
        for (const auto& op : ops) add_dissipator(l, on_site, op, op);
      }
      if (neighbour != 0.0) {
        for (int j = 0; j + 1 < n; ++j) {
          add_dissipator(l, neighbour, ops[j + 1], ops[j]);
          add_dissipator(l, neighbour, ops[j], ops[j + 1]);
        }
      }
    }
  }
  return {std::move(l), model};
}

RealMatrix dissipator_rate_matrix(const ChainModel& model, Axis axis, Sign sign) {
  const int n = model.n_sites;
  RealMatrix m = RealMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = model.on_site_rates(axis, sign);
    if (j + 1 < n) {
      m(j, j + 1) = model.neighbour_rates(axis, sign);
      m(j + 1, j) = model.neighbour_rates(axis, sign);
    }
  }
  return m;
}

double min_eigenvalue(const RealMatrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_positive_semidefinite(const RealMatrix& symmetric, double tol) {
  return min_eigenvalue(symmetric) >= -tol;
}

std::vector<std::string> complete_positivity_warnings(const ChainModel& model) {
  std::vector<std::string> out;
  for (Axis a : kAxes) {
    for (Sign s : kSigns) {
      const RealMatrix m = dissipator_rate_matrix(model, a, s);
      const double lo = min_eigenvalue(m);
      if (lo < -1e-12) {
        std::ostringstream msg;
        msg << "rate matrix for (" << to_string(a) << "," << to_string(s)
            << ") is not positive semidefinite (min eigenvalue " << lo
            << "); the dynamics may not be completely positive";
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

ComplexMatrix product_state(std::span<const Vec3> bloch_vectors) {
  ComplexMatrix rho = ComplexMatrix::Identity(1, 1);
  for (const Vec3& f : bloch_vectors) {
    ComplexMatrix site = 0.5 * ComplexMatrix::Identity(2, 2);
    for (Axis a : kAxes) site += 0.5 * f[index(a)] * pauli(a);
    rho = kron(rho, site);
  }
  return rho;
}

namespace {

struct StateMonitor {
  double max_trace_deviation = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;

  void observe(const ComplexMatrix& raw, const ComplexMatrix& hermitized) {
    max_trace_deviation = std::max(max_trace_deviation, std::abs(raw.trace() - Complex(1.0)));
    max_hermiticity_error = std::max(max_hermiticity_error, max_abs(raw - raw.adjoint()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitized, Eigen::EigenvaluesOnly);
    min_eigenvalue = std::min(min_eigenvalue, es.eigenvalues().minCoeff());
  }

  void finish(DensityTrajectory& traj) const {
    traj.max_trace_deviation = max_trace_deviation;
    traj.max_hermiticity_error = max_hermiticity_error;
    traj.min_eigenvalue = min_eigenvalue;
    traj.flagged = max_trace_deviation > 1e-8 || min_eigenvalue < -1e-6;
  }
};

void check_state(const ComplexMatrix& rho0, Eigen::Index dim) {
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw std::invalid_argument("initial density matrix has dimension " +
                                std::to_string(rho0.rows()) + ", expected " + std::to_string(dim));
  }
}

}  // namespace

DensityTrajectory evolve_rk4(const Liouvillian& liouvillian, const ComplexMatrix& rho0,
                             double t_end, double dt, int sample_stride) {
  using K = ConfigError::Kind;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError(K::constraint, "dt", "dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError(K::constraint, "t_end", "t_end must be >= 0");
  }
  if (sample_stride < 1) throw ConfigError(K::constraint, "sample_every", "stride must be >= 1");
  check_state(rho0, liouvillian.hilbert_dim());

  const ComplexMatrix& l = liouvillian.matrix;
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  ComplexVector v = vectorize(rho0);
  ComplexVector k1(v.size()), k2(v.size()), k3(v.size()), k4(v.size()), tmp(v.size());

  DensityTrajectory traj;
  StateMonitor monitor;
  auto record = [&](double t) {
    const ComplexMatrix raw = devectorize(v);
    ComplexMatrix rho = 0.5 * (raw + raw.adjoint());
    monitor.observe(raw, rho);
    traj.times.push_back(t);
    traj.states.push_back(std::move(rho));
  };
  record(0.0);
  for (long long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    const double h = std::min(dt, t_end - t_prev);
    k1.noalias() = l * v;
    tmp = v + (0.5 * h) * k1;
    k2.noalias() = l * tmp;
    tmp = v + (0.5 * h) * k2;
    k3.noalias() = l * tmp;
    tmp = v + h * k3;
    k4.noalias() = l * tmp;
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!v.allFinite()) {
      throw IntegrationDivergedError(t_prev + h, "evolve_rk4: non-finite density matrix at t = " +
                                                     std::to_string(t_prev + h));
    }
    if (k % sample_stride == 0 || k == steps) record(k == steps ? t_end : static_cast<double>(k) * dt);
  }
  monitor.finish(traj);
  return traj;
}

ComplexMatrix LiouvillianSpectrum::right_matrix(std::size_t k) const {
  return devectorize(right.col(static_cast<Eigen::Index>(k)));
}

ComplexMatrix LiouvillianSpectrum::left_matrix(std::size_t k) const {
  return devectorize(left.row(static_cast<Eigen::Index>(k)).transpose()).transpose();
}

ComplexVector LiouvillianSpectrum::coefficients(const ComplexMatrix& rho0) const {
  check_state(rho0, hilbert_dim);
  return left * vectorize(rho0);
}

double LiouvillianSpectrum::biorthonormality_residual() const {
  ComplexMatrix gram = left * right;
  gram -= ComplexMatrix::Identity(gram.rows(), gram.cols());
  return max_abs(gram);
}

int LiouvillianSpectrum::zero_mode_count(double tol) const {
  return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                         [tol](Complex l) { return std::abs(l) < tol; }));
}

LiouvillianSpectrum spectral_decompose(const Liouvillian& liouvillian, double max_condition) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(liouvillian.matrix, true);
  if (es.info() != Eigen::Success) {
    throw SpectralUnreliableError(std::numeric_limits<double>::infinity(),
                                  "spectral_decompose: eigensolver did not converge");
  }
  const ComplexVector& values = es.eigenvalues();
  const auto n = values.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::Index stationary = 0;
  values.cwiseAbs().minCoeff(&stationary);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if ((a == stationary) != (b == stationary)) return a == stationary;
    if (values[a].real() != values[b].real()) return values[a].real() > values[b].real();
    return values[a].imag() < values[b].imag();
  });

  LiouvillianSpectrum spec;
  spec.hilbert_dim = liouvillian.hilbert_dim();
  spec.right.resize(n, n);
  spec.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    spec.eigenvalues.push_back(values[order[k]]);
    spec.right.col(k) = es.eigenvectors().col(order[k]).normalized();
  }

  // Inverting the full eigenvector matrix gives the dual basis directly;
  // inside degenerate clusters this is the Gram-matrix biorthonormalization.
  Eigen::PartialPivLU<ComplexMatrix> lu(spec.right);
  spec.left = lu.inverse();
  const double norm = spec.right.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm = spec.left.cwiseAbs().colwise().sum().maxCoeff();
  spec.condition_number = norm * inv_norm;
  if (!std::isfinite(spec.condition_number) || spec.condition_number > max_condition) {
    std::ostringstream msg;
    msg << "spectral_decompose: eigenvector basis condition number " << spec.condition_number
        << " exceeds " << max_condition << "; use time stepping instead";
    throw SpectralUnreliableError(spec.condition_number, msg.str());
  }
  return spec;
}

DensityTrajectory evolve_spectral(const LiouvillianSpectrum& spectrum, const ComplexMatrix& rho0,
                                  std::span<const double> times) {
  const ComplexVector c = spectrum.coefficients(rho0);
  const auto n = static_cast<Eigen::Index>(spectrum.eigenvalues.size());
  DensityTrajectory traj;
  StateMonitor monitor;
  ComplexVector weighted(n);
  for (double t : times) {
    for (Eigen::Index k = 0; k < n; ++k) weighted[k] = c[k] * std::exp(spectrum.eigenvalues[k] * t);
    const ComplexMatrix raw = devectorize(spectrum.right * weighted);
    ComplexMatrix rho = 0.5 * (raw + raw.adjoint());
    monitor.observe(raw, rho);
    traj.times.push_back(t);
    traj.states.push_back(std::move(rho));
  }
  monitor.finish(traj);
  return traj;
}

ComplexMatrix steady_state_exact(const LiouvillianSpectrum& spectrum, double zero_tol) {
  const int zeros = spectrum.zero_mode_count(zero_tol);
  if (zeros != 1) {
    throw NonUniqueSteadyStateError(
        zeros, "steady_state_exact: " + std::to_string(zeros) + " zero modes (expected 1)");
  }
  ComplexMatrix r = spectrum.right_matrix(0);
  r /= r.trace();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix steady_state_linear(const Liouvillian& liouvillian) {
  const Eigen::Index d = liouvillian.hilbert_dim();
  ComplexMatrix a = liouvillian.matrix;
  a.row(0).setZero();
  for (Eigen::Index k = 0; k < d; ++k) a(0, k * d + k) = 1.0;
  ComplexVector rhs = ComplexVector::Zero(d * d);
  rhs[0] = 1.0;
  const ComplexVector v = a.fullPivLu().solve(rhs);
  const ComplexMatrix rho = devectorize(v);
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace spinchain
