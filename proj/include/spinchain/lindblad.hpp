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
#include <string>
#include <vector>

#include "spinchain/model.hpp"
#include "spinchain/types.hpp"

// Exact master-equation dynamics of the open chain.
//
// Density matrices are vectorized row-major, |k,l>> = |k> (x) |l>, so that
// vec(A rho B) = (A (x) B^T) vec(rho). The generator is
//
//   L = -i (H (x) 1 - 1 (x) H^T)
//       + Sum_{j,a,e} gamma_{a,e} D[S^{(j)}_{a,e}, S^{(j)}_{a,e}]
//       + Sum_{|j-j'|=1,a,e} g_{a,e} D[S^{(j')}_{a,e}, S^{(j)}_{a,e}]
//
// with D[A,B] rho = A rho B^dagger - 1/2 {B^dagger A, rho}.

namespace spinchain {

inline constexpr int kDefaultMaxSites = 6;

ComplexVector vectorize(const ComplexMatrix& rho);

/// Inverse of vectorize. Throws std::invalid_argument unless the length is
/// a perfect square.
ComplexMatrix devectorize(const ComplexVector& v);

struct Liouvillian {
  ComplexMatrix matrix;
  ChainModel model;

  /// Hilbert-space dimension 2^N.
  Eigen::Index hilbert_dim() const;
  /// L(rho) as a matrix.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

/// Throws CapacityError when model.n_sites > max_sites.
Liouvillian build_liouvillian(const ChainModel& model, int max_sites = kDefaultMaxSites);

/// N x N tridiagonal matrix with gamma_{a,e} on the diagonal and g_{a,e} on
/// the first off-diagonals. The combined on-site and neighbour dissipator for
/// (a, e) is completely positive iff this matrix is positive semidefinite.
RealMatrix dissipator_rate_matrix(const ChainModel& model, Axis axis, Sign sign);

double min_eigenvalue(const RealMatrix& symmetric);
bool is_positive_semidefinite(const RealMatrix& symmetric, double tol = 1e-12);

/// One human-readable warning per (axis, sign) whose rate matrix is not PSD.
std::vector<std::string> complete_positivity_warnings(const ChainModel& model);

/// Tensor product of single-spin states (1 + f.sigma)/2, site 1 leftmost.
ComplexMatrix product_state(std::span<const Vec3> bloch_vectors);

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  double max_trace_deviation = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  /// Trace deviation above 1e-8 or eigenvalue below -1e-6 somewhere.
  bool flagged = false;
};

/// Fixed-step RK4 on d vec(rho)/dt = L vec(rho). Samples every
/// `sample_stride` steps plus the final time. Monitors trace, hermiticity and
/// positivity at every sample. Throws IntegrationDivergedError on non-finite
/// values.
DensityTrajectory evolve_rk4(const Liouvillian& liouvillian, const ComplexMatrix& rho0,
                             double t_end, double dt, int sample_stride = 1);

/// Eigen-decomposition L R_k = lambda_k R_k with dual left matrices L_k,
/// Tr(R_k L_k') = delta_kk'. Index 0 is the stationary mode; the rest are
/// ordered by decreasing real part (ties: increasing imaginary part).
struct LiouvillianSpectrum {
  std::vector<Complex> eigenvalues;
  /// Column k is vec(R_k).
  ComplexMatrix right;
  /// Row k, reshaped and transposed, is L_k; left * right = 1.
  ComplexMatrix left;
  double condition_number = 0.0;
  Eigen::Index hilbert_dim = 0;

  ComplexMatrix right_matrix(std::size_t k) const;
  ComplexMatrix left_matrix(std::size_t k) const;
  /// c_k = Tr(rho0 L_k).
  ComplexVector coefficients(const ComplexMatrix& rho0) const;
  /// max_{k,k'} |Tr(R_k L_k') - delta_kk'|.
  double biorthonormality_residual() const;
  /// Number of eigenvalues with |lambda| < tol.
  int zero_mode_count(double tol = 1e-9) const;
};

/// Throws SpectralUnreliableError when the eigenvector basis has a
/// 1-norm condition number above max_condition.
LiouvillianSpectrum spectral_decompose(const Liouvillian& liouvillian,
                                       double max_condition = 1e10);

/// rho(t) = Sum_k c_k e^{lambda_k t} R_k, hermitized. The trace is left
/// as computed and reported through max_trace_deviation.
DensityTrajectory evolve_spectral(const LiouvillianSpectrum& spectrum, const ComplexMatrix& rho0,
                                  std::span<const double> times);

/// Unit-trace hermitized R for the stationary mode. Throws
/// NonUniqueSteadyStateError if more than one eigenvalue is zero within
/// zero_tol.
ComplexMatrix steady_state_exact(const LiouvillianSpectrum& spectrum, double zero_tol = 1e-9);

/// Stationary state from the linear system L vec(rho) = 0, Tr rho = 1
/// (one row of L replaced by the trace functional). Independent of the
/// eigensolver.
ComplexMatrix steady_state_linear(const Liouvillian& liouvillian);

}  // namespace spinchain
