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

#include "spinchain/model.hpp"
#include "spinchain/types.hpp"

// Single-site and many-body spin operators.
//
// Basis: canonical sigma_z basis with |up>_z = (1, 0) first. Site 1 is the
// leftmost Kronecker factor. Spin operators are S = sigma / 2 (hbar = 1).

namespace spinchain {

/// Two-component spinor in the sigma_z basis (index 0 = |up>_z).
struct AxisSpinor {
  Axis axis;
  Orientation orientation;
  Eigen::Vector2cd amplitudes;
};

ComplexMatrix pauli(Axis axis);

/// S_alpha = sigma_alpha / 2.
ComplexMatrix spin_operator(Axis axis);

/// Eigenstates of sigma_axis with the phase conventions
///   |up_x>   = ( |up> + |dn>) / sqrt2     |dn_x> = (-|up> +  |dn>) / sqrt2
///   |up_y>   = ( |up> + i|dn>) / sqrt2    |dn_y> = (-|up> + i|dn>) / sqrt2
/// and the canonical basis vectors for z.
AxisSpinor axis_eigenstate(Axis axis, Orientation orientation);

/// Flip-flop jump operators
///   S_{x,+-} = -S_z +- i S_y,  S_{y,+-} = S_z +- i S_x,  S_{z,+-} = S_x +- i S_y
/// with S_{a,+}|dn_a> ~ |up_a> and S_{a,-}|up_a> ~ |dn_a>.
ComplexMatrix jump_operator(Axis axis, Sign sign);

/// 1 (x) ... (x) op (x) ... (x) 1 with op at 1-based `site` of `n_sites`.
/// Throws std::out_of_range for a site outside [1, n_sites].
ComplexMatrix embed_site(const ComplexMatrix& op, int site, int n_sites);

/// Sum_j S_axis^{(j)}.
ComplexMatrix total_spin(Axis axis, int n_sites);

/// H = Sum_j B.S^{(j)} + Sum_alpha Sum_{j<N} V_alpha S_alpha^{(j)} S_alpha^{(j+1)}.
ComplexMatrix build_hamiltonian(const ChainModel& model);

}  // namespace spinchain
