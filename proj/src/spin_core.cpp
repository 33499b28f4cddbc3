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

#include "spinchain/spin_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinchain {

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  ComplexMatrix diff = a.adjoint() * a;
  diff -= ComplexMatrix::Identity(a.rows(), a.cols());
  return max_abs(diff) <= tol;
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix pauli(Axis axis) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case Axis::y:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case Axis::z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

ComplexMatrix spin_operator(Axis axis) { return 0.5 * pauli(axis); }

AxisSpinor axis_eigenstate(Axis axis, Orientation orientation) {
  const double r = 1.0 / std::sqrt(2.0);
  const bool up = orientation == Orientation::up;
  Eigen::Vector2cd v;
  switch (axis) {
    case Axis::x:
      v << (up ? r : -r), r;
      break;
    case Axis::y:
      v << Complex(up ? r : -r), Complex(0.0, r);
      break;
    case Axis::z:
      if (up) {
        v << 1.0, 0.0;
      } else {
        v << 0.0, 1.0;
      }
      break;
  }
  return {axis, orientation, v};
}

ComplexMatrix jump_operator(Axis axis, Sign sign) {
  const double s = sign == Sign::plus ? 1.0 : -1.0;
  switch (axis) {
    case Axis::x:
      return -spin_operator(Axis::z) + s * kI * spin_operator(Axis::y);
    case Axis::y:
      return spin_operator(Axis::z) + s * kI * spin_operator(Axis::x);
    case Axis::z:
      return spin_operator(Axis::x) + s * kI * spin_operator(Axis::y);
  }
  return {};
}

ComplexMatrix embed_site(const ComplexMatrix& op, int site, int n_sites) {
  if (n_sites < 1 || site < 1 || site > n_sites) {
    throw std::out_of_range("embed_site: site " + std::to_string(site) +
                            " outside [1, " + std::to_string(n_sites) + "]");
  }
  const Eigen::Index d = op.rows();
  const Eigen::Index left = Eigen::Index{1} << (site - 1);
  const Eigen::Index right = Eigen::Index{1} << (n_sites - site);
  // 1_left (x) op (x) 1_right, written out directly so no intermediate
  // identity products are materialized.
  ComplexMatrix out = ComplexMatrix::Zero(left * d * right, left * d * right);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const Complex v = op(a, b);
        if (v == Complex{}) continue;
        for (Eigen::Index r = 0; r < right; ++r) {
          out((l * d + a) * right + r, (l * d + b) * right + r) = v;
        }
      }
    }
  }
  return out;
}

ComplexMatrix total_spin(Axis axis, int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  const ComplexMatrix s = spin_operator(axis);
  for (int j = 1; j <= n_sites; ++j) total += embed_site(s, j, n_sites);
  return total;
}

ComplexMatrix build_hamiltonian(const ChainModel& model) {
  const int n = model.n_sites;
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Axis a : kAxes) {
    const ComplexMatrix s = spin_operator(a);
    const double b = model.b_field[index(a)];
    const double v = model.couplings[index(a)];
    if (b == 0.0 && v == 0.0) continue;
    std::vector<ComplexMatrix> site_ops;
    site_ops.reserve(n);
    for (int j = 1; j <= n; ++j) site_ops.push_back(embed_site(s, j, n));
    if (b != 0.0) {
      for (const auto& op : site_ops) h += b * op;
    }
    if (v != 0.0) {
      for (int j = 0; j + 1 < n; ++j) h += v * (site_ops[j] * site_ops[j + 1]);
    }
  }
  // Entries are exact sums of +-1/4, +-i/4; symmetrize away any rounding.
  return 0.5 * (h + h.adjoint());
}

}  // namespace spinchain
