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
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace spinchain {

using Complex = std::complex<double>;

/// Dense complex square matrix: operators, density matrices, Liouvillians.
/// Row-major conventions are imposed by the functions that vectorize it,
/// not by the storage order.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

inline constexpr Complex kI{0.0, 1.0};

enum class Axis { x = 0, y = 1, z = 2 };
enum class Sign { plus = 0, minus = 1 };
enum class Orientation { up, down };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};
inline constexpr std::array<Sign, 2> kSigns{Sign::plus, Sign::minus};

constexpr int index(Axis a) { return static_cast<int>(a); }
constexpr int index(Sign s) { return static_cast<int>(s); }

constexpr std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

constexpr std::string_view to_string(Sign s) {
  return s == Sign::plus ? "+" : "-";
}

/// max |A - A^dagger| <= tol; false for non-square input.
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);

/// max |A^dagger A - 1| <= tol; false for non-square input.
bool is_unitary(const ComplexMatrix& a, double tol = 1e-12);

/// Kronecker product, left factor outermost.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const ComplexMatrix& a);

}  // namespace spinchain
