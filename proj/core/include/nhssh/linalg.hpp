// Copyright 2026 The nhssh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace nhssh {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using ComplexMatrix2 = Eigen::Matrix2cd;
using ComplexMatrix4 = Eigen::Matrix4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class Axis { X, Y, Z };

namespace pauli {
ComplexMatrix2 identity();
ComplexMatrix2 x();
ComplexMatrix2 y();
ComplexMatrix2 z();
ComplexMatrix2 of(Axis axis);
}  // namespace pauli

/// Kronecker product; the left factor is the electron, the right the nucleus.
ComplexMatrix4 kron(const ComplexMatrix2& a, const ComplexMatrix2& b);
Vec4 kron(const Vec2& a, const Vec2& b);

template <typename Derived>
double hermiticity_deviation(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return ((m + m.adjoint()) * 0.5).eval();
}

/// Trace distance between the pure states spanned by a and b (neither needs
/// to be normalized). Uses sum_{i<j} |a_i b_j - a_j b_i|^2 so that distances
/// far below sqrt(machine epsilon) stay resolvable.
double pure_state_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// exp(-i H t) for Hermitian H via its eigendecomposition.
ComplexMatrix4 unitary_propagator(const ComplexMatrix4& hermitian, double t);

/// Minimum eigenvalue of the Hermitian part of m.
double min_eigenvalue(const ComplexMatrix2& m);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

}  // namespace nhssh
