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

#include "nhssh/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "nhssh/error.hpp"

namespace nhssh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PhaseBoundary: return "PhaseBoundary";
    case ErrorCode::UnknownFlip: return "UnknownFlip";
    case ErrorCode::OpenLoop: return "OpenLoop";
    case ErrorCode::ExceptionalPoint: return "ExceptionalPoint";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::DegenerateDecay: return "DegenerateDecay";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::PositivityLoss: return "PositivityLoss";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::PostselectionVanished: return "PostselectionVanished";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::SingularRates: return "SingularRates";
    case ErrorCode::SubspaceEmpty: return "SubspaceEmpty";
    case ErrorCode::OverlapVanished: return "OverlapVanished";
    case ErrorCode::OutsideBloch: return "OutsideBloch";
    case ErrorCode::Ambiguous: return "Ambiguous";
    case ErrorCode::NotHalfWinding: return "NotHalfWinding";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::PhaseBoundary:
    case ErrorCode::UnknownFlip:
    case ErrorCode::OpenLoop:
    case ErrorCode::OutsideBloch:
    case ErrorCode::Ambiguous:
    case ErrorCode::NotHalfWinding:
      return true;
    default:
      return false;
  }
}

namespace pauli {

ComplexMatrix2 identity() { return ComplexMatrix2::Identity(); }

ComplexMatrix2 x() {
  ComplexMatrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix2 y() {
  ComplexMatrix2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix2 z() {
  ComplexMatrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix2 of(Axis axis) {
  switch (axis) {
    case Axis::X: return x();
    case Axis::Y: return y();
    case Axis::Z: return z();
  }
  return z();
}

}  // namespace pauli

ComplexMatrix4 kron(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  ComplexMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Vec4 kron(const Vec2& a, const Vec2& b) {
  Vec4 out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

double pure_state_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "state dimensions differ");
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroNorm, "zero state in distance");
  // ||a||^2 ||b||^2 - |<a|b>|^2 = (1/2) sum_{i,j} |a_i b_j - a_j b_i|^2
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j) acc += std::norm(a(i) * b(j) - a(j) * b(i));
  return std::sqrt(acc / (na * nb));
}

ComplexMatrix4 unitary_propagator(const ComplexMatrix4& hermitian, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix4> es(hermitian_part(hermitian));
  Vec4 phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(-kI * es.eigenvalues()(i) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const ComplexMatrix2& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix2> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace nhssh
