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
#include <optional>
#include <vector>

#include "nhssh/linalg.hpp"

namespace nhssh::dilation {

inline constexpr std::size_t kMaxIntervals = 4'000'000;
inline constexpr double kMaxEta0 = 1e7;

struct DilationConfig {
  double eta0 = 8.0;
  double step = 1e-4;    // us
  double horizon = 1.5;  // us
  /// PositivityLoss fires when min eig(M - I) drops below this value.
  double positivity_floor = 0.0;
  /// Overrides M(0) = (1 + eta0^2) I when set.
  std::optional<ComplexMatrix2> M0;

  ComplexMatrix2 initial_M() const;
  std::size_t intervals() const;
  void validate() const;
};

using PauliCoefficients = std::array<double, 4>;

struct DilationTrajectory {
  ComplexMatrix2 H;
  double step = 0.0;
  std::vector<double> times;
  std::vector<ComplexMatrix2> M;
  std::vector<ComplexMatrix2> eta;
  std::vector<ComplexMatrix2> eta_dot;
  std::vector<ComplexMatrix2> Lambda;
  std::vector<ComplexMatrix2> Gamma;
  std::array<std::vector<double>, 4> A;
  std::array<std::vector<double>, 4> B;
  double min_positivity = 0.0;         // min over t of min eig(M - I)
  double max_hermiticity_defect = 0.0; // before symmetrization of Lambda, Gamma

  std::size_t size() const { return times.size(); }
  ComplexMatrix4 en_hamiltonian(std::size_t i) const;
};

struct MTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix2> M;
  double min_positivity = 0.0;
};

struct Generators {
  ComplexMatrix2 Lambda;
  ComplexMatrix2 Gamma;
  double hermiticity_defect = 0.0;
};

struct PostSelected {
  Vec2 psi;
  double success_probability;
};

/// RK4 on i dM/dt = H^dag M - M H with per-step symmetrization.
MTrajectory solve_M(const ComplexMatrix2& H, const DilationConfig& config);

/// e^{-i H^dag t} M0 e^{i H t}.
ComplexMatrix2 closed_form_M(const ComplexMatrix2& H, const ComplexMatrix2& M0, double t);

ComplexMatrix2 eta_from_M(const ComplexMatrix2& M);

/// Fourth-order finite-difference derivative of a uniformly sampled track.
std::vector<ComplexMatrix2> time_derivative(const std::vector<ComplexMatrix2>& track, double step);

Generators dilated_hamiltonian(const ComplexMatrix2& H, const ComplexMatrix2& eta,
                               const ComplexMatrix2& eta_dot, const ComplexMatrix2& M_inv);

PauliCoefficients pauli_decompose(const ComplexMatrix2& X);
ComplexMatrix2 pauli_compose(const PauliCoefficients& c);

ComplexMatrix4 en_hamiltonian(const ComplexMatrix2& Lambda, const ComplexMatrix2& Gamma);

/// Full pipeline: M(t), eta(t), eta_dot(t), Lambda(t), Gamma(t), Pauli tracks.
DilationTrajectory build_trajectory(const ComplexMatrix2& H, const DilationConfig& config);

/// Smallest eta0 >= eta0_floor for which M(t) - I stays above
/// positivity_floor with a safety factor over [0, horizon].
double required_eta0(const ComplexMatrix2& H, double horizon, double eta0_floor,
                     double positivity_floor = 0.0, double margin = 1.1);

/// Nuclear states in the |up>, |down> basis.
Vec2 nuclear_minus();
Vec2 nuclear_plus();

Vec4 initial_dilated_state(const Vec2& psi0, const ComplexMatrix2& eta0);

/// Psi(t) on every trajectory sample; fourth-order Magnus steps with H_en
/// interpolated between samples.
std::vector<Vec4> evolve_dilated(const DilationTrajectory& traj, const Vec4& Psi0);

PostSelected postselect_minus(const Vec4& Psi);

}  // namespace nhssh::dilation
