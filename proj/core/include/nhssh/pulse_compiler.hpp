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

#include <utility>
#include <vector>

#include "nhssh/dilation.hpp"
#include "nhssh/linalg.hpp"

namespace nhssh::pulse {

/// Static NV constants in rad/us.
struct NVParams {
  double D = 2.0 * kPi * 2870.0;
  double omega_e = 2.0 * kPi * 2.8025 * 480.0;
  double omega_n = 2.0 * kPi * 1.0705e-3 * 480.0;
  double A_zz = 2.0 * kPi * 13.7;

  void validate() const;
  /// Low-frequency stand-in used by the lab-frame check.
  static NVParams scaled();
};

struct PulseSample {
  double t = 0.0;
  double omega1 = 0.0, omega2 = 0.0;  // rad/us
  double delta1 = 0.0, delta2 = 0.0;  // rad/us
  double Omega1 = 0.0, Omega2 = 0.0;  // MHz
  double phi1 = 0.0, phi2 = 0.0;      // rad, (-pi, pi]
};

/// Diagonal terms absorbed into the rotating frame (A0 is a global phase).
struct FrameTrack {
  std::vector<double> A0, A3, B0, B3;
};

struct PulseSchedule {
  NVParams nv;
  double omega_up = 0.0;
  double omega_down = 0.0;
  std::vector<PulseSample> samples;
  FrameTrack frame;
};

ComplexMatrix4 nv_reduced_hamiltonian(const NVParams& nv);

/// Positive electron transition frequencies |0,n> -> |-1,n> for n = up, down.
std::pair<double, double> resonance_frequencies(const NVParams& nv);

PulseSample compile_sample(double t, const dilation::PauliCoefficients& A,
                           const dilation::PauliCoefficients& B, double omega_up, double omega_down);

PulseSchedule compile(const dilation::DilationTrajectory& traj, const NVParams& nv);

ComplexMatrix4 effective_hamiltonian(const PulseSample& sample, double A3, double B0, double B3);

/// Inverse of the block structure of H_eff: (Lambda - A0 I, Gamma).
std::pair<ComplexMatrix2, ComplexMatrix2> decompile(const ComplexMatrix4& H_eff);

/// Max entrywise error of compile -> effective_hamiltonian -> decompile
/// against the trajectory's Lambda(t), Gamma(t).
double roundtrip_residual(const dilation::DilationTrajectory& traj, const PulseSchedule& schedule);

/// Phase track with 2 pi jumps removed.
std::vector<double> unwrap(const std::vector<double>& phases);

struct RotatingFrameOptions {
  double horizon = 0.05;     // us
  double step = 0.0;         // us; 0 picks 1/(100 w_max)
  double drive_scale = 1.0;  // multiplies Omega1, Omega2
};

/// Integrates the lab-frame two-tone drive, maps it through U_rot and
/// returns the max pure-state distance to evolution under H_eff.
double rotating_frame_check(const NVParams& nv, const PulseSchedule& schedule, const Vec4& Psi0,
                            const RotatingFrameOptions& options = {});

}  // namespace nhssh::pulse
