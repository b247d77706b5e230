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

#include <optional>
#include <string>
#include <vector>

#include "nhssh/linalg.hpp"

namespace nhssh::ssh {

struct SSHParams {
  double v = 0.0;
  double r = 0.0;
  double gamma = 1.0;  // rad/us
  double k = 0.0;      // rad

  double hx() const;
  double hz() const;
  void validate() const;
};

struct EigenSystem {
  Complex theta;
  Complex lambda1;
  Complex lambda2;
  Vec2 R1, R2;
  Vec2 L1, L2;
  bool ordering_degenerate = false;
};

struct ExceptionalMomentum {
  double k;
  std::string description;
};

struct PhaseClass {
  double w;
  int enclosed_ep_count;
};

inline constexpr double kGapTolerance = 1e-8;
inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kBoundaryTolerance = 1e-9;

ComplexMatrix2 hamiltonian(const SSHParams& p);

/// Same model without the i/2 gain/loss term.
ComplexMatrix2 hermitian_limit(const SSHParams& p);

/// Eigenstructure with theta on the principal branch.
EigenSystem eigensystem(const SSHParams& p);

/// Eigenvectors and eigenvalues for a given theta; band 1 holds (cos, -sin).
EigenSystem eigensystem_from_theta(Complex theta, Complex lambda1, bool degenerate);

std::vector<ExceptionalMomentum> exceptional_momenta(double v, double r);

PhaseClass classify_phase(double v, double r);

double normalized_expectation(const Vec2& state, Axis axis);

/// One point of a continuity-tracked sweep.
struct TrackedPoint {
  double k;
  Complex theta;   // continuous in k
  int band;        // band of the principal eigensystem that theta follows
  EigenSystem eig; // eigenvectors rebuilt from the tracked theta
};

/// Follows theta(k) continuously along the ordered momenta ks. The start is
/// the band-1 principal value at ks.front(), or the branch nearest to
/// anchor when given. Internal substeps keep each increment below max_step.
std::vector<TrackedPoint> track(double v, double r, double gamma, const std::vector<double>& ks,
                                double max_step = 2.0 * kPi / 512.0, std::optional<Complex> anchor = {});

}  // namespace nhssh::ssh
