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

#include <vector>

#include "nhssh/linalg.hpp"
#include "nhssh/ssh_model.hpp"

namespace nhssh::dynamics {

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Vec2> raw_states;
  std::vector<double> populations_z;   // P0 in the z basis, normalized state
  std::vector<double> fidelity_to_R1;  // |<R1^|psi^>|^2
};

struct SteadyState {
  Vec2 state;  // normalized
  double fidelity_to_R1;
};

/// exp(-i H t) for an arbitrary 2x2 H. Exact closed form, valid through
/// exceptional points.
ComplexMatrix2 propagator(const ComplexMatrix2& H, double t);

Vec2 evolve_nonunitary(const ComplexMatrix2& H, const Vec2& psi0, double t);

EvolutionResult evolve_series(const ComplexMatrix2& H, const Vec2& psi0,
                              const std::vector<double>& times, const Vec2& reference);

SteadyState steady_eigenstate(const ssh::SSHParams& p, const Vec2& psi0, double horizon);

double decay_horizon(Complex lambda1, Complex lambda2, double epsilon);

/// Horizon used by the state-preparation step. In emulation mode the value
/// is capped at the 1.8 us coherence budget.
enum class HorizonMode { Emulation, Simulation };
double default_horizon(const ssh::SSHParams& p, HorizonMode mode, double epsilon = 1e-3);

inline constexpr double kCoherenceBudget = 1.8;  // us

ComplexMatrix2 rotation_y();
ComplexMatrix2 rotate_hamiltonian_y(const ComplexMatrix2& H);
/// Initial state to use with the rotated Hamiltonian, U_y^dag psi.
Vec2 rotate_state_y(const Vec2& psi);

/// |<a^|b^>|^2 for unnormalized a, b.
double fidelity(const Vec2& a, const Vec2& b);

}  // namespace nhssh::dynamics
