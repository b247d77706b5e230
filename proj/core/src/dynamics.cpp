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

#include "nhssh/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nhssh/error.hpp"

namespace nhssh::dynamics {

namespace {

Complex sinc(Complex x) {
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

ComplexMatrix2 propagator(const ComplexMatrix2& H, double t) {
  const Complex a = 0.5 * H.trace();
  const ComplexMatrix2 B = H - a * ComplexMatrix2::Identity();
  // B^2 = s^2 I for traceless B.
  const Complex s = std::sqrt(-B.determinant());
  return std::exp(-kI * a * t) *
         (std::cos(s * t) * ComplexMatrix2::Identity() - kI * t * sinc(s * t) * B);
}

Vec2 evolve_nonunitary(const ComplexMatrix2& H, const Vec2& psi0, double t) {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "negative evolution time");
  return propagator(H, t) * psi0;
}

double fidelity(const Vec2& a, const Vec2& b) {
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorCode::ZeroNorm, "fidelity of the zero vector");
  return std::norm(a.dot(b)) / (na * nb);
}

EvolutionResult evolve_series(const ComplexMatrix2& H, const Vec2& psi0,
                              const std::vector<double>& times, const Vec2& reference) {
  if (!(psi0.squaredNorm() > 0.0)) throw Error(ErrorCode::ZeroNorm, "zero initial state");
  EvolutionResult res;
  res.times = times;
  for (double t : times) {
    const Vec2 psi = evolve_nonunitary(H, psi0, t);
    res.raw_states.push_back(psi);
    res.populations_z.push_back(std::norm(psi(0)) / psi.squaredNorm());
    res.fidelity_to_R1.push_back(fidelity(reference, psi));
  }
  return res;
}

double decay_horizon(Complex lambda1, Complex lambda2, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  const double gap = lambda1.imag() - lambda2.imag();
  const double scale = std::abs(lambda1) + std::abs(lambda2);
  if (!(gap > ssh::kTieTolerance * scale))
    throw Error(ErrorCode::DegenerateDecay, "imaginary parts of the eigenvalues do not separate");
  return std::log(1.0 / epsilon) / gap;
}

double default_horizon(const ssh::SSHParams& p, HorizonMode mode, double epsilon) {
  const auto e = ssh::eigensystem(p);
  const double t = decay_horizon(e.lambda1, e.lambda2, epsilon);
  return mode == HorizonMode::Emulation ? std::min(t, kCoherenceBudget) : t;
}

SteadyState steady_eigenstate(const ssh::SSHParams& p, const Vec2& psi0, double horizon) {
  if (horizon < 0.0) throw Error(ErrorCode::InvalidArgument, "negative horizon");
  if (!(psi0.squaredNorm() > 0.0)) throw Error(ErrorCode::ZeroNorm, "zero initial state");
  const auto e = ssh::eigensystem(p);
  if (e.ordering_degenerate)
    throw Error(ErrorCode::DegenerateDecay, "no dominant band at this momentum");
  const double overlap = std::abs(e.L1.dot(psi0)) / (psi0.norm() * e.L1.norm());
  if (overlap < 1e-10)
    throw Error(ErrorCode::NoOverlap, "initial state is orthogonal to the left eigenvector");
  const Vec2 psi = evolve_nonunitary(ssh::hamiltonian(p), psi0, horizon);
  const double n = psi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::ZeroNorm, "evolved state lost norm");
  return {psi / n, fidelity(e.R1, psi)};
}

ComplexMatrix2 rotation_y() {
  ComplexMatrix2 u;
  u << 1.0, -1.0, 1.0, 1.0;
  return u / std::sqrt(2.0);
}

ComplexMatrix2 rotate_hamiltonian_y(const ComplexMatrix2& H) {
  const ComplexMatrix2 u = rotation_y();
  return u.adjoint() * H * u;
}

Vec2 rotate_state_y(const Vec2& psi) { return rotation_y().adjoint() * psi; }

}  // namespace nhssh::dynamics
