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

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhssh/linalg.hpp"
#include "nhssh/ssh_model.hpp"

namespace nhssh::testing {

/// Classic RK4 for i d/dt psi = H psi with n fixed steps.
template <typename Mat, typename Vec>
Vec rk4_schrodinger(const Mat& H, const Vec& psi0, double t, int steps) {
  const double h = t / steps;
  Vec psi = psi0;
  auto f = [&](const Vec& y) -> Vec { return Complex(0.0, -1.0) * (H * y); };
  for (int i = 0; i < steps; ++i) {
    const Vec k1 = f(psi);
    const Vec k2 = f(psi + 0.5 * h * k1);
    const Vec k3 = f(psi + 0.5 * h * k2);
    const Vec k4 = f(psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

/// exp(-i H t) from Eigen's general matrix exponential.
template <typename Mat>
Mat expm_oracle(const Mat& H, double t) {
  const Mat A = Complex(0.0, -t) * H;
  return A.exp();
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  Complex cnormal() { return {normal(), normal()}; }

  Vec2 state2() {
    Vec2 v(cnormal(), cnormal());
    return v / v.norm();
  }

  Vec4 state4() {
    Vec4 v;
    for (int i = 0; i < 4; ++i) v(i) = cnormal();
    return v / v.norm();
  }

  ComplexMatrix2 matrix2() {
    ComplexMatrix2 m;
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = cnormal();
    return m;
  }

  ComplexMatrix2 hermitian2() {
    const ComplexMatrix2 m = matrix2();
    return 0.5 * (m + m.adjoint());
  }

  /// Model parameters with |lambda1 - lambda2| bounded away from zero.
  ssh::SSHParams ssh_params(double vr_lo = 0.1, double vr_hi = 1.2, double g_lo = 2.0, double g_hi = 5.0,
                            double min_eps = 0.05) {
    for (;;) {
      ssh::SSHParams p{uniform(vr_lo, vr_hi), uniform(vr_lo, vr_hi), uniform(g_lo, g_hi), uniform(0.0, 2.0 * kPi)};
      const Complex c = p.hz() + Complex(0.0, 0.5);
      if (std::abs(std::sqrt(p.hx() * p.hx() + c * c)) > min_eps) return p;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace nhssh::testing
