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

#include "nhssh/ssh_model.hpp"

#include <cmath>
#include <sstream>

#include "nhssh/error.hpp"

namespace nhssh::ssh {

double SSHParams::hx() const { return v + r * std::cos(k); }
double SSHParams::hz() const { return r * std::sin(k); }

void SSHParams::validate() const {
  if (!std::isfinite(v) || !std::isfinite(r) || !std::isfinite(gamma) || !std::isfinite(k))
    throw Error(ErrorCode::InvalidArgument, "non-finite model parameter");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
}

ComplexMatrix2 hamiltonian(const SSHParams& p) {
  p.validate();
  return p.gamma * (p.hx() * pauli::x() + (p.hz() + 0.5 * kI) * pauli::z());
}

ComplexMatrix2 hermitian_limit(const SSHParams& p) {
  p.validate();
  return p.gamma * (p.hx() * pauli::x() + p.hz() * pauli::z());
}

EigenSystem eigensystem_from_theta(Complex theta, Complex lambda1, bool degenerate) {
  EigenSystem e;
  e.theta = theta;
  e.lambda1 = lambda1;
  e.lambda2 = -lambda1;
  const Complex c = std::cos(theta / 2.0);
  const Complex s = std::sin(theta / 2.0);
  e.R1 << c, -s;
  e.R2 << s, c;
  e.L1 << std::conj(c), -std::conj(s);
  e.L2 << std::conj(s), std::conj(c);
  e.ordering_degenerate = degenerate;
  return e;
}

EigenSystem eigensystem(const SSHParams& p) {
  p.validate();
  const double hx = p.hx();
  const Complex c = p.hz() + 0.5 * kI;
  Complex eps = std::sqrt(hx * hx + c * c);
  if (2.0 * std::abs(eps) < kGapTolerance) {
    std::ostringstream os;
    os << "eigenvalues coalesce at v=" << p.v << " r=" << p.r << " k=" << p.k;
    throw Error(ErrorCode::ExceptionalPoint, os.str());
  }
  bool degenerate = false;
  if (2.0 * std::abs(eps.imag()) < kTieTolerance) {
    degenerate = true;
    if (eps.real() < 0.0) eps = -eps;
  } else if (eps.imag() < 0.0) {
    eps = -eps;
  }
  const Complex theta = -kI * std::log((c - kI * hx) / eps);
  return eigensystem_from_theta(theta, p.gamma * eps, degenerate);
}

std::vector<ExceptionalMomentum> exceptional_momenta(double v, double r) {
  std::vector<ExceptionalMomentum> out;
  for (double k : {0.0, kPi}) {
    const double hx = v + r * std::cos(k);
    for (double target : {0.5, -0.5}) {
      if (std::abs(hx - target) < kBoundaryTolerance) {
        std::ostringstream os;
        os << "h = (" << target << ", 0) at k = " << (k == 0.0 ? "0" : "pi");
        out.push_back({k, os.str()});
      }
    }
  }
  return out;
}

PhaseClass classify_phase(double v, double r) {
  int count = 0;
  for (double ep : {0.5, -0.5}) {
    const double d = std::abs(ep - v);
    if (std::abs(d - std::abs(r)) < kBoundaryTolerance) {
      std::ostringstream os;
      os << "(v, r) = (" << v << ", " << r << ") lies on a phase boundary";
      throw Error(ErrorCode::PhaseBoundary, os.str());
    }
    if (d < std::abs(r)) ++count;
  }
  return {0.5 * count, count};
}

double normalized_expectation(const Vec2& state, Axis axis) {
  const double n = state.squaredNorm();
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroNorm, "expectation of the zero vector");
  return (state.dot(pauli::of(axis) * state)).real() / n;
}

std::vector<TrackedPoint> track(double v, double r, double gamma, const std::vector<double>& ks,
                                double max_step, std::optional<Complex> anchor) {
  std::vector<TrackedPoint> out;
  if (ks.empty()) return out;
  if (!(max_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_step must be positive");
  out.reserve(ks.size());

  Complex prev = anchor.value_or(Complex{});
  int prev_n = 0;
  auto follow = [&](double k, bool first) -> std::pair<Complex, EigenSystem> {
    EigenSystem pe = eigensystem({v, r, gamma, k});
    int n = 0;
    if (!first || anchor) n = static_cast<int>(std::lround((prev - pe.theta).real() / kPi));
    prev = pe.theta + static_cast<double>(n) * kPi;
    prev_n = n;
    return {prev, pe};
  };

  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i > 0) {
      const double k0 = ks[i - 1];
      const double dk = ks[i] - k0;
      const auto sub = static_cast<long>(std::ceil(std::abs(dk) / max_step));
      for (long j = 1; j < sub; ++j) follow(k0 + dk * static_cast<double>(j) / static_cast<double>(sub), false);
    }
    auto [theta, pe] = follow(ks[i], i == 0);
    const bool even = (prev_n % 2) == 0;
    const Complex lambda = even ? pe.lambda1 : pe.lambda2;
    out.push_back({ks[i], theta, even ? 1 : 2, eigensystem_from_theta(theta, lambda, pe.ordering_degenerate)});
  }
  return out;
}

}  // namespace nhssh::ssh
