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

#include "nhssh/readout_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nhssh/dilation.hpp"
#include "nhssh/error.hpp"

namespace nhssh::readout {

namespace {

// Destination level of each population under a flip sequence.
std::array<int, 4> permutation(Flip flip) {
  switch (flip) {
    case Flip::None: return {0, 1, 2, 3};
    case Flip::Pi24: return {0, 3, 2, 1};
    case Flip::Pi13: return {2, 1, 0, 3};
    case Flip::Pi13Pi34: return {3, 1, 0, 2};
  }
  throw Error(ErrorCode::UnknownFlip, "unsupported flip sequence");
}

constexpr double kSubspaceFloor = 1e-10;

ZEstimate from_populations(const Populations& P) {
  const double s = P(0) + P(2);
  if (s < kSubspaceFloor) throw Error(ErrorCode::SubspaceEmpty, "no population in the nuclear |up> subspace");
  ZEstimate z;
  z.populations = P;
  z.ratio = P(0) / s;
  z.sigma_z = 2.0 * z.ratio - 1.0;
  return z;
}

}  // namespace

void PLRates::validate() const {
  for (double n : N)
    if (!(n >= 0.0) || !std::isfinite(n)) throw Error(ErrorCode::InvalidArgument, "PL rates must be finite and >= 0");
}

Flip parse_flip(std::string_view name) {
  if (name.empty() || name == "none") return Flip::None;
  if (name == "pi24") return Flip::Pi24;
  if (name == "pi13") return Flip::Pi13;
  if (name == "pi13pi34") return Flip::Pi13Pi34;
  throw Error(ErrorCode::UnknownFlip, "unsupported flip sequence '" + std::string(name) + "'");
}

std::string_view to_string(Flip flip) {
  switch (flip) {
    case Flip::None: return "none";
    case Flip::Pi24: return "pi24";
    case Flip::Pi13: return "pi13";
    case Flip::Pi13Pi34: return "pi13pi34";
  }
  return "unknown";
}

Populations apply_flip(const Populations& P, Flip flip) {
  const auto perm = permutation(flip);
  Populations out = Populations::Zero();
  for (int i = 0; i < 4; ++i) out(perm[i]) += P(i);
  return out;
}

double observe(const Populations& P, const PLRates& rates, Flip flip) {
  const Populations q = apply_flip(P, flip);
  double n = 0.0;
  for (int i = 0; i < 4; ++i) n += q(i) * rates.N[i];
  return n;
}

Eigen::Matrix4d measurement_matrix(const PLRates& rates) {
  rates.validate();
  Eigen::Matrix4d A;
  for (int f = 0; f < 4; ++f) {
    const auto perm = permutation(kFlipSequences[f]);
    for (int i = 0; i < 4; ++i) A(f, i) = rates.N[perm[i]];
  }
  return A;
}

Populations invert(const Eigen::Vector4d& counts, const PLRates& rates) {
  const Eigen::Matrix4d A = measurement_matrix(rates);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(A);
  const auto& s = svd.singularValues();
  const double cond = s(3) > 0.0 ? s(0) / s(3) : INFINITY;
  if (!(cond < kMaxCondition)) {
    std::ostringstream os;
    os << "measurement matrix condition number " << cond;
    throw Error(ErrorCode::SingularRates, os.str());
  }
  return A.partialPivLu().solve(counts);
}

Populations mle_normalize(const Populations& raw) {
  std::array<double, 4> u{raw(0), raw(1), raw(2), raw(3)};
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (int j = 0; j < 4; ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / (j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return (raw.array() - tau).cwiseMax(0.0).matrix();
}

Vec4 nuclear_pi2(const Vec4& Psi) {
  const Vec2 m = dilation::nuclear_minus();
  const Vec2 p = dilation::nuclear_plus();
  Vec4 out;
  for (int e = 0; e < 2; ++e) {
    const Vec2 block = Psi.segment<2>(2 * e);
    out(2 * e) = m.dot(block);
    out(2 * e + 1) = p.dot(block);
  }
  return out;
}

Populations true_populations(const Vec4& Psi) {
  const double n = Psi.squaredNorm();
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroNorm, "zero dilated state");
  return Psi.cwiseAbs2() / n;
}

ZEstimate expected_electron_z(const Vec4& Psi, const PLRates& rates) {
  const Populations P = true_populations(nuclear_pi2(Psi));
  Eigen::Vector4d counts;
  for (int f = 0; f < 4; ++f) counts(f) = observe(P, rates, kFlipSequences[f]);
  return from_populations(mle_normalize(invert(counts, rates)));
}

ZEstimate measure_electron_z(const Vec4& Psi, const PLRates& rates, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
  const Populations P = true_populations(nuclear_pi2(Psi));
  if (P(0) + P(2) < kSubspaceFloor)
    throw Error(ErrorCode::SubspaceEmpty, "no population in the nuclear |up> subspace");

  std::mt19937_64 rng(seed);
  const double n = static_cast<double>(shots);
  Eigen::Vector4d expected, measured;
  for (int f = 0; f < 4; ++f) {
    expected(f) = observe(P, rates, kFlipSequences[f]);
    std::poisson_distribution<long long> dist(n * expected(f));
    measured(f) = static_cast<double>(dist(rng)) / n;
  }
  ZEstimate z = from_populations(mle_normalize(invert(measured, rates)));

  // Delta method at the noiseless point: var(count rate f) = N_f / shots.
  const Eigen::Matrix4d Ainv = measurement_matrix(rates).inverse();
  const double s = P(0) + P(2);
  Eigen::RowVector4d grad = Eigen::RowVector4d::Zero();
  grad(0) = 2.0 * P(2) / (s * s);
  grad(2) = -2.0 * P(0) / (s * s);
  const Eigen::RowVector4d g = grad * Ainv;
  double var = 0.0;
  for (int f = 0; f < 4; ++f) var += g(f) * g(f) * expected(f) / n;
  z.standard_error = std::sqrt(var);
  return z;
}

}  // namespace nhssh::readout
