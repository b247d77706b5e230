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

#include "nhssh/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nhssh/dynamics.hpp"
#include "nhssh/error.hpp"

namespace nhssh::dilation {

ComplexMatrix2 DilationConfig::initial_M() const {
  if (M0) return *M0;
  return (1.0 + eta0 * eta0) * ComplexMatrix2::Identity();
}

std::size_t DilationConfig::intervals() const {
  return static_cast<std::size_t>(std::llround(horizon / step));
}

void DilationConfig::validate() const {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw Error(ErrorCode::InvalidArgument, "eta0 must be positive");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (intervals() < 4) throw Error(ErrorCode::InvalidArgument, "horizon must span at least four steps");
  if (intervals() > kMaxIntervals) throw Error(ErrorCode::InvalidArgument, "horizon / step exceeds the grid size limit");
  const ComplexMatrix2 m = initial_M();
  if (hermiticity_deviation(m) > 1e-12) throw Error(ErrorCode::NotHermitian, "M(0) is not Hermitian");
  if (!(min_eigenvalue(m) - 1.0 > 0.0)) throw Error(ErrorCode::NotPositive, "M(0) - I is not positive definite");
}

ComplexMatrix4 DilationTrajectory::en_hamiltonian(std::size_t i) const {
  return dilation::en_hamiltonian(Lambda.at(i), Gamma.at(i));
}

MTrajectory solve_M(const ComplexMatrix2& H, const DilationConfig& config) {
  config.validate();
  const std::size_t n = config.intervals();
  const double h = config.step;
  const ComplexMatrix2 Hd = H.adjoint();
  auto f = [&](const ComplexMatrix2& M) -> ComplexMatrix2 { return -kI * (Hd * M - M * H); };

  MTrajectory out;
  out.times.reserve(n + 1);
  out.M.reserve(n + 1);
  ComplexMatrix2 M = config.initial_M();
  out.times.push_back(0.0);
  out.M.push_back(M);
  out.min_positivity = min_eigenvalue(M) - 1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const ComplexMatrix2 k1 = f(M);
    const ComplexMatrix2 k2 = f(M + 0.5 * h * k1);
    const ComplexMatrix2 k3 = f(M + 0.5 * h * k2);
    const ComplexMatrix2 k4 = f(M + h * k3);
    M = hermitian_part(M + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    const double t = static_cast<double>(j) * h;
    const double pos = min_eigenvalue(M) - 1.0;
    out.min_positivity = std::min(out.min_positivity, pos);
    if (pos < config.positivity_floor) {
      std::ostringstream os;
      os << "min eig(M - I) = " << pos << " at t = " << t << " us; raise eta0 or shorten the horizon";
      throw Error(ErrorCode::PositivityLoss, os.str());
    }
    out.times.push_back(t);
    out.M.push_back(M);
  }
  return out;
}

ComplexMatrix2 closed_form_M(const ComplexMatrix2& H, const ComplexMatrix2& M0, double t) {
  const ComplexMatrix2 P = dynamics::propagator(H, -t);  // e^{iHt}
  return P.adjoint() * M0 * P;
}

ComplexMatrix2 eta_from_M(const ComplexMatrix2& M) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix2> es(hermitian_part(M));
  const Eigen::Vector2d w = es.eigenvalues().array() - 1.0;
  if (!(w(0) > 0.0)) {
    std::ostringstream os;
    os << "M - I has eigenvalue " << w(0);
    throw Error(ErrorCode::NotPositive, os.str());
  }
  const Eigen::Vector2cd root = w.cwiseSqrt().cast<Complex>();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<ComplexMatrix2> time_derivative(const std::vector<ComplexMatrix2>& x, double h) {
  const std::size_t n = x.size();
  if (n < 5) throw Error(ErrorCode::InvalidArgument, "derivative needs at least five samples");
  std::vector<ComplexMatrix2> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = s * (-25.0 * x[0] + 48.0 * x[1] - 36.0 * x[2] + 16.0 * x[3] - 3.0 * x[4]);
  d[1] = s * (-3.0 * x[0] - 10.0 * x[1] + 18.0 * x[2] - 6.0 * x[3] + x[4]);
  for (std::size_t j = 2; j + 2 < n; ++j) d[j] = s * (-x[j + 2] + 8.0 * x[j + 1] - 8.0 * x[j - 1] + x[j - 2]);
  const std::size_t e = n - 1;
  d[e - 1] = s * (3.0 * x[e] + 10.0 * x[e - 1] - 18.0 * x[e - 2] + 6.0 * x[e - 3] - x[e - 4]);
  d[e] = s * (25.0 * x[e] - 48.0 * x[e - 1] + 36.0 * x[e - 2] - 16.0 * x[e - 3] + 3.0 * x[e - 4]);
  return d;
}

Generators dilated_hamiltonian(const ComplexMatrix2& H, const ComplexMatrix2& eta,
                               const ComplexMatrix2& eta_dot, const ComplexMatrix2& M_inv) {
  const ComplexMatrix2 L = (H + (kI * eta_dot + eta * H) * eta) * M_inv;
  const ComplexMatrix2 G = kI * (H * eta - eta * H - kI * eta_dot) * M_inv;
  Generators g;
  g.hermiticity_defect = std::max(hermiticity_deviation(L), hermiticity_deviation(G));
  g.Lambda = hermitian_part(L);
  g.Gamma = hermitian_part(G);
  return g;
}

PauliCoefficients pauli_decompose(const ComplexMatrix2& X) {
  const double dev = hermiticity_deviation(X);
  if (dev > 1e-8) {
    std::ostringstream os;
    os << "anti-Hermitian residue " << dev;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  const std::array<ComplexMatrix2, 4> basis{pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  PauliCoefficients c{};
  for (std::size_t i = 0; i < 4; ++i) c[i] = 0.5 * (X * basis[i]).trace().real();
  return c;
}

ComplexMatrix2 pauli_compose(const PauliCoefficients& c) {
  return c[0] * pauli::identity() + c[1] * pauli::x() + c[2] * pauli::y() + c[3] * pauli::z();
}

ComplexMatrix4 en_hamiltonian(const ComplexMatrix2& Lambda, const ComplexMatrix2& Gamma) {
  return kron(Lambda, pauli::identity()) + kron(Gamma, pauli::z());
}

DilationTrajectory build_trajectory(const ComplexMatrix2& H, const DilationConfig& config) {
  MTrajectory mt = solve_M(H, config);
  DilationTrajectory tr;
  tr.H = H;
  tr.step = config.step;
  tr.times = std::move(mt.times);
  tr.M = std::move(mt.M);
  tr.min_positivity = mt.min_positivity;

  const std::size_t n = tr.times.size();
  tr.eta.reserve(n);
  for (const auto& M : tr.M) tr.eta.push_back(eta_from_M(M));
  tr.eta_dot = time_derivative(tr.eta, config.step);

  tr.Lambda.reserve(n);
  tr.Gamma.reserve(n);
  for (auto& track : tr.A) track.reserve(n);
  for (auto& track : tr.B) track.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Generators g = dilated_hamiltonian(H, tr.eta[j], tr.eta_dot[j], tr.M[j].inverse());
    tr.max_hermiticity_defect = std::max(tr.max_hermiticity_defect, g.hermiticity_defect);
    const auto a = pauli_decompose(g.Lambda);
    const auto b = pauli_decompose(g.Gamma);
    for (std::size_t i = 0; i < 4; ++i) {
      tr.A[i].push_back(a[i]);
      tr.B[i].push_back(b[i]);
    }
    tr.Lambda.push_back(g.Lambda);
    tr.Gamma.push_back(g.Gamma);
  }
  return tr;
}

double required_eta0(const ComplexMatrix2& H, double horizon, double eta0_floor,
                     double positivity_floor, double margin) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  constexpr int kSamples = 512;
  double sigma2 = 1.0;
  for (int i = 1; i <= kSamples; ++i) {
    const double t = horizon * static_cast<double>(i) / kSamples;
    const ComplexMatrix2 P = dynamics::propagator(H, -t);
    sigma2 = std::min(sigma2, min_eigenvalue(P.adjoint() * P));
  }
  const double c = margin * (1.0 + std::max(positivity_floor, 0.0)) / sigma2;
  const double eta0 = std::max(eta0_floor, std::sqrt(std::max(c - 1.0, 0.0)));
  if (!std::isfinite(eta0) || eta0 > kMaxEta0) {
    std::ostringstream os;
    os << "keeping M - I positive needs eta0 = " << eta0 << " over " << horizon << " us";
    throw Error(ErrorCode::PositivityLoss, os.str());
  }
  return eta0;
}

Vec2 nuclear_minus() {
  Vec2 v;
  v << 1.0, -kI;
  return v / std::sqrt(2.0);
}

Vec2 nuclear_plus() {
  Vec2 v;
  v << 1.0, kI;
  return -kI * v / std::sqrt(2.0);
}

Vec4 initial_dilated_state(const Vec2& psi0, const ComplexMatrix2& eta0) {
  if (!(psi0.squaredNorm() > 0.0)) throw Error(ErrorCode::ZeroNorm, "zero initial state");
  const Vec2 ep = eta0 * psi0;
  const Vec4 Psi = kron(psi0, nuclear_minus()) + kron(ep, nuclear_plus());
  return Psi / Psi.norm();
}

namespace {

// Cubic Lagrange interpolation of H_en at x = j + s on the sample grid.
ComplexMatrix4 interpolate(const std::vector<ComplexMatrix4>& Hen, std::size_t j, double s) {
  const std::size_t n = Hen.size() - 1;
  const std::size_t i0 = std::min(j > 0 ? j - 1 : 0, n - 3);
  const double x = static_cast<double>(j) + s;
  ComplexMatrix4 out = ComplexMatrix4::Zero();
  for (std::size_t a = i0; a < i0 + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = i0; b < i0 + 4; ++b)
      if (b != a) w *= (x - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
    out += w * Hen[a];
  }
  return out;
}

}  // namespace

std::vector<Vec4> evolve_dilated(const DilationTrajectory& traj, const Vec4& Psi0) {
  const std::size_t n = traj.size();
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "trajectory too short");
  std::vector<ComplexMatrix4> Hen(n);
  for (std::size_t i = 0; i < n; ++i) Hen[i] = traj.en_hamiltonian(i);

  const double h = traj.step;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  std::vector<Vec4> out;
  out.reserve(n);
  out.push_back(Psi0);
  Vec4 Psi = Psi0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const ComplexMatrix4 H1 = interpolate(Hen, j, c1);
    const ComplexMatrix4 H2 = interpolate(Hen, j, c2);
    // Omega = -i G with G Hermitian; [A2, A1] = -[H2, H1].
    const ComplexMatrix4 G =
        0.5 * h * (H1 + H2) + kI * (std::sqrt(3.0) * h * h / 12.0) * (H1 * H2 - H2 * H1);
    Psi = unitary_propagator(G, 1.0) * Psi;
    out.push_back(Psi);
  }
  return out;
}

PostSelected postselect_minus(const Vec4& Psi) {
  const Vec2 m = nuclear_minus();
  Vec2 a;
  a << m.dot(Psi.segment<2>(0)), m.dot(Psi.segment<2>(2));
  const double p = a.squaredNorm();
  if (p < 1e-12) throw Error(ErrorCode::PostselectionVanished, "no weight on the nuclear |-> state");
  return {a, p};
}

}  // namespace nhssh::dilation
