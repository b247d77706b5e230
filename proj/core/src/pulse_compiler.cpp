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

#include "nhssh/pulse_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhssh/error.hpp"

namespace nhssh::pulse {

namespace {

constexpr double kAmplitudeZero = 1e-12;

ComplexMatrix2 drive_block(double Omega, double phi) {
  return kPi * Omega * (std::cos(phi) * pauli::x() - std::sin(phi) * pauli::y());
}

ComplexMatrix2 projector(int n) {
  ComplexMatrix2 p = ComplexMatrix2::Zero();
  p(n, n) = 1.0;
  return p;
}

}  // namespace

void NVParams::validate() const {
  if (!std::isfinite(D) || !std::isfinite(omega_e) || !std::isfinite(omega_n) || !std::isfinite(A_zz))
    throw Error(ErrorCode::InvalidArgument, "non-finite NV parameter");
  if (!(A_zz > 0.0)) throw Error(ErrorCode::InvalidArgument, "A_zz must be positive");
}

NVParams NVParams::scaled() {
  NVParams nv;
  nv.D = 2.0 * kPi * 50.0;
  nv.omega_e = 0.0;
  return nv;
}

ComplexMatrix4 nv_reduced_hamiltonian(const NVParams& nv) {
  const ComplexMatrix2 I = pauli::identity();
  const ComplexMatrix2 Z = pauli::z();
  return -(nv.D - nv.omega_e - 0.5 * nv.A_zz) * kron(Z, I) + (nv.omega_n - 0.5 * nv.A_zz) * kron(I, Z) +
         0.5 * nv.A_zz * kron(Z, Z);
}

std::pair<double, double> resonance_frequencies(const NVParams& nv) {
  const ComplexMatrix4 h = nv_reduced_hamiltonian(nv);
  return {(h(2, 2) - h(0, 0)).real(), (h(3, 3) - h(1, 1)).real()};
}

PulseSample compile_sample(double t, const dilation::PauliCoefficients& A,
                           const dilation::PauliCoefficients& B, double omega_up, double omega_down) {
  PulseSample s;
  s.t = t;
  s.delta1 = 2.0 * (A[3] + B[3]);
  s.delta2 = 2.0 * (A[3] - B[3]);
  s.omega1 = omega_up + s.delta1;
  s.omega2 = omega_down + s.delta2;
  s.Omega1 = std::hypot(A[1] + B[1], A[2] + B[2]) / kPi;
  s.Omega2 = std::hypot(A[1] - B[1], A[2] - B[2]) / kPi;
  s.phi1 = wrap_angle(-std::atan2(A[2] + B[2], A[1] + B[1]));
  s.phi2 = wrap_angle(-std::atan2(A[2] - B[2], A[1] - B[1]));
  return s;
}

PulseSchedule compile(const dilation::DilationTrajectory& traj, const NVParams& nv) {
  nv.validate();
  PulseSchedule sched;
  sched.nv = nv;
  std::tie(sched.omega_up, sched.omega_down) = resonance_frequencies(nv);
  const std::size_t n = traj.size();
  sched.samples.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    dilation::PauliCoefficients a{}, b{};
    for (std::size_t i = 0; i < 4; ++i) {
      a[i] = traj.A[i][j];
      b[i] = traj.B[i][j];
    }
    PulseSample s = compile_sample(traj.times[j], a, b, sched.omega_up, sched.omega_down);
    if (j > 0) {
      // Phase is undefined where the tone is off; hold the previous value.
      if (s.Omega1 < kAmplitudeZero) s.phi1 = sched.samples.back().phi1;
      if (s.Omega2 < kAmplitudeZero) s.phi2 = sched.samples.back().phi2;
    }
    sched.samples.push_back(s);
    sched.frame.A0.push_back(a[0]);
    sched.frame.A3.push_back(a[3]);
    sched.frame.B0.push_back(b[0]);
    sched.frame.B3.push_back(b[3]);
  }
  return sched;
}

ComplexMatrix4 effective_hamiltonian(const PulseSample& s, double A3, double B0, double B3) {
  const ComplexMatrix2 I = pauli::identity();
  const ComplexMatrix2 Z = pauli::z();
  return A3 * kron(Z, I) + B0 * kron(I, Z) + B3 * kron(Z, Z) + kron(drive_block(s.Omega1, s.phi1), projector(0)) +
         kron(drive_block(s.Omega2, s.phi2), projector(1));
}

std::pair<ComplexMatrix2, ComplexMatrix2> decompile(const ComplexMatrix4& H) {
  ComplexMatrix2 up, down;
  up << H(0, 0), H(0, 2), H(2, 0), H(2, 2);
  down << H(1, 1), H(1, 3), H(3, 1), H(3, 3);
  return {0.5 * (up + down), 0.5 * (up - down)};
}

double roundtrip_residual(const dilation::DilationTrajectory& traj, const PulseSchedule& sched) {
  if (sched.samples.size() != traj.size())
    throw Error(ErrorCode::InvalidArgument, "schedule and trajectory lengths differ");
  double worst = 0.0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const auto [L, G] = decompile(
        effective_hamiltonian(sched.samples[j], sched.frame.A3[j], sched.frame.B0[j], sched.frame.B3[j]));
    const ComplexMatrix2 Lfull = L + sched.frame.A0[j] * ComplexMatrix2::Identity();
    worst = std::max({worst, (Lfull - traj.Lambda[j]).cwiseAbs().maxCoeff(),
                      (G - traj.Gamma[j]).cwiseAbs().maxCoeff()});
  }
  return worst;
}

std::vector<double> unwrap(const std::vector<double>& phases) {
  std::vector<double> out(phases.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (i > 0) offset += wrap_angle(phases[i] - phases[i - 1]) - (phases[i] - phases[i - 1]);
    out[i] = phases[i] + offset;
  }
  return out;
}

namespace {

// Piecewise-linear view of a schedule.
struct Drive {
  double delta1, delta2, A3, B0, B3;
  Complex d1, d2;  // Omega e^{i phi}
};

Drive sample_drive(const PulseSchedule& s, double t, double scale) {
  const auto& xs = s.samples;
  const double h = xs.size() > 1 ? xs[1].t - xs[0].t : 1.0;
  const double x = std::clamp((t - xs.front().t) / h, 0.0, static_cast<double>(xs.size() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(x), xs.size() - 2);
  const double w = x - static_cast<double>(j);
  auto lerp = [w](auto a, auto b) { return (1.0 - w) * a + w * b; };
  const PulseSample& a = xs[j];
  const PulseSample& b = xs[j + 1];
  Drive d;
  d.delta1 = lerp(a.delta1, b.delta1);
  d.delta2 = lerp(a.delta2, b.delta2);
  d.A3 = lerp(s.frame.A3[j], s.frame.A3[j + 1]);
  d.B0 = lerp(s.frame.B0[j], s.frame.B0[j + 1]);
  d.B3 = lerp(s.frame.B3[j], s.frame.B3[j + 1]);
  d.d1 = scale * lerp(std::polar(a.Omega1, a.phi1), std::polar(b.Omega1, b.phi1));
  d.d2 = scale * lerp(std::polar(a.Omega2, a.phi2), std::polar(b.Omega2, b.phi2));
  return d;
}

struct CheckState {
  Vec4 lab;
  Vec4 ref;
  // Integrals of delta1, delta2, A3, B0, B3.
  Eigen::Matrix<double, 5, 1> phase;

  CheckState operator+(const CheckState& o) const { return {lab + o.lab, ref + o.ref, phase + o.phase}; }
  CheckState operator*(double c) const { return {c * lab, c * ref, c * phase}; }
};

}  // namespace

double rotating_frame_check(const NVParams& nv, const PulseSchedule& sched, const Vec4& Psi0,
                            const RotatingFrameOptions& opt) {
  nv.validate();
  if (sched.samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "schedule needs two samples");
  const double span = sched.samples.back().t - sched.samples.front().t;
  if (!(opt.horizon > 0.0) || opt.horizon > span + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "horizon outside the schedule");

  const ComplexMatrix4 H0 = nv_reduced_hamiltonian(nv);
  const auto [w_up, w_down] = resonance_frequencies(nv);
  double w_max = H0.cwiseAbs().maxCoeff();
  for (const auto& s : sched.samples) w_max = std::max({w_max, std::abs(s.omega1), std::abs(s.omega2)});
  const double limit = 1.0 / (50.0 * w_max);
  const double h_req = opt.step > 0.0 ? opt.step : 1.0 / (100.0 * w_max);
  if (h_req > limit) {
    std::ostringstream os;
    os << "step " << h_req << " us exceeds 1/(50 w_max) = " << limit << " us";
    throw Error(ErrorCode::StepTooCoarse, os.str());
  }
  const auto n = static_cast<std::size_t>(std::ceil(opt.horizon / h_req));
  const double h = opt.horizon / static_cast<double>(n);

  const ComplexMatrix2 I = pauli::identity();
  const ComplexMatrix2 Z = pauli::z();
  const ComplexMatrix4 ZI = kron(Z, I), IZ = kron(I, Z), ZZ = kron(Z, Z), XI = kron(pauli::x(), I);
  const double t0 = sched.samples.front().t;

  auto rhs = [&](double t, const CheckState& y) -> CheckState {
    const Drive d = sample_drive(sched, t, opt.drive_scale);
    const double x1 = w_up * (t - t0) + y.phase(0);
    const double x2 = w_down * (t - t0) + y.phase(1);
    const double drive = 2.0 * kPi * ((d.d1 * std::polar(1.0, x1)).real() + (d.d2 * std::polar(1.0, x2)).real());
    const ComplexMatrix4 H_lab = H0 + drive * XI;
    PulseSample ps;
    ps.Omega1 = std::abs(d.d1);
    ps.phi1 = std::arg(d.d1);
    ps.Omega2 = std::abs(d.d2);
    ps.phi2 = std::arg(d.d2);
    const ComplexMatrix4 H_ref = effective_hamiltonian(ps, d.A3, d.B0, d.B3);
    CheckState dy;
    dy.lab = -kI * (H_lab * y.lab);
    dy.ref = -kI * (H_ref * y.ref);
    dy.phase << d.delta1, d.delta2, d.A3, d.B0, d.B3;
    return dy;
  };

  auto frame = [&](double t, const CheckState& y) -> Vec4 {
    // U_rot = exp(i int [H0 - A3 ZI - B0 IZ - B3 ZZ])
    const ComplexMatrix4 G = H0 * (t - t0) - y.phase(2) * ZI - y.phase(3) * IZ - y.phase(4) * ZZ;
    Vec4 out;
    for (int i = 0; i < 4; ++i) out(i) = std::exp(kI * G(i, i).real()) * y.lab(i);
    return out;
  };

  CheckState y{Psi0, Psi0, Eigen::Matrix<double, 5, 1>::Zero()};
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = t0 + static_cast<double>(j) * h;
    const CheckState k1 = rhs(t, y);
    const CheckState k2 = rhs(t + 0.5 * h, y + k1 * (0.5 * h));
    const CheckState k3 = rhs(t + 0.5 * h, y + k2 * (0.5 * h));
    const CheckState k4 = rhs(t + h, y + k3 * h);
    y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    worst = std::max(worst, pure_state_distance(frame(t + h, y), y.ref));
  }
  return worst;
}

}  // namespace nhssh::pulse
