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

#include <functional>

#include <gtest/gtest.h>

#include "nhssh/error.hpp"
#include "nhssh/pulse_compiler.hpp"
#include "nhssh/ssh_model.hpp"
#include "oracles.hpp"

namespace nhssh::pulse {
namespace {

using dilation::PauliCoefficients;
using testing::Gen;

dilation::DilationTrajectory synthetic_trajectory(std::size_t n, double step,
                                                  const std::function<PauliCoefficients(double)>& a,
                                                  const std::function<PauliCoefficients(double)>& b) {
  dilation::DilationTrajectory tr;
  tr.step = step;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * step;
    const auto ca = a(t), cb = b(t);
    tr.times.push_back(t);
    for (std::size_t i = 0; i < 4; ++i) {
      tr.A[i].push_back(ca[i]);
      tr.B[i].push_back(cb[i]);
    }
    tr.Lambda.push_back(dilation::pauli_compose(ca));
    tr.Gamma.push_back(dilation::pauli_compose(cb));
  }
  return tr;
}

const PauliCoefficients kZero{};

TEST(Reduced, ZeroAndDiagonal) {
  const NVParams none{0.0, 0.0, 0.0, 1e-9};
  EXPECT_LT(nv_reduced_hamiltonian(none).norm(), 1e-8);
  const ComplexMatrix4 h = nv_reduced_hamiltonian(NVParams{});
  EXPECT_LT((h - ComplexMatrix4(h.diagonal().asDiagonal())).norm(), 1e-12);
  EXPECT_LT(hermiticity_deviation(h), 1e-12);
}

TEST(Resonances, SplitByHyperfine) {
  const NVParams nv;
  const auto [up, down] = resonance_frequencies(nv);
  EXPECT_NEAR(up - down, -2.0 * nv.A_zz, 1e-9);
  EXPECT_NEAR(down, 2.0 * (nv.D - nv.omega_e), 1e-9);
  EXPECT_GT(up, 0.0);
  EXPECT_GT(down, 0.0);
}

TEST(Resonances, NuclearZeemanDoesNotShiftThem) {
  NVParams a, b;
  b.omega_n *= 3.0;
  EXPECT_NEAR(resonance_frequencies(a).first, resonance_frequencies(b).first, 1e-9);
  EXPECT_NEAR(resonance_frequencies(a).second, resonance_frequencies(b).second, 1e-9);
}

TEST(Resonances, CollapseWithoutCoupling) {
  NVParams nv;
  nv.A_zz = 1e-12;
  const auto [up, down] = resonance_frequencies(nv);
  EXPECT_NEAR(up, down, 1e-9);
}

TEST(CompileSample, Examples) {
  const auto s = compile_sample(0.0, {0.0, 1.0, 0.0, 0.5}, kZero, 10.0, 20.0);
  EXPECT_DOUBLE_EQ(s.delta1, 1.0);
  EXPECT_DOUBLE_EQ(s.delta2, 1.0);
  EXPECT_DOUBLE_EQ(s.omega1, 11.0);
  EXPECT_DOUBLE_EQ(s.omega2, 21.0);
  EXPECT_NEAR(s.Omega1, 1.0 / kPi, 1e-15);
  EXPECT_NEAR(s.Omega2, 1.0 / kPi, 1e-15);
  EXPECT_DOUBLE_EQ(s.phi1, 0.0);

  const auto g = compile_sample(0.0, kZero, {0.0, 0.0, 0.0, 0.25}, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(g.delta1, 0.5);
  EXPECT_DOUBLE_EQ(g.delta2, -0.5);

  const auto y = compile_sample(0.0, {0.0, 0.0, 1.0, 0.0}, kZero, 0.0, 0.0);
  EXPECT_NEAR(y.phi1, -kPi / 2.0, 1e-15);
  EXPECT_NEAR(y.phi2, -kPi / 2.0, 1e-15);
}

TEST(CompileSample, ZeroSample) {
  const auto s = compile_sample(0.3, kZero, kZero, 5.0, 6.0);
  EXPECT_EQ(s.Omega1, 0.0);
  EXPECT_EQ(s.Omega2, 0.0);
  EXPECT_EQ(s.delta1, 0.0);
  EXPECT_EQ(s.omega1, 5.0);
  EXPECT_EQ(s.omega2, 6.0);
  EXPECT_EQ(s.t, 0.3);
}

TEST(CompileSample, Roundtrip) {
  Gen g(41);
  for (int i = 0; i < 200; ++i) {
    PauliCoefficients a, b;
    for (auto& x : a) x = g.normal();
    for (auto& x : b) x = g.normal();
    const auto s = compile_sample(0.0, a, b, 0.0, 0.0);
    const auto [L, G] = decompile(effective_hamiltonian(s, a[3], b[0], b[3]));
    const ComplexMatrix2 Lfull = L + a[0] * ComplexMatrix2::Identity();
    EXPECT_LT((Lfull - dilation::pauli_compose(a)).norm(), 1e-13);
    EXPECT_LT((G - dilation::pauli_compose(b)).norm(), 1e-13);
  }
}

TEST(CompileSample, FrequencyShiftIsLinear) {
  Gen g(42);
  for (int i = 0; i < 50; ++i) {
    PauliCoefficients a{}, b{};
    a[3] = g.normal();
    b[3] = g.normal();
    const auto s1 = compile_sample(0.0, a, b, 1.0, 2.0);
    for (auto& x : a) x *= 2.0;
    for (auto& x : b) x *= 2.0;
    const auto s2 = compile_sample(0.0, a, b, 1.0, 2.0);
    EXPECT_NEAR(s2.omega1 - 1.0, 2.0 * (s1.omega1 - 1.0), 1e-12);
    EXPECT_NEAR(s2.omega2 - 2.0, 2.0 * (s1.omega2 - 2.0), 1e-12);
  }
}

TEST(Compile, HoldsPhaseWhenToneIsOff) {
  // Tone 1 switches off for t >= 0.5 while tone 2 stays on.
  const auto tr = synthetic_trajectory(
      10, 0.1,
      [](double) { return PauliCoefficients{0.0, 0.5, 0.5, 0.0}; },
      [](double t) { return t < 0.45 ? PauliCoefficients{0.0, 0.1, 0.1, 0.0} : PauliCoefficients{0.0, -0.5, -0.5, 0.0}; });
  const auto sched = compile(tr, NVParams{});
  EXPECT_GT(sched.samples[9].Omega2, 0.1);
  EXPECT_LT(sched.samples[9].Omega1, 1e-12);
  EXPECT_DOUBLE_EQ(sched.samples[9].phi1, sched.samples[4].phi1);
  EXPECT_LT(roundtrip_residual(tr, sched), 1e-12);
}

TEST(Compile, RoundtripOnDilatedTrajectory) {
  dilation::DilationConfig cfg;
  cfg.step = 1e-3;
  const auto tr = dilation::build_trajectory(ssh::hamiltonian({0.3, 1.0, 3.5, 0.3 * kPi}), cfg);
  const auto sched = compile(tr, NVParams{});
  EXPECT_EQ(sched.samples.size(), tr.size());
  EXPECT_LT(roundtrip_residual(tr, sched), 1e-10);
  for (const auto& s : sched.samples) {
    EXPECT_GE(s.Omega1, 0.0);
    EXPECT_GT(s.phi1, -kPi - 1e-15);
    EXPECT_LE(s.phi1, kPi);
  }
}

TEST(Compile, HermitianTrajectoryDrivesEqualTones) {
  dilation::DilationConfig cfg;
  cfg.step = 1e-3;
  const auto tr = dilation::build_trajectory(pauli::x() + 0.2 * pauli::z(), cfg);
  const auto sched = compile(tr, NVParams{});
  for (const auto& s : sched.samples) {
    EXPECT_NEAR(s.Omega1, s.Omega2, 1e-9);
    EXPECT_NEAR(s.delta1, s.delta2, 1e-9);
  }
}

TEST(Unwrap, RemovesJumps) {
  const auto u = unwrap({3.0, -3.0, 3.0 - 2.0 * kPi + 0.1});
  EXPECT_DOUBLE_EQ(u[0], 3.0);
  EXPECT_NEAR(u[1], 2.0 * kPi - 3.0, 1e-15);
  EXPECT_NEAR(u[2], 3.1, 1e-14);
  EXPECT_TRUE(unwrap({}).empty());
  Gen g(43);
  std::vector<double> smooth, wrapped;
  double x = 0.0;
  for (int i = 0; i < 500; ++i) {
    x += g.uniform(-1.0, 1.0);
    smooth.push_back(x);
    wrapped.push_back(wrap_angle(x));
  }
  const auto back = unwrap(wrapped);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i] - back[0], smooth[i] - smooth[0], 1e-9);
}

class RotatingFrame : public ::testing::Test {
 protected:
  static PulseSchedule schedule(const NVParams& nv) {
    dilation::DilationConfig cfg;
    cfg.horizon = 0.1;
    const auto tr = dilation::build_trajectory(ssh::hamiltonian({0.3, 1.0, 3.5, 0.3 * kPi}), cfg);
    return compile(tr, nv);
  }
  static Vec4 start() {
    return dilation::initial_dilated_state(Vec2(1.0, 0.0), 8.0 * ComplexMatrix2::Identity());
  }
};

TEST_F(RotatingFrame, ZeroDriveIsExact) {
  const NVParams nv = NVParams::scaled();
  const auto tr = synthetic_trajectory(101, 1e-3, [](double) { return kZero; }, [](double) { return kZero; });
  const auto sched = compile(tr, nv);
  EXPECT_LT(rotating_frame_check(nv, sched, start(), {0.05, 0.0, 1.0}), 1e-8);
}

TEST_F(RotatingFrame, DeviationWithinBudget) {
  const NVParams nv = NVParams::scaled();
  EXPECT_LT(rotating_frame_check(nv, schedule(nv), start()), 5e-2);
}

TEST_F(RotatingFrame, DeviationGrowsWithDrive) {
  const NVParams nv = NVParams::scaled();
  const auto sched = schedule(nv);
  const double d1 = rotating_frame_check(nv, sched, start(), {0.05, 0.0, 0.5});
  const double d2 = rotating_frame_check(nv, sched, start(), {0.05, 0.0, 1.0});
  EXPECT_GT(d2 / d1, 1.5);
  EXPECT_LT(d2 / d1, 4.5);
}

TEST_F(RotatingFrame, RejectsCoarseStep) {
  const NVParams nv = NVParams::scaled();
  try {
    rotating_frame_check(nv, schedule(nv), start(), {0.05, 1e-3, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepTooCoarse);
  }
}

}  // namespace
}  // namespace nhssh::pulse
