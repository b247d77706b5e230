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

#include <benchmark/benchmark.h>

#include "nhssh/dilation.hpp"
#include "nhssh/dynamics.hpp"
#include "nhssh/pulse_compiler.hpp"
#include "nhssh/readout_model.hpp"
#include "nhssh/ssh_model.hpp"
#include "nhssh/topology.hpp"

namespace {

using namespace nhssh;

const ssh::SSHParams kRef{0.3, 1.0, 3.5, 0.3 * kPi};

void BM_Eigensystem(benchmark::State& state) {
  ssh::SSHParams p = kRef;
  for (auto _ : state) {
    p.k += 1e-6;
    benchmark::DoNotOptimize(ssh::eigensystem(p));
  }
}
BENCHMARK(BM_Eigensystem);

void BM_Propagator(benchmark::State& state) {
  const ComplexMatrix2 H = ssh::hamiltonian(kRef);
  double t = 0.1;
  for (auto _ : state) {
    t += 1e-9;
    benchmark::DoNotOptimize(dynamics::propagator(H, t));
  }
}
BENCHMARK(BM_Propagator);

void BM_Track(benchmark::State& state) {
  std::vector<double> ks;
  for (int i = 0; i < state.range(0); ++i) ks.push_back(2.0 * kPi * i / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ssh::track(0.3, 1.0, 3.5, ks));
}
BENCHMARK(BM_Track)->Arg(200)->Arg(2000);

void BM_BuildTrajectory(benchmark::State& state) {
  dilation::DilationConfig cfg;
  cfg.step = 1.5 / static_cast<double>(state.range(0));
  const ComplexMatrix2 H = ssh::hamiltonian(kRef);
  for (auto _ : state) benchmark::DoNotOptimize(dilation::build_trajectory(H, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildTrajectory)->Arg(1500)->Arg(15000)->Unit(benchmark::kMillisecond);

void BM_EvolveDilated(benchmark::State& state) {
  dilation::DilationConfig cfg;
  cfg.step = 1.5 / static_cast<double>(state.range(0));
  const auto traj = dilation::build_trajectory(ssh::hamiltonian(kRef), cfg);
  const Vec4 Psi0 = dilation::initial_dilated_state(Vec2(1.0, 0.0), traj.eta.front());
  for (auto _ : state) benchmark::DoNotOptimize(dilation::evolve_dilated(traj, Psi0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveDilated)->Arg(1500)->Arg(15000)->Unit(benchmark::kMillisecond);

void BM_Compile(benchmark::State& state) {
  dilation::DilationConfig cfg;
  cfg.step = 1e-3;
  const auto traj = dilation::build_trajectory(ssh::hamiltonian(kRef), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(pulse::compile(traj, pulse::NVParams{}));
}
BENCHMARK(BM_Compile);

void BM_WindingModel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(topology::winding_model({0.3, 1.0, 3.5}, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_WindingModel)->Arg(1000)->Arg(10000);

void BM_MeasureElectronZ(benchmark::State& state) {
  const Vec4 Psi = dilation::initial_dilated_state(Vec2(0.8, 0.6), 0.5 * ComplexMatrix2::Identity());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(readout::measure_electron_z(Psi, readout::PLRates{}, 1'000'000, ++seed));
}
BENCHMARK(BM_MeasureElectronZ);

}  // namespace

BENCHMARK_MAIN();
