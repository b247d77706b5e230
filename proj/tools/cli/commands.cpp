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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "nhssh/dynamics.hpp"
#include "nhssh/error.hpp"
#include "nhssh/ssh_model.hpp"

namespace nhssh::cli {

namespace {

constexpr double kSimulationEpsilon = 1e-6;
constexpr double kDefaultDilationHorizon = 1.5;
constexpr double kMaxAutoHorizon = 40.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t row, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (0x632be59bd9b4e019ULL * (row + 1)) ^ stream);
}

// Runs body(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  const unsigned nt = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
}

ComplexMatrix2 model_hamiltonian(const RunConfig& cfg, double k) {
  const ssh::SSHParams p{cfg.v, cfg.r, cfg.gamma, k};
  return cfg.hermitian_limit ? ssh::hermitian_limit(p) : ssh::hamiltonian(p);
}

// Basis state with the larger overlap on the dominant left vector.
Vec2 preparation_state(const ssh::EigenSystem& e) {
  Vec2 psi = Vec2::Zero();
  psi(std::abs(e.L1(0)) >= std::abs(e.L1(1)) ? 0 : 1) = 1.0;
  return psi;
}

struct DilatedRun {
  Vec4 Psi;        // final dilated state
  Vec2 selected;   // post-selected electron state
  double eta0;
};

DilatedRun run_dilation(const ComplexMatrix2& H, const Vec2& psi0, double horizon, const RunConfig& cfg) {
  dilation::DilationConfig dc;
  dc.eta0 = dilation::required_eta0(H, horizon, cfg.eta0);
  dc.step = cfg.step;
  dc.horizon = horizon;
  const auto traj = dilation::build_trajectory(H, dc);
  const Vec4 Psi = dilation::evolve_dilated(traj, dilation::initial_dilated_state(psi0, traj.eta.front())).back();
  return {Psi, dilation::postselect_minus(Psi).psi, dc.eta0};
}

void dilated_row(const RunConfig& cfg, std::size_t index, TextureRow& row) {
  const ssh::SSHParams p{cfg.v, cfg.r, cfg.gamma, row.k};
  const auto e = ssh::eigensystem(p);
  if (e.ordering_degenerate) throw Error(ErrorCode::DegenerateDecay, "no dominant band at this momentum");
  const double horizon =
      cfg.horizon.value_or(dynamics::default_horizon(p, dynamics::HorizonMode::Simulation, kSimulationEpsilon));
  if (!cfg.horizon && horizon > kMaxAutoHorizon)
    throw Error(ErrorCode::DegenerateDecay, fmt::format("decay needs {:.3g} us; bands barely separate", horizon));
  const ComplexMatrix2 H = ssh::hamiltonian(p);
  const Vec2 psi0 = preparation_state(e);
  const DilatedRun z = run_dilation(H, psi0, horizon, cfg);
  const DilatedRun x = run_dilation(dynamics::rotate_hamiltonian_y(H), dynamics::rotate_state_y(psi0), horizon, cfg);
  row.horizon = horizon;
  row.eta0 = std::max(z.eta0, x.eta0);
  if (cfg.mode == Mode::Dilated) {
    row.sz = ssh::normalized_expectation(z.selected, Axis::Z);
    row.sx = ssh::normalized_expectation(x.selected, Axis::Z);
  } else {
    const auto ez = readout::measure_electron_z(z.Psi, cfg.rates, cfg.shots, row_seed(cfg.seed, index, 1));
    const auto ex = readout::measure_electron_z(x.Psi, cfg.rates, cfg.shots, row_seed(cfg.seed, index, 2));
    row.sz = ez.sigma_z;
    row.sx = ex.sigma_z;
    row.sz_err = ez.standard_error;
    row.sx_err = ex.standard_error;
  }
  // Report the continuity-tracked band, as the exact mode does.
  if (row.band == 2) {
    row.sx = -row.sx;
    row.sz = -row.sz;
  }
}

std::string status_of(const Error& e) { return std::string(to_string(e.code())); }

}  // namespace

std::vector<TextureRow> sweep(const RunConfig& cfg) {
  cfg.validate();
  cfg.grid.validate();
  if (cfg.hermitian_limit) throw Error(ErrorCode::InvalidArgument, "sweep has no Hermitian-limit mode");
  const auto ks = cfg.grid.radians();
  std::vector<TextureRow> rows(ks.size());

  // Continuity tracking is sequential; a failed row restarts from the last good theta.
  std::optional<Complex> anchor;
  double anchor_k = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    rows[i].k = ks[i];
    try {
      std::vector<double> seg{ks[i]};
      if (anchor) seg.insert(seg.begin(), anchor_k);
      const auto tracked = ssh::track(cfg.v, cfg.r, cfg.gamma, seg, 2.0 * kPi / 512.0, anchor);
      const auto& t = tracked.back();
      rows[i].band = t.band;
      std::tie(rows[i].sx, rows[i].sz) = topology::texture_of(t.eig.R1);
      anchor = t.theta;
      anchor_k = ks[i];
    } catch (const Error& e) {
      rows[i].status = status_of(e);
      rows[i].band = 0;
    }
  }
  if (cfg.mode == Mode::Exact) return rows;

  parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    if (rows[i].status != "ok") return;
    try {
      dilated_row(cfg, i, rows[i]);
    } catch (const Error& e) {
      rows[i].status = status_of(e);
    }
  });
  return rows;
}

CompileReport compile_pulses(const RunConfig& cfg, double k, bool rotating_check) {
  cfg.validate();
  const ComplexMatrix2 H = model_hamiltonian(cfg, k);
  dilation::DilationConfig dc;
  dc.horizon = cfg.horizon.value_or(kDefaultDilationHorizon);
  dc.step = cfg.step;
  dc.eta0 = dilation::required_eta0(H, dc.horizon, cfg.eta0);
  CompileReport rep;
  rep.eta0 = dc.eta0;
  rep.trajectory = dilation::build_trajectory(H, dc);
  rep.schedule = pulse::compile(rep.trajectory, pulse::NVParams{});
  rep.roundtrip_residual = pulse::roundtrip_residual(rep.trajectory, rep.schedule);
  if (rotating_check) {
    const auto nv = pulse::NVParams::scaled();
    const auto sched = pulse::compile(rep.trajectory, nv);
    Vec2 psi0(1.0, 0.0);
    pulse::RotatingFrameOptions opt;
    opt.horizon = std::min(opt.horizon, rep.trajectory.times.back());
    rep.rotating_frame_deviation =
        pulse::rotating_frame_check(nv, sched, dilation::initial_dilated_state(psi0, rep.trajectory.eta.front()), opt);
  }
  return rep;
}

void write_schedule(std::ostream& os, const pulse::PulseSchedule& s, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  os << "# omega_up: " << format_double(s.omega_up) << "\n# omega_down: " << format_double(s.omega_down) << '\n';
  os << "t,delta1,delta2,Omega1,Omega2,phi1,phi2\n";
  std::vector<double> p1, p2;
  for (const auto& x : s.samples) {
    p1.push_back(x.phi1);
    p2.push_back(x.phi2);
  }
  p1 = pulse::unwrap(p1);
  p2 = pulse::unwrap(p2);
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& x = s.samples[i];
    os << format_double(x.t) << ',' << format_double(x.delta1) << ',' << format_double(x.delta2) << ','
       << format_double(x.Omega1) << ',' << format_double(x.Omega2) << ',' << format_double(p1[i]) << ','
       << format_double(p2[i]) << '\n';
  }
}

std::string schedule_sidecar(const CompileReport& rep, const Metadata& meta) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  const auto& nv = rep.schedule.nv;
  j["nv"] = {{"D", nv.D}, {"omega_e", nv.omega_e}, {"omega_n", nv.omega_n}, {"A_zz", nv.A_zz}};
  j["omega_up"] = rep.schedule.omega_up;
  j["omega_down"] = rep.schedule.omega_down;
  j["eta0"] = rep.eta0;
  j["roundtrip_residual"] = rep.roundtrip_residual;
  j["max_hermiticity_defect"] = rep.trajectory.max_hermiticity_defect;
  j["min_positivity"] = rep.trajectory.min_positivity;
  if (rep.rotating_frame_deviation) j["rotating_frame_deviation"] = *rep.rotating_frame_deviation;
  j["frame"] = {{"A0", rep.schedule.frame.A0},
                {"A3", rep.schedule.frame.A3},
                {"B0", rep.schedule.frame.B0},
                {"B3", rep.schedule.frame.B3}};
  return j.dump(2) + "\n";
}

std::vector<EvolveRow> evolve(const RunConfig& cfg, double k, std::size_t samples) {
  cfg.validate();
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two time samples");
  if (cfg.mode == Mode::DilatedReadout) throw Error(ErrorCode::InvalidArgument, "evolve supports exact and dilated modes");
  const ssh::SSHParams p{cfg.v, cfg.r, cfg.gamma, k};
  const ComplexMatrix2 H = model_hamiltonian(cfg, k);
  const ComplexMatrix2 Hr = dynamics::rotate_hamiltonian_y(H);
  const Vec2 psi0(1.0, 0.0);
  const Vec2 psi0r = dynamics::rotate_state_y(psi0);
  const Vec2 R1 = cfg.hermitian_limit ? Vec2(psi0) : ssh::eigensystem(p).R1;
  const double horizon = cfg.horizon.value_or(kDefaultDilationHorizon);

  std::vector<EvolveRow> rows(samples);
  for (std::size_t i = 0; i < samples; ++i)
    rows[i].t = horizon * static_cast<double>(i) / static_cast<double>(samples - 1);

  auto fill = [&](std::size_t i, const Vec2& psi, const Vec2& psir) {
    rows[i].p0z = std::norm(psi(0)) / psi.squaredNorm();
    rows[i].p0x = std::norm(psir(0)) / psir.squaredNorm();
    rows[i].fidelity = dynamics::fidelity(R1, psi);
  };

  if (cfg.mode == Mode::Exact) {
    for (std::size_t i = 0; i < samples; ++i)
      fill(i, dynamics::evolve_nonunitary(H, psi0, rows[i].t), dynamics::evolve_nonunitary(Hr, psi0r, rows[i].t));
    return rows;
  }
  dilation::DilationConfig dc;
  dc.horizon = horizon;
  dc.step = cfg.step;
  dc.eta0 = dilation::required_eta0(H, horizon, cfg.eta0);
  const auto tz = dilation::build_trajectory(H, dc);
  const auto tx = dilation::build_trajectory(Hr, dc);
  const auto Pz = dilation::evolve_dilated(tz, dilation::initial_dilated_state(psi0, tz.eta.front()));
  const auto Px = dilation::evolve_dilated(tx, dilation::initial_dilated_state(psi0r, tx.eta.front()));
  for (std::size_t i = 0; i < samples; ++i) {
    const auto j = static_cast<std::size_t>(std::llround(rows[i].t / dc.step));
    rows[i].t = tz.times.at(j);
    const auto sz = dilation::postselect_minus(Pz.at(j));
    const auto sx = dilation::postselect_minus(Px.at(j));
    fill(i, sz.psi, sx.psi);
    rows[i].postselection = sz.success_probability;
  }
  return rows;
}

std::vector<ReproduceLine> reproduce(const std::vector<std::string>& tables, unsigned workers) {
  std::vector<ReproduceLine> lines;
  auto meta_double = [](const TextureTable& t, const char* key) {
    return std::stod(t.meta.at(key));
  };
  for (const auto& name : tables) {
    if (name == "s1" || name == "s2" || name == "s3") {
      const auto ref = load_dataset(name);
      RunConfig cfg;
      cfg.v = meta_double(ref, "v");
      cfg.r = meta_double(ref, "r");
      cfg.gamma = 1.0;
      cfg.workers = workers;
      cfg.grid.units_pi = false;
      for (const auto& s : ref.samples) cfg.grid.list.push_back(s.k);
      cfg.grid.count = cfg.grid.list.size();
      const auto rows = sweep(cfg);
      double worst = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != "ok") ok = false;
        worst = std::max({worst, std::abs(rows[i].sx - ref.samples[i].sx), std::abs(rows[i].sz - ref.samples[i].sz)});
      }
      ok = ok && worst <= 1e-3;
      lines.push_back({name, ok, fmt::format("{} rows, max |delta| = {:.3e} (tolerance 1e-3)", rows.size(), worst)});
    } else if (name == "winding") {
      for (const char* ds : {"s1", "s2", "s3"}) {
        const auto ref = load_dataset(ds);
        topology::DataOptions opt;
        opt.model = topology::ModelParams{meta_double(ref, "v"), meta_double(ref, "r"), 1.0};
        const auto res = topology::winding_from_data(ref.samples, {}, opt);
        const double expected = meta_double(ref, "expected_w");
        const bool ok = std::abs(res.w - expected) <= 0.05;
        lines.push_back({fmt::format("winding/{}", ds), ok,
                         fmt::format("data w = {:.6f}, expected {} (tolerance 0.05)", res.w, expected)});
        const auto model = topology::winding_model(*opt.model, 1000);
        const bool ok_model = std::abs(model.w - expected) <= 1e-3;
        lines.push_back({fmt::format("winding/{}/model", ds), ok_model,
                         fmt::format("model w = {:.9f} on 1000 points, expected {} (tolerance 1e-3)", model.w,
                                     expected)});
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown table '" + name + "'");
    }
  }
  return lines;
}

}  // namespace nhssh::cli
