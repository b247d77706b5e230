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

// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "cli_runner.hpp"
#include "nhssh/dilation.hpp"
#include "nhssh/dynamics.hpp"
#include "nhssh/error.hpp"
#include "nhssh/readout_model.hpp"
#include "nhssh/ssh_model.hpp"
#include "nhssh/topology.hpp"
#include "oracles.hpp"

namespace {

using namespace nhssh;
using testing::Gen;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

Outcome texture_table(const std::string& name, std::size_t expected_rows) {
  const auto ref = cli::load_dataset(name);
  cli::RunConfig cfg;
  cfg.v = std::stod(ref.meta.at("v"));
  cfg.r = std::stod(ref.meta.at("r"));
  cfg.grid.units_pi = false;
  for (const auto& s : ref.samples) cfg.grid.list.push_back(s.k);
  const auto rows = cli::sweep(cfg);
  double worst = 0.0;
  bool ok = rows.size() == expected_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ok = ok && rows[i].status == "ok";
    worst = std::max({worst, std::abs(rows[i].sx - ref.samples[i].sx), std::abs(rows[i].sz - ref.samples[i].sz)});
  }
  ok = ok && worst <= 1e-3;
  return {ok, fmt::format("{} rows, max |delta| = {:.2e}", rows.size(), worst)};
}

Outcome winding_numbers() {
  Outcome o;
  std::ostringstream d;
  for (const char* name : {"s1", "s2", "s3"}) {
    const auto ref = cli::load_dataset(name);
    const topology::ModelParams p{std::stod(ref.meta.at("v")), std::stod(ref.meta.at("r")), 3.5};
    const double expected = std::stod(ref.meta.at("expected_w"));
    topology::DataOptions opt;
    opt.model = p;
    const double w_data = topology::winding_from_data(ref.samples, {}, opt).w;
    const double w_model = topology::winding_model(p, 1000).w;
    o.pass = o.pass && std::abs(w_data - expected) <= 0.05 && std::abs(w_model - expected) <= 1e-3;
    d << fmt::format("{}: data {:.4f} model {:.6f} (target {}); ", name, w_data, w_model, expected);
  }
  o.detail = d.str();
  return o;
}

struct Draw {
  ssh::SSHParams p;
  Vec2 psi0;
};

std::vector<Draw> correspondence_draws() {
  Gen g(20240917);
  std::vector<Draw> draws;
  for (int i = 0; i < 20; ++i) {
    Draw d{g.ssh_params(0.1, 1.2, 2.0, 5.0, 0.05), {}};
    d.psi0 = g.state2();
    draws.push_back(d);
  }
  return draws;
}

struct DrawResult {
  bool positive = false;
  double min_positivity = 0.0;
  double distance = INFINITY;
};

DrawResult run_draw(const Draw& d, double eta0) {
  const ComplexMatrix2 H = ssh::hamiltonian(d.p);
  dilation::DilationConfig cfg;
  cfg.eta0 = eta0;
  cfg.step = 1e-4;
  cfg.horizon = 1.5;
  // Scan the metric first so the positivity margin is known even when it fails.
  cfg.positivity_floor = -INFINITY;
  DrawResult r;
  r.min_positivity = dilation::solve_M(H, cfg).min_positivity;
  r.positive = r.min_positivity > 0.0;
  if (!r.positive) return r;
  cfg.positivity_floor = 0.0;
  const auto traj = dilation::build_trajectory(H, cfg);
  const auto states = dilation::evolve_dilated(traj, dilation::initial_dilated_state(d.psi0, traj.eta.front()));
  const std::size_t n = traj.size() - 1;
  double worst = 0.0;
  for (std::size_t s = 1; s <= 20; ++s) {
    const std::size_t j = n * s / 20;
    const Vec2 a = dilation::postselect_minus(states[j]).psi;
    const Vec2 b = dynamics::evolve_nonunitary(H, d.psi0, traj.times[j]);
    worst = std::max(worst, pure_state_distance(a / a.norm(), b / b.norm()));
  }
  r.distance = worst;
  return r;
}

// Criteria 5 and 6 share one batch of runs.
struct CorrespondenceBatch {
  std::vector<DrawResult> fixed;
  std::vector<DrawResult> raised;
  std::vector<double> raised_eta0;
};

const CorrespondenceBatch& correspondence_batch() {
  static const CorrespondenceBatch batch = [] {
    CorrespondenceBatch b;
    for (const auto& d : correspondence_draws()) {
      b.fixed.push_back(run_draw(d, 8.0));
      const double eta0 = dilation::required_eta0(ssh::hamiltonian(d.p), 1.5, 8.0);
      b.raised_eta0.push_back(eta0);
      b.raised.push_back(eta0 == 8.0 ? b.fixed.back() : run_draw(d, eta0));
    }
    return b;
  }();
  return batch;
}

Outcome dilation_correspondence() {
  const auto& b = correspondence_batch();
  std::size_t ok = 0, positive = 0, raised_ok = 0;
  double worst_positive = 0.0, worst_raised = 0.0;
  for (std::size_t i = 0; i < b.fixed.size(); ++i) {
    if (b.fixed[i].positive) {
      ++positive;
      worst_positive = std::max(worst_positive, b.fixed[i].distance);
    }
    if (b.fixed[i].distance < 1e-6) ++ok;
    if (b.raised[i].distance < 1e-6) ++raised_ok;
    worst_raised = std::max(worst_raised, b.raised[i].distance);
  }
  return {ok == b.fixed.size(),
          fmt::format("eta0 = 8: {}/{} draws within 1e-6 ({} keep M - I positive, worst distance among them {:.2e}); "
                      "with eta0 raised per draw: {}/{} within 1e-6, worst {:.2e}",
                      ok, b.fixed.size(), positive, worst_positive, raised_ok, b.raised.size(), worst_raised)};
}

Outcome positivity() {
  const auto& b = correspondence_batch();
  std::size_t lost = 0;
  double worst = INFINITY;
  for (const auto& r : b.fixed) {
    if (!r.positive) ++lost;
    worst = std::min(worst, r.min_positivity);
  }
  double max_eta = 0.0;
  for (double e : b.raised_eta0) max_eta = std::max(max_eta, e);
  return {lost == 0, fmt::format("eta0 = 8: {}/{} draws lose positivity, min eig(M - I) = {:.3e}; "
                                 "largest eta0 needed is {:.3g}",
                                 lost, b.fixed.size(), worst, max_eta)};
}

Outcome decay_preparation() {
  Outcome o;
  std::ostringstream d;
  for (const auto& p : {ssh::SSHParams{0.3, 1.0, 3.5, 0.3 * kPi}, ssh::SSHParams{0.3, 0.3, 4.0, 0.6 * kPi}}) {
    const double f = dynamics::steady_eigenstate(p, Vec2(1.0, 0.0), 1.5).fidelity_to_R1;
    o.pass = o.pass && f >= 0.99;
    d << fmt::format("r = {}: F = {:.6f}; ", p.r, f);
  }
  o.detail = d.str();
  return o;
}

Outcome pulse_roundtrip() {
  cli::RunConfig cfg;
  double worst = 0.0;
  for (double k : {0.3 * kPi, 0.5 * kPi, 1.3 * kPi}) worst = std::max(worst, cli::compile_pulses(cfg, k, false).roundtrip_residual);
  return {worst <= 1e-10, fmt::format("max residual {:.2e} over 3 momenta", worst)};
}

Outcome readout_identity() {
  Gen g(99);
  const readout::PLRates rates;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    readout::Populations P;
    for (int j = 0; j < 4; ++j) P(j) = -std::log(g.uniform(1e-12, 1.0));
    P /= P.sum();
    Eigen::Vector4d counts;
    for (int f = 0; f < 4; ++f) counts(f) = readout::observe(P, rates, readout::kFlipSequences[f]);
    worst = std::max(worst, (readout::mle_normalize(readout::invert(counts, rates)) - P).cwiseAbs().maxCoeff());
  }
  const Vec4 Psi = dilation::initial_dilated_state(g.state2(), 3.0 * ComplexMatrix2::Identity());
  const double truth = readout::expected_electron_z(Psi, rates).sigma_z;
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto z = readout::measure_electron_z(Psi, rates, 1'000'000, seed);
    if (std::abs(z.sigma_z - truth) <= 4.0 * z.standard_error) ++within;
  }
  return {worst <= 1e-12 && within == 50,
          fmt::format("roundtrip max error {:.2e}; {}/50 seeds within 4 SE", worst, within)};
}

Outcome symmetry_suites() {
  Gen g(7);
  constexpr int kN = 200;
  int chiral = 0, pairing = 0, relations = 0, gauge = 0, rotation = 0;
  for (int i = 0; i < kN; ++i) {
    const auto p = g.ssh_params();
    const ComplexMatrix2 H = ssh::hamiltonian(p);
    const auto e = ssh::eigensystem(p);
    if ((pauli::y() * H * pauli::y() + H).norm() < 1e-12 * H.norm()) ++chiral;
    if (std::abs(e.lambda1 + e.lambda2) < 1e-12 * std::abs(e.lambda1)) ++pairing;
    bool rel = true;
    for (Axis a : {Axis::X, Axis::Z})
      rel = rel && std::abs(ssh::normalized_expectation(e.R1, a) + ssh::normalized_expectation(e.R2, a)) < 1e-10;
    if (rel) ++relations;

    const Vec2 psi = g.state2();
    const double t = g.uniform(0.0, 1.5);
    const Vec2 x = dynamics::evolve_nonunitary(H, psi, t);
    const Vec2 z = dynamics::evolve_nonunitary(dynamics::rotate_hamiltonian_y(H), dynamics::rotate_state_y(psi), t);
    if (std::abs(ssh::normalized_expectation(x, Axis::X) - ssh::normalized_expectation(z, Axis::Z)) < 1e-10) ++rotation;
  }
  for (int i = 0; i < 100; ++i) {
    const double v = g.uniform(0.1, 1.2), r = g.uniform(0.1, 1.2);
    std::vector<double> ks;
    for (int j = 0; j <= 120; ++j) ks.push_back(2.0 * kPi * j / 120.0);
    std::vector<topology::EigenPair> loop;
    try {
      auto tr = ssh::track(v, r, 3.5, ks);
      tr.pop_back();
      for (const auto& s : tr) loop.push_back(topology::canonical_pair(s.theta));
    } catch (const Error&) {
      ++gauge;  // EP on the grid; gauge freedom is moot
      continue;
    }
    const double base = topology::winding_discrete(loop, true).loop_w;
    for (auto& pr : loop) {
      pr.R *= std::polar(g.uniform(0.2, 5.0), g.uniform(-kPi, kPi));
      pr.L *= std::polar(g.uniform(0.2, 5.0), g.uniform(-kPi, kPi));
    }
    if (std::abs(topology::winding_discrete(loop, true).loop_w - base) < 1e-10) ++gauge;
  }
  const bool ok = chiral == kN && pairing == kN && relations == kN && rotation == kN && gauge == 100;
  return {ok, fmt::format("chiral {}/{}, pairing {}/{}, relations {}/{}, x-basis {}/{}, gauge {}/100", chiral, kN,
                          pairing, kN, relations, kN, rotation, kN, gauge)};
}

std::set<int> parse_known(const std::string& s) {
  std::set<int> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--known-failures" && i + 1 < argc) {
      known = parse_known(argv[++i]);
    } else {
      std::cerr << "usage: nhssh_acceptance [--known-failures 5,6]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "texture table s1", 1.0, [] { return texture_table("s1", 11); }},
      {2, "texture table s2", 1.0, [] { return texture_table("s2", 15); }},
      {3, "texture table s3", 1.0, [] { return texture_table("s3", 18); }},
      {4, "winding numbers", 5.0, winding_numbers},
      {5, "dilation correspondence", 60.0, dilation_correspondence},
      {6, "metric positivity", 60.0, positivity},
      {7, "decay preparation", 1.0, decay_preparation},
      {8, "pulse roundtrip", 5.0, pulse_roundtrip},
      {9, "readout identity", 30.0, readout_identity},
      {10, "symmetry and relations", 30.0, symmetry_suites},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = dt <= c.budget_s;
    const bool pass = o.pass && in_budget;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.3f} s, budget {} s{}]", pass ? "PASS" : "FAIL", c.id, c.title,
                             o.detail, dt, c.budget_s, in_budget ? "" : ", over budget")
              << (pass || !known.count(c.id) ? "" : " (known failure)") << '\n';
    if (!pass && !known.count(c.id)) ++unexpected;
  }
  std::cout << (unexpected == 0 ? "acceptance: no unexpected failures\n"
                                : fmt::format("acceptance: {} unexpected failure(s)\n", unexpected));
  return unexpected == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
