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

#include "nhssh/topology.hpp"

#include <cmath>
#include <sstream>

#include "nhssh/error.hpp"
#include "nhssh/ssh_model.hpp"

namespace nhssh::topology {

namespace {

double fold(double raw) { return raw - 2.0 * std::floor((raw + 0.5) / 2.0); }

std::vector<double> uniform_grid(double start, double step, long first, long last) {
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(last - first + 1));
  for (long i = first; i <= last; ++i) ks.push_back(start + step * static_cast<double>(i));
  return ks;
}

}  // namespace

EigenPair canonical_pair(Complex theta) {
  const Complex z = std::exp(-kI * theta);
  const Complex ph = std::exp(kI * theta / 2.0);
  EigenPair p;
  p.R << 0.5 * (1.0 + z), 0.5 * kI * (1.0 - z);
  // bra = e^{i theta/2} (cos theta/2, -sin theta/2)
  p.L << std::conj(ph * std::cos(theta / 2.0)), std::conj(-ph * std::sin(theta / 2.0));
  return p;
}

WindingResult winding_discrete(const std::vector<EigenPair>& loop, bool closed, double period) {
  if (!closed) throw Error(ErrorCode::OpenLoop, "discrete winding needs a closed loop");
  if (loop.size() < 2) throw Error(ErrorCode::InvalidArgument, "loop needs at least two points");
  WindingResult res;
  res.period = period;
  res.grid_size = loop.size();
  res.link_phases.reserve(loop.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const EigenPair& a = loop[i];
    const EigenPair& b = loop[(i + 1) % loop.size()];
    const Complex self = a.L.dot(a.R);
    if (std::abs(self) < kOverlapFloor) {
      std::ostringstream os;
      os << "|<L|R>| = " << std::abs(self) << " at loop index " << i;
      throw Error(ErrorCode::OverlapVanished, os.str());
    }
    const double phase = std::arg(b.L.dot(a.R) / self);
    if (std::abs(phase) >= 0.5 * kPi) res.grid_too_coarse = true;
    res.link_phases.push_back(phase);
    sum += phase;
  }
  res.raw = sum / kPi;
  res.loop_w = fold(res.raw);
  res.w = res.loop_w * (2.0 * kPi / period);
  return res;
}

WindingResult winding_model(const ModelParams& p, std::size_t n_grid) {
  if (n_grid < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least three points");
  ssh::classify_phase(p.v, p.r);  // throws on a phase boundary
  const double dk = 2.0 * kPi / static_cast<double>(n_grid);
  const auto n = static_cast<long>(n_grid);
  auto tracked = ssh::track(p.v, p.r, p.gamma, uniform_grid(0.0, dk, 0, n));
  double period = 2.0 * kPi;
  if (tracked.back().band != tracked.front().band) {
    tracked = ssh::track(p.v, p.r, p.gamma, uniform_grid(0.0, dk, 0, 2 * n));
    period = 4.0 * kPi;
  }
  tracked.pop_back();  // endpoint duplicates the start
  std::vector<EigenPair> loop;
  loop.reserve(tracked.size());
  for (const auto& t : tracked) loop.push_back(canonical_pair(t.theta));
  return winding_discrete(loop, true, period);
}

double winding_continuous(double v, double r, std::size_t n_grid, double period) {
  if (n_grid < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least three points");
  ssh::classify_phase(v, r);
  const double dk = period / static_cast<double>(n_grid);
  const auto n = static_cast<long>(n_grid);
  const auto tracked = ssh::track(v, r, 1.0, uniform_grid(0.0, dk, -2, n + 1));
  std::vector<EigenPair> pairs;
  pairs.reserve(tracked.size());
  for (const auto& t : tracked) pairs.push_back(canonical_pair(t.theta));
  Complex sum = 0.0;
  for (std::size_t i = 2; i < n_grid + 2; ++i) {
    const Vec2 d = (-pairs[i + 2].R + 8.0 * pairs[i + 1].R - 8.0 * pairs[i - 1].R + pairs[i - 2].R) / (12.0 * dk);
    sum += pairs[i].L.dot(d) * dk;
  }
  const Complex w = kI * sum / kPi;
  if (std::abs(w.imag()) > 1e-6) {
    std::ostringstream os;
    os << "imaginary residue " << w.imag() << " in the winding integral";
    throw Error(ErrorCode::GridTooCoarse, os.str());
  }
  return w.real();
}

std::pair<double, double> texture_of(const Vec2& R) {
  return {ssh::normalized_expectation(R, Axis::X), ssh::normalized_expectation(R, Axis::Z)};
}

Reconstruction reconstruct_eigenvectors(const TextureSample& s, int im_theta_sign, double tolerance) {
  const double n2 = s.sx * s.sx + s.sz * s.sz;
  if (n2 > 1.0 + tolerance) {
    std::ostringstream os;
    os << "sx^2 + sz^2 = " << n2 << " at k = " << s.k;
    throw Error(ErrorCode::OutsideBloch, os.str());
  }
  if (n2 == 0.0) throw Error(ErrorCode::Ambiguous, "sx = sz = 0 leaves theta undetermined");
  const double re = std::atan2(-s.sx, s.sz);
  const double im = std::acosh(1.0 / std::min(std::sqrt(n2), 1.0));
  const Complex theta(re, im_theta_sign >= 0 ? im : -im);
  return {theta, canonical_pair(theta)};
}

bool is_half_winding(const std::vector<TextureSample>& series) {
  if (series.size() < 2) throw Error(ErrorCode::InvalidArgument, "series needs at least two samples");
  const auto& a = series.front();
  const auto& b = series.back();
  const double direct = std::hypot(b.sx - a.sx, b.sz - a.sz);
  const double swapped = std::hypot(b.sx + a.sx, b.sz + a.sz);
  return swapped < direct;
}

std::vector<TextureSample> extend_to_4pi(const std::vector<TextureSample>& series) {
  if (!is_half_winding(series))
    throw Error(ErrorCode::NotHalfWinding, "series already closes over 2 pi");
  std::vector<TextureSample> out = series;
  out.reserve(2 * series.size());
  for (const auto& s : series) {
    TextureSample t = s;
    t.k += 2.0 * kPi;
    t.sx = -s.sx;
    t.sz = -s.sz;
    out.push_back(t);
  }
  return out;
}

std::vector<double> predicted_crossings(const ModelParams& p, double k_lo, double k_hi) {
  // Im(lambda1) = Im(lambda2) needs h_z = 0 and |h_x| > 1/2, i.e. k = m pi.
  std::vector<double> out;
  for (auto m = static_cast<long>(std::ceil(k_lo / kPi)); static_cast<double>(m) * kPi <= k_hi; ++m) {
    const double k = static_cast<double>(m) * kPi;
    if (k <= k_lo || k >= k_hi) continue;
    if (std::abs(p.v + p.r * std::cos(k)) > 0.5) out.push_back(k);
  }
  return out;
}

std::vector<TextureSample> apply_crossings(const std::vector<TextureSample>& table,
                                           const std::vector<double>& crossing_ks) {
  std::vector<TextureSample> out = table;
  for (double kc : crossing_ks) {
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      if (!(out[i].k < kc && kc < out[i + 1].k)) continue;
      const double dot = out[i].sx * out[i + 1].sx + out[i].sz * out[i + 1].sz;
      if (dot < 0.0) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
          out[j].sx = -out[j].sx;
          out[j].sz = -out[j].sz;
        }
      }
      break;
    }
  }
  return out;
}

WindingResult winding_from_data(const std::vector<TextureSample>& table, const std::vector<double>& crossing_ks,
                                const DataOptions& options) {
  if (table.size() < 3) throw Error(ErrorCode::InvalidArgument, "texture table needs at least three rows");
  for (std::size_t i = 1; i < table.size(); ++i)
    if (!(table[i].k > table[i - 1].k))
      throw Error(ErrorCode::InvalidArgument, "texture table momenta must increase strictly");

  std::vector<double> crossings = crossing_ks;
  if (crossings.empty() && options.model)
    crossings = predicted_crossings(*options.model, table.front().k, table.back().k);
  std::vector<TextureSample> series = apply_crossings(table, crossings);

  double period = 2.0 * kPi;
  if (options.auto_extend && is_half_winding(series)) {
    series = extend_to_4pi(series);
    period = 4.0 * kPi;
  }

  std::vector<EigenPair> loop;
  loop.reserve(series.size());
  for (const auto& s : series) {
    int sign = options.im_theta_sign;
    if (options.model) {
      const auto e = ssh::eigensystem({options.model->v, options.model->r, options.model->gamma, s.k});
      sign = e.theta.imag() >= 0.0 ? 1 : -1;
    }
    loop.push_back(reconstruct_eigenvectors(s, sign, options.tolerance).pair);
  }
  return winding_discrete(loop, true, period);
}

}  // namespace nhssh::topology
