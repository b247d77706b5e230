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
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "nhssh/error.hpp"

namespace nhssh::cli {

namespace {

double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(x))
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad {} '{}'", what, s));
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    parts.push_back(cur);
  }
  return parts;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "dilated") return Mode::Dilated;
  if (s == "dilated+readout") return Mode::DilatedReadout;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + s + "'");
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Exact: return "exact";
    case Mode::Dilated: return "dilated";
    case Mode::DilatedReadout: return "dilated+readout";
  }
  return "exact";
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + s + "'");
}

KGrid KGrid::parse(const std::string& text, bool units_pi) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "k grid must be start:stop:count");
  KGrid g;
  g.start = parse_number(parts[0], "k grid start");
  g.stop = parse_number(parts[1], "k grid stop");
  const double c = parse_number(parts[2], "k grid count");
  if (c < 0 || c != std::floor(c)) throw Error(ErrorCode::InvalidArgument, "k grid count must be a whole number");
  g.count = static_cast<std::size_t>(c);
  g.units_pi = units_pi;
  return g;
}

KGrid KGrid::from_list(const std::string& csv, bool units_pi) {
  KGrid g;
  g.units_pi = units_pi;
  for (const auto& p : split(csv, ',')) g.list.push_back(parse_number(p, "k value"));
  g.count = g.list.size();
  return g;
}

std::vector<double> KGrid::radians() const {
  const double unit = units_pi ? kPi : 1.0;
  std::vector<double> ks;
  if (!list.empty()) {
    for (double k : list) ks.push_back(k * unit);
    return ks;
  }
  for (std::size_t i = 0; i < count; ++i)
    ks.push_back(unit * (start + (stop - start) * static_cast<double>(i) / static_cast<double>(count)));
  return ks;
}

void KGrid::validate() const {
  if (list.empty()) {
    if (count < 2) throw Error(ErrorCode::InvalidArgument, "k grid needs at least two points");
    if (!(stop > start)) throw Error(ErrorCode::InvalidArgument, "k grid stop must exceed start");
  } else {
    if (list.size() < 2) throw Error(ErrorCode::InvalidArgument, "k list needs at least two points");
    for (std::size_t i = 1; i < list.size(); ++i)
      if (!(list[i] > list[i - 1])) throw Error(ErrorCode::InvalidArgument, "k list must increase strictly");
  }
}

void RunConfig::validate() const {
  for (double x : {v, r, gamma, eta0, step})
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite parameter");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (!(eta0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta0 must be positive");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (horizon && !(*horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (shots < 1) throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  rates.validate();
}

std::vector<std::pair<std::string, std::string>> RunConfig::metadata() const {
  Metadata m;
  m.emplace_back("nhssh_version", NHSSH_VERSION_STRING);
  m.emplace_back("v", format_double(v));
  m.emplace_back("r", format_double(r));
  m.emplace_back("gamma", format_double(gamma));
  m.emplace_back("mode", to_string(mode));
  m.emplace_back("hermitian_limit", hermitian_limit ? "true" : "false");
  if (mode != Mode::Exact) {
    m.emplace_back("eta0_floor", format_double(eta0));
    m.emplace_back("step", format_double(step));
    m.emplace_back("horizon", horizon ? format_double(*horizon) : "auto");
  }
  if (mode == Mode::DilatedReadout) {
    m.emplace_back("rates", fmt::format("{},{},{},{}", format_double(rates.N[0]), format_double(rates.N[1]),
                                        format_double(rates.N[2]), format_double(rates.N[3])));
    m.emplace_back("shots", std::to_string(shots));
    m.emplace_back("seed", std::to_string(seed));
  }
  return m;
}

void apply_json_config(RunConfig& cfg, const std::string& text, const std::vector<std::string>& locked) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  auto is_locked = [&](const std::string& key) {
    return std::find(locked.begin(), locked.end(), key) != locked.end();
  };
  try {
    bool units_pi = cfg.grid.units_pi;
    if (j.contains("k_units") && !is_locked("k_units")) {
      const auto u = j.at("k_units").get<std::string>();
      if (u != "pi" && u != "rad") throw Error(ErrorCode::InvalidArgument, "k_units must be pi or rad");
      units_pi = u == "pi";
    }
    cfg.grid.units_pi = units_pi;
    for (const auto& [key, val] : j.items()) {
      if (is_locked(key)) continue;
      if (key == "v") cfg.v = val.get<double>();
      else if (key == "r") cfg.r = val.get<double>();
      else if (key == "gamma") cfg.gamma = val.get<double>();
      else if (key == "k_grid") cfg.grid = KGrid::parse(val.get<std::string>(), units_pi);
      else if (key == "k_list") {
        KGrid g;
        g.units_pi = units_pi;
        g.list = val.get<std::vector<double>>();
        g.count = g.list.size();
        cfg.grid = g;
      } else if (key == "k_units") continue;
      else if (key == "mode") cfg.mode = parse_mode(val.get<std::string>());
      else if (key == "eta0") cfg.eta0 = val.get<double>();
      else if (key == "step") cfg.step = val.get<double>();
      else if (key == "horizon") cfg.horizon = val.get<double>();
      else if (key == "rates") {
        const auto r = val.get<std::vector<double>>();
        if (r.size() != 4) throw Error(ErrorCode::InvalidArgument, "rates needs four values");
        std::copy(r.begin(), r.end(), cfg.rates.N.begin());
      } else if (key == "shots") cfg.shots = val.get<std::uint64_t>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "out") cfg.out = val.get<std::string>();
      else if (key == "workers") cfg.workers = val.get<unsigned>();
      else if (key == "format") cfg.format = parse_format(val.get<std::string>());
      else if (key == "hermitian_limit") cfg.hermitian_limit = val.get<bool>();
      else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
}

}  // namespace nhssh::cli
