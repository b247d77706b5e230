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
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "nhssh/error.hpp"

namespace nhssh::cli {

// Shortest text that reads back to the same double.
std::string format_double(double x) { return fmt::format("{}", x); }

void write_texture(std::ostream& os, const std::vector<TextureRow>& rows, const Metadata& meta, Format format) {
  const bool with_err = std::any_of(rows.begin(), rows.end(), [](const TextureRow& r) { return r.sx_err.has_value(); });
  const bool dilated = std::any_of(rows.begin(), rows.end(), [](const TextureRow& r) { return r.eta0 > 0.0; });
  if (format == Format::Json) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    j["meta"]["k_units"] = "rad";
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json row{{"k", r.k}, {"sx", r.sx}, {"sz", r.sz}};
      if (with_err) {
        row["sx_err"] = r.sx_err.value_or(0.0);
        row["sz_err"] = r.sz_err.value_or(0.0);
      }
      if (dilated) {
        row["horizon"] = r.horizon;
        row["eta0"] = r.eta0;
      }
      row["band"] = r.band;
      row["status"] = r.status;
      j["rows"].push_back(row);
    }
    os << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  os << "# k_units: rad\n";
  os << (with_err ? "k,sx,sz,sx_err,sz_err" : "k,sx,sz") << (dilated ? ",horizon,eta0" : "") << ",band,status\n";
  for (const auto& r : rows) {
    os << format_double(r.k) << ',' << format_double(r.sx) << ',' << format_double(r.sz);
    if (with_err) os << ',' << format_double(r.sx_err.value_or(0.0)) << ',' << format_double(r.sz_err.value_or(0.0));
    if (dilated) os << ',' << format_double(r.horizon) << ',' << format_double(r.eta0);
    os << ',' << r.band << ',' << r.status << '\n';
  }
}

TextureTable read_texture(std::istream& is) {
  TextureTable table;
  std::string line;
  std::vector<std::string> columns;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("texture line {}: {}", lineno, what));
  };
  auto col = [&](const char* name) -> std::ptrdiff_t {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : it - columns.begin();
  };
  std::ptrdiff_t ik = -1, ix = -1, iz = -1, iex = -1, iez = -1, istatus = -1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto key = line.substr(1, colon - 1);
        auto val = line.substr(colon + 1);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        val.erase(0, val.find_first_not_of(' '));
        table.meta[key] = val;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      cells.push_back(cell);
    }
    if (columns.empty()) {
      columns = cells;
      ik = col("k");
      ix = col("sx");
      iz = col("sz");
      iex = col("sx_err");
      iez = col("sz_err");
      istatus = col("status");
      if (ik < 0 || ix < 0 || iz < 0) fail("header must name k, sx and sz columns");
      continue;
    }
    if (cells.size() != columns.size()) fail("wrong number of cells");
    if (istatus >= 0 && cells[istatus] != "ok") continue;
    auto num = [&](std::ptrdiff_t i) {
      try {
        std::size_t used = 0;
        const double x = std::stod(cells[i], &used);
        if (used != cells[i].size()) fail("bad number '" + cells[i] + "'");
        return x;
      } catch (const std::logic_error&) {
        fail("bad number '" + cells[i] + "'");
      }
      return 0.0;
    };
    topology::TextureSample s;
    s.k = num(ik);
    s.sx = num(ix);
    s.sz = num(iz);
    if (iex >= 0) s.sx_err = num(iex);
    if (iez >= 0) s.sz_err = num(iez);
    table.samples.push_back(s);
  }
  if (columns.empty()) throw Error(ErrorCode::InvalidArgument, "texture input has no header");
  const auto units = table.meta.find("k_units");
  if (units != table.meta.end()) {
    if (units->second == "pi") {
      for (auto& s : table.samples) s.k *= kPi;
    } else if (units->second != "rad") {
      throw Error(ErrorCode::InvalidArgument, "k_units must be pi or rad");
    }
  }
  return table;
}

std::string winding_json(const topology::WindingResult& res, const Metadata& meta) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["w"] = res.w;
  j["loop_w"] = res.loop_w;
  j["raw"] = res.raw;
  j["period"] = res.period;
  j["grid_size"] = res.grid_size;
  j["grid_too_coarse"] = res.grid_too_coarse;
  j["link_phases"] = res.link_phases;
  return j.dump(2) + "\n";
}

}  // namespace nhssh::cli
