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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nhssh/dilation.hpp"
#include "nhssh/pulse_compiler.hpp"
#include "nhssh/readout_model.hpp"
#include "nhssh/topology.hpp"

namespace nhssh::cli {

enum class ExitCode : int { Ok = 0, Validation = 1, Numerical = 2, Mismatch = 3 };

enum class Mode { Exact, Dilated, DilatedReadout };
enum class Format { Csv, Json };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);
Format parse_format(const std::string& s);

/// Momentum grid. count points from start with stop excluded, or an
/// explicit list. Values are in units of pi when units_pi is set.
struct KGrid {
  double start = 0.0;
  double stop = 2.0;
  std::size_t count = 0;
  bool units_pi = true;
  std::vector<double> list;

  static KGrid parse(const std::string& text, bool units_pi);
  static KGrid from_list(const std::string& csv, bool units_pi);
  std::vector<double> radians() const;
  void validate() const;
};

struct RunConfig {
  double v = 0.3;
  double r = 1.0;
  double gamma = 3.5;
  KGrid grid;
  Mode mode = Mode::Exact;
  double eta0 = 8.0;
  double step = 1e-4;
  std::optional<double> horizon;
  readout::PLRates rates;
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 1;
  std::string out;
  unsigned workers = 1;
  Format format = Format::Csv;
  bool hermitian_limit = false;

  void validate() const;
  std::vector<std::pair<std::string, std::string>> metadata() const;
};

/// Fills every field present in a JSON object. Unknown keys are rejected.
void apply_json_config(RunConfig& cfg, const std::string& json_text, const std::vector<std::string>& locked);

struct TextureRow {
  double k = 0.0;
  double sx = 0.0;
  double sz = 0.0;
  std::optional<double> sx_err;
  std::optional<double> sz_err;
  int band = 1;
  std::string status = "ok";
  double horizon = 0.0;
  double eta0 = 0.0;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double x);

std::vector<TextureRow> sweep(const RunConfig& cfg);
void write_texture(std::ostream& os, const std::vector<TextureRow>& rows, const Metadata& meta, Format format);

struct TextureTable {
  std::vector<topology::TextureSample> samples;  // k in radians
  std::map<std::string, std::string> meta;
};

/// Column-name based reader; k may be in units of pi (k_units: pi).
TextureTable read_texture(std::istream& is);

/// Built-in reference tables.
std::vector<std::string> dataset_names();
TextureTable load_dataset(const std::string& name);

std::string winding_json(const topology::WindingResult& res, const Metadata& meta);

struct CompileReport {
  dilation::DilationTrajectory trajectory;
  pulse::PulseSchedule schedule;
  double roundtrip_residual = 0.0;
  std::optional<double> rotating_frame_deviation;
  double eta0 = 0.0;
};

CompileReport compile_pulses(const RunConfig& cfg, double k, bool rotating_check);
void write_schedule(std::ostream& os, const pulse::PulseSchedule& s, const Metadata& meta);
std::string schedule_sidecar(const CompileReport& rep, const Metadata& meta);

struct EvolveRow {
  double t;
  double p0z;
  double p0x;
  double fidelity;
  std::optional<double> postselection;
};

std::vector<EvolveRow> evolve(const RunConfig& cfg, double k, std::size_t samples);

struct ReproduceLine {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<ReproduceLine> reproduce(const std::vector<std::string>& tables, unsigned workers = 1);

/// Entry point of the nhssh executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhssh::cli
