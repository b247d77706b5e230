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
#include <fstream>
#include <iostream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "nhssh/error.hpp"

namespace nhssh::cli {

namespace {

struct Inputs {
  RunConfig cfg;
  std::string k_grid;
  std::string k_list;
  std::string k_units = "pi";
  std::string mode = "exact";
  std::string format = "csv";
  std::string rates;
  std::string config;
  double horizon = 0.0;
  double k = 0.0;
  std::vector<CLI::Option*> tracked;  // options that may also come from --config
};

void add_model(CLI::App* sub, Inputs& in) {
  in.tracked.push_back(sub->add_option("--v", in.cfg.v, "intracell hopping v")->capture_default_str());
  in.tracked.push_back(sub->add_option("--r", in.cfg.r, "intercell hopping r")->capture_default_str());
  in.tracked.push_back(sub->add_option("--gamma", in.cfg.gamma, "energy scale (rad/us)")->capture_default_str());
  in.tracked.push_back(sub->add_option("--k-units", in.k_units, "units of k values")
                           ->check(CLI::IsMember({"pi", "rad"}))
                           ->capture_default_str());
  sub->add_option("--config", in.config, "JSON run configuration; flags take precedence")->check(CLI::ExistingFile);
}

void add_dilation(CLI::App* sub, Inputs& in) {
  in.tracked.push_back(sub->add_option("--eta0", in.cfg.eta0, "lower bound on eta(0)")->capture_default_str());
  in.tracked.push_back(sub->add_option("--step", in.cfg.step, "integrator step (us)")->capture_default_str());
  in.tracked.push_back(sub->add_option("--horizon", in.horizon, "evolution time (us); default depends on command"));
}

void add_output(CLI::App* sub, Inputs& in) {
  in.tracked.push_back(sub->add_option("--out", in.cfg.out, "output path (stdout when omitted)"));
  in.tracked.push_back(
      sub->add_option("--format", in.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str());
}

std::string key_of(const CLI::Option* opt) {
  std::string name = opt->get_name();
  while (!name.empty() && name.front() == '-') name.erase(name.begin());
  for (auto& c : name)
    if (c == '-') c = '_';
  return name;
}

void finalize(Inputs& in) {
  std::vector<std::string> locked;
  for (const auto* opt : in.tracked)
    if (opt->count() > 0) locked.push_back(key_of(opt));
  const bool units_pi = in.k_units == "pi";
  in.cfg.grid.units_pi = units_pi;
  if (in.horizon > 0.0) in.cfg.horizon = in.horizon;
  if (!in.mode.empty()) in.cfg.mode = parse_mode(in.mode);
  in.cfg.format = parse_format(in.format);
  if (!in.rates.empty()) {
    const auto g = KGrid::from_list(in.rates, false);
    if (g.list.size() != 4) throw Error(ErrorCode::InvalidArgument, "--rates needs four values");
    std::copy(g.list.begin(), g.list.end(), in.cfg.rates.N.begin());
  }
  if (!in.config.empty()) {
    std::ifstream f(in.config);
    std::stringstream ss;
    ss << f.rdbuf();
    apply_json_config(in.cfg, ss.str(), locked);
  }
  if (!in.k_grid.empty()) in.cfg.grid = KGrid::parse(in.k_grid, units_pi);
  if (!in.k_list.empty()) in.cfg.grid = KGrid::from_list(in.k_list, units_pi);
}

// Writes to --out when set, else to the given stream.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  fn(f);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Hermitian SSH simulator: spin textures, dilation, pulse compilation and winding numbers"};
  app.require_subcommand(1);
  Inputs in;

  auto* sweep_cmd = app.add_subcommand("sweep", "spin texture over a momentum grid");
  add_model(sweep_cmd, in);
  in.tracked.push_back(sweep_cmd->add_option("--k-grid", in.k_grid, "start:stop:count, stop excluded"));
  in.tracked.push_back(sweep_cmd->add_option("--k-list", in.k_list, "comma-separated momenta"));
  in.tracked.push_back(sweep_cmd->add_option("--mode", in.mode, "exact | dilated | dilated+readout")
                           ->check(CLI::IsMember({"exact", "dilated", "dilated+readout"}))
                           ->capture_default_str());
  add_dilation(sweep_cmd, in);
  in.tracked.push_back(sweep_cmd->add_option("--shots", in.cfg.shots, "readout shots per flip setting")->capture_default_str());
  in.tracked.push_back(sweep_cmd->add_option("--seed", in.cfg.seed, "random seed")->capture_default_str());
  in.tracked.push_back(sweep_cmd->add_option("--rates", in.rates, "PL rates N1,N2,N3,N4"));
  in.tracked.push_back(sweep_cmd->add_option("--workers", in.cfg.workers, "worker threads")->capture_default_str());
  add_output(sweep_cmd, in);

  std::string data_path, dataset, crossings, method = "discrete";
  std::size_t points = 1000;
  int im_sign = 1;
  bool no_extend = false;
  auto* wind_cmd = app.add_subcommand("winding", "winding number from the model or from texture data");
  add_model(wind_cmd, in);
  auto* data_opt = wind_cmd->add_option("--data", data_path, "texture table (k,sx,sz[,sx_err,sz_err])")->check(CLI::ExistingFile);
  auto* dataset_opt = wind_cmd->add_option("--dataset", dataset, "built-in texture table");
  data_opt->excludes(dataset_opt);
  wind_cmd->add_option("--points", points, "model grid size per 2 pi")->capture_default_str();
  wind_cmd->add_option("--method", method, "model formula")->check(CLI::IsMember({"discrete", "continuous"}))->capture_default_str();
  wind_cmd->add_option("--crossings", crossings, "band-crossing momenta for data input (k units)");
  wind_cmd->add_option("--im-sign", im_sign, "sign of Im theta when no model is given")->check(CLI::IsMember({-1, 1}));
  wind_cmd->add_flag("--no-extend", no_extend, "do not continue half-winding data to 4 pi");
  auto* use_model = wind_cmd->add_flag("--use-model", "take the Im theta sign and crossings from --v/--r/--gamma");
  wind_cmd->add_option("--out", in.cfg.out, "output path (stdout when omitted)");

  bool rotating_check = false;
  auto* compile_cmd = app.add_subcommand("compile-pulses", "dilate one momentum point and compile microwave schedules");
  add_model(compile_cmd, in);
  compile_cmd->add_option("--k", in.k, "momentum")->required();
  add_dilation(compile_cmd, in);
  compile_cmd->add_flag("--hermitian-limit", in.cfg.hermitian_limit, "drop the i/2 gain/loss term");
  compile_cmd->add_flag("--rotating-check", rotating_check, "run the lab-frame check on rescaled NV constants");
  compile_cmd->add_option("--out", in.cfg.out, "schedule CSV path; a .json sidecar is written next to it")->required();

  std::size_t samples = 21;
  auto* evolve_cmd = app.add_subcommand("evolve", "population time series at one momentum point");
  add_model(evolve_cmd, in);
  evolve_cmd->add_option("--k", in.k, "momentum")->required();
  in.tracked.push_back(evolve_cmd->add_option("--mode", in.mode, "exact | dilated")
                           ->check(CLI::IsMember({"exact", "dilated"}))
                           ->capture_default_str());
  add_dilation(evolve_cmd, in);
  evolve_cmd->add_option("--samples", samples, "number of time samples")->capture_default_str();
  evolve_cmd->add_flag("--hermitian-limit", in.cfg.hermitian_limit, "drop the i/2 gain/loss term");
  add_output(evolve_cmd, in);

  std::vector<std::string> tables{"s1", "s2", "s3", "winding"};
  auto* repro_cmd = app.add_subcommand("reproduce", "regenerate the reference textures and winding numbers");
  repro_cmd->add_option("--tables", tables, "subset of s1,s2,s3,winding")->delimiter(',')->capture_default_str();
  repro_cmd->add_option("--workers", in.cfg.workers, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Validation);
  }

  try {
    finalize(in);
    const double unit = in.k_units == "pi" ? kPi : 1.0;

    if (sweep_cmd->parsed()) {
      const auto rows = sweep(in.cfg);
      emit(in.cfg.out, out, [&](std::ostream& os) {
        write_texture(os, rows, in.cfg.metadata(), in.cfg.format);
      });
      const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const TextureRow& r) { return r.status == "ok"; });
      return static_cast<int>(all_ok ? ExitCode::Ok : ExitCode::Numerical);
    }

    if (wind_cmd->parsed()) {
      Metadata meta;
      topology::WindingResult res;
      if (!data_path.empty() || !dataset.empty()) {
        TextureTable table;
        if (!data_path.empty()) {
          std::ifstream f(data_path);
          table = read_texture(f);
          meta.emplace_back("data", data_path);
        } else {
          table = load_dataset(dataset);
          meta.emplace_back("dataset", dataset);
        }
        topology::DataOptions opt;
        opt.im_theta_sign = im_sign;
        opt.auto_extend = !no_extend;
        if (use_model->count() > 0) opt.model = topology::ModelParams{in.cfg.v, in.cfg.r, in.cfg.gamma};
        std::vector<double> ks;
        if (!crossings.empty())
          for (double k : KGrid::from_list(crossings, false).list) ks.push_back(k * unit);
        res = topology::winding_from_data(table.samples, ks, opt);
      } else {
        const topology::ModelParams p{in.cfg.v, in.cfg.r, in.cfg.gamma};
        meta = {{"v", format_double(p.v)}, {"r", format_double(p.r)}, {"gamma", format_double(p.gamma)},
                {"points", std::to_string(points)}, {"method", method}};
        if (method == "continuous") {
          res.w = topology::winding_continuous(p.v, p.r, points);
          res.loop_w = res.w;
          res.raw = res.w;
          res.grid_size = points;
        } else {
          res = topology::winding_model(p, points);
        }
      }
      emit(in.cfg.out, out, [&](std::ostream& os) { os << winding_json(res, meta); });
      return 0;
    }

    if (compile_cmd->parsed()) {
      const auto rep = compile_pulses(in.cfg, in.k * unit, rotating_check);
      auto meta = in.cfg.metadata();
      std::erase_if(meta, [](const auto& kv) { return kv.first == "mode"; });
      meta.emplace_back("k", format_double(in.k * unit));
      meta.emplace_back("eta0", format_double(rep.eta0));
      meta.emplace_back("horizon_used", format_double(rep.trajectory.times.back()));
      emit(in.cfg.out, out, [&](std::ostream& os) { write_schedule(os, rep.schedule, meta); });
      emit(in.cfg.out + ".json", out, [&](std::ostream& os) { os << schedule_sidecar(rep, meta); });
      out << fmt::format("roundtrip residual: {:.3e}\n", rep.roundtrip_residual);
      if (rep.rotating_frame_deviation) out << fmt::format("rotating-frame deviation: {:.3e}\n", *rep.rotating_frame_deviation);
      return 0;
    }

    if (evolve_cmd->parsed()) {
      const auto rows = evolve(in.cfg, in.k * unit, samples);
      auto meta = in.cfg.metadata();
      meta.emplace_back("k", format_double(in.k * unit));
      emit(in.cfg.out, out, [&](std::ostream& os) {
        if (in.cfg.format == Format::Json) {
          nlohmann::ordered_json j;
          for (const auto& [k, v] : meta) j["meta"][k] = v;
          j["rows"] = nlohmann::json::array();
          for (const auto& r : rows) {
            nlohmann::ordered_json row{{"t", r.t}, {"p0z", r.p0z}, {"p0x", r.p0x}, {"fidelity", r.fidelity}};
            if (r.postselection) row["postselection"] = *r.postselection;
            j["rows"].push_back(row);
          }
          os << j.dump(2) << '\n';
          return;
        }
        for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
        const bool ps = !rows.empty() && rows.front().postselection.has_value();
        os << (ps ? "t,p0z,p0x,fidelity,postselection\n" : "t,p0z,p0x,fidelity\n");
        for (const auto& r : rows) {
          os << format_double(r.t) << ',' << format_double(r.p0z) << ',' << format_double(r.p0x) << ','
             << format_double(r.fidelity);
          if (ps) os << ',' << format_double(*r.postselection);
          os << '\n';
        }
      });
      return 0;
    }

    if (repro_cmd->parsed()) {
      const auto lines = reproduce(tables, in.cfg.workers);
      bool all = true;
      for (const auto& l : lines) {
        out << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << '\n';
        all = all && l.pass;
      }
      return static_cast<int>(all ? ExitCode::Ok : ExitCode::Mismatch);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(is_validation_error(e.code()) ? ExitCode::Validation : ExitCode::Numerical);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Numerical);
  }
  return 0;
}

}  // namespace nhssh::cli
