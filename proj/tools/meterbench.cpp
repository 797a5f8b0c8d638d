// Copyright 2026 The meterbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meterbench/backaction.hpp"
#include "meterbench/scenario_io.hpp"
#include "meterbench/scenarios.hpp"
#include "meterbench/svg.hpp"
#include "meterbench/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

void write_text(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw meterbench::ParseError("cannot open for writing: " + out_path);
  out << content;
}

std::string render_sweep(const meterbench::SweepResult& result, const std::string& format,
                         bool decohere) {
  std::ostringstream os;
  if (format == "json") {
    os << meterbench::sweep_to_json(result).dump(2) << "\n";
  } else if (decohere) {
    meterbench::write_decohere_csv(os, result);
  } else {
    meterbench::write_resolve_csv(os, result);
  }
  return os.str();
}

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 1;
};

SeedRange parse_seed_range(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) {
    throw meterbench::ParseError("--random expects A..B, got '" + text + "'");
  }
  try {
    SeedRange range;
    range.first = std::stoull(text.substr(0, pos));
    range.last = std::stoull(text.substr(pos + 2));
    if (range.last < range.first) throw meterbench::ParseError("--random: empty range " + text);
    return range;
  } catch (const std::invalid_argument&) {
    throw meterbench::ParseError("--random expects integers A..B, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw meterbench::ParseError("--random: seed out of range in '" + text + "'");
  }
}

std::pair<meterbench::Index, meterbench::Index> parse_dims(const std::string& text) {
  const auto pos = text.find('x');
  if (pos == std::string::npos) {
    throw meterbench::ParseError("--dims expects NxM, got '" + text + "'");
  }
  try {
    return {static_cast<meterbench::Index>(std::stoll(text.substr(0, pos))),
            static_cast<meterbench::Index>(std::stoll(text.substr(pos + 1)))};
  } catch (const std::exception&) {
    throw meterbench::ParseError("--dims expects integers NxM, got '" + text + "'");
  }
}

struct BoundsRow {
  std::string name;
  double fisher;
  double qfi_bound;
  bool qcrb_pass;
  double min_d_minus_r;
  bool d_geq_r_pass;
  double delta_a_minus_c_a;
  bool da_ca_pass;
  bool vacuous;

  bool all_pass() const { return qcrb_pass && d_geq_r_pass && da_ca_pass; }
};

BoundsRow audit_one(const std::string& name, const meterbench::MeasurementScenario<double>& sc,
                    const meterbench::ReadoutPOVM<double>& povm, double phi_B,
                    const meterbench::RealVector<double>& offsets) {
  const auto tol = meterbench::Tolerances<double>::active();
  const auto sens = meterbench::sensitivity_report(sc, povm, phi_B, tol);
  const auto trade = meterbench::tradeoff_report(sc, povm, phi_B, offsets, tol);
  BoundsRow row;
  row.name = name;
  row.fisher = sens.fisher;
  row.qfi_bound = sens.qfi_bound;
  row.qcrb_pass = sens.bound_satisfied;
  row.min_d_minus_r = trade.min_d_minus_r;
  row.d_geq_r_pass = trade.d_geq_r_satisfied;
  row.delta_a_minus_c_a = trade.delta_a_minus_c_a;
  row.da_ca_pass = trade.resolution_bound_satisfied;
  row.vacuous = trade.vacuous;
  return row;
}

std::string render_bounds(const std::vector<BoundsRow>& rows) {
  std::ostringstream os;
  os << "scenario,qcrb_pass,fisher,qfi_bound,d_geq_r_pass,min_d_minus_r,da_ca_pass,"
        "delta_a_minus_c_a,vacuous,all_pass\n";
  for (const auto& row : rows) {
    os << row.name << "," << meterbench::format_bool(row.qcrb_pass) << ","
       << meterbench::format_sci(row.fisher) << "," << meterbench::format_sci(row.qfi_bound) << ","
       << meterbench::format_bool(row.d_geq_r_pass) << ","
       << meterbench::format_sci(row.min_d_minus_r) << ","
       << meterbench::format_bool(row.da_ca_pass) << ","
       << meterbench::format_sci(row.delta_a_minus_c_a) << ","
       << meterbench::format_bool(row.vacuous) << "," << meterbench::format_bool(row.all_pass())
       << "\n";
  }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{
      "meterbench: system-meter measurement interaction sweeps, sensitivity and "
      "back-action bound audits"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, format = "csv", random_range, dims_text = "3x4";
  bool log_eps = false;

  auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--log-eps", log_eps, "log-spaced offset grid (requires eps_min > 0)");
  };
  CLI::App* resolve = app.add_subcommand("resolve", "Hellinger resolution sweep R(eps)");
  add_sweep_options(resolve);
  CLI::App* decohere =
      app.add_subcommand("decohere", "decoherence sweep D(eps) and decoherence-free distance");
  add_sweep_options(decohere);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "audit F <= 4(dB/hbar)^2, D >= R and delta_A >= C_A; exit 1 on violation");
  bounds->add_option("scenario", scenario_path, "scenario file");
  bounds->add_option("--out", out_path, "output path (default: stdout)");
  bounds->add_option("--random", random_range, "audit random scenarios with seeds A..B");
  bounds->add_option("--dims", dims_text, "system x meter dimensions for --random (default 3x4)");

  CLI::App* plot = app.add_subcommand("plot", "render a sweep result (JSON) as an SVG chart");
  plot->add_option("sweep", scenario_path, "sweep result file written by resolve/decohere --format json")
      ->required();
  plot->add_option("--out", out_path, "output SVG path (default: input with .svg suffix)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (resolve->parsed() || decohere->parsed()) {
      const meterbench::LoadedScenario loaded = meterbench::load_scenario(scenario_path);
      const meterbench::SweepResult result = meterbench::run_sweep(loaded, log_eps);
      write_text(out_path, render_sweep(result, format, decohere->parsed()));
      return kExitOk;
    }
    if (bounds->parsed()) {
      std::vector<BoundsRow> rows;
      if (!random_range.empty()) {
        const SeedRange seeds = parse_seed_range(random_range);
        const auto [ds, dm] = parse_dims(dims_text);
        for (std::uint64_t seed = seeds.first; seed <= seeds.last; ++seed) {
          const auto random = meterbench::make_random_scenario<double>(seed, ds, dm);
          // Probe offsets on the meter's own decoherence scale hbar/dB.
          const auto moments = meterbench::mean_and_variance(random.scenario.meter.generator,
                                                             random.scenario.meter.initial_state);
          const double scale = moments.variance > 0
                                   ? random.scenario.hbar() / std::sqrt(moments.variance)
                                   : 1.0;
          meterbench::RealVector<double> offsets(61);
          for (meterbench::Index i = 0; i < offsets.size(); ++i) {
            offsets(i) = 6.0 * scale * double(i) / double(offsets.size() - 1);
          }
          rows.push_back(audit_one("seed" + std::to_string(seed), random.scenario, random.readout,
                                   0.0, offsets));
        }
      } else if (!scenario_path.empty()) {
        const meterbench::LoadedScenario loaded = meterbench::load_scenario(scenario_path);
        rows.push_back(audit_one(loaded.name, loaded.scenario, loaded.readout,
                                 loaded.sweep.phi_B, loaded.sweep.offsets()));
      } else {
        throw meterbench::ParseError("bounds: provide a scenario file or --random A..B");
      }
      write_text(out_path, render_bounds(rows));
      bool all_pass = true;
      for (const auto& row : rows) all_pass = all_pass && row.all_pass();
      return all_pass ? kExitOk : kExitBoundViolation;
    }
    if (plot->parsed()) {
      std::ifstream in(scenario_path);
      if (!in) throw meterbench::ParseError("cannot open sweep result: " + scenario_path);
      nlohmann::json root;
      try {
        root = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw meterbench::ParseError(scenario_path + ": " + e.what());
      }
      const meterbench::SweepResult result = meterbench::sweep_from_json(root);
      std::ostringstream os;
      meterbench::write_sweep_svg(os, result);
      std::string path = out_path;
      if (path.empty()) {
        path = scenario_path;
        const auto dot = path.find_last_of('.');
        path = (dot == std::string::npos ? path : path.substr(0, dot)) + ".svg";
      }
      write_text(path, os.str());
      return kExitOk;
    }
  } catch (const meterbench::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const meterbench::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
