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

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include <json.hpp>

#include "meterbench/backaction.hpp"
#include "meterbench/scenario_io.hpp"
#include "meterbench/scenarios.hpp"
#include "meterbench/sensitivity.hpp"
#include "meterbench/types.hpp"

namespace meterbench {

/// Scalar block attached to a sweep: the sensitivity report, the trade-off
/// report, and the two resolution diagnostics mirroring the Taylor estimate.
struct SweepScalars {
  double fisher = 0;
  double second_derivative = 0;
  double delta_epsilon = 0;
  double sensitivity = 0;
  double qfi_bound = 0;
  bool qcrb_satisfied = false;
  double delta_b = 0;
  double delta_a = 0;
  double c_a_closed = 0;
  double c_a_numeric = 0;
  bool d_geq_r_satisfied = false;
  bool resolution_bound_satisfied = false;
  double min_d_minus_r = 0;
  double delta_a_minus_c_a = 0;
  bool vacuous = false;
  double r_at_delta_epsilon = std::numeric_limits<double>::quiet_NaN();
  double eps_at_one_eighth = std::numeric_limits<double>::quiet_NaN();
};

/// A full sweep over the scenario's offset grid: resolution and decoherence
/// columns (plus the qubit closed forms when applicable) and the scalar block.
struct SweepResult {
  std::string scenario_name;
  RealVector<double> offsets;
  RealVector<double> r_values;
  RealVector<double> d_values;
  RealVector<double> chi_abs;
  std::optional<RealVector<double>> r_oracle;
  std::optional<RealVector<double>> d_oracle;
  SweepScalars scalars;
};

inline SweepResult run_sweep(const LoadedScenario& loaded, bool log_spaced = false,
                             const Tolerances<double>& tol = Tolerances<double>::active()) {
  const RealVector<double> offsets = loaded.sweep.offsets(log_spaced);
  const MeasurementScenario<double>& sc = loaded.scenario;

  SweepResult result;
  result.scenario_name = loaded.name;
  result.offsets = offsets;
  result.r_values =
      resolution_curve(sc.meter, loaded.readout, loaded.sweep.phi_B, offsets).values;
  const DecoherenceCurve<double> d_curve = decoherence_curve(sc.meter, offsets);
  result.d_values = d_curve.values;
  const CharacteristicFunction<double> chi(sc.meter);
  result.chi_abs.resize(offsets.size());
  for (Index i = 0; i < offsets.size(); ++i) result.chi_abs(i) = std::abs(chi(offsets(i)));
  if (loaded.qubit_meter) {
    RealVector<double> r_oracle(offsets.size()), d_oracle(offsets.size());
    for (Index i = 0; i < offsets.size(); ++i) {
      r_oracle(i) = qubit_resolution_oracle(offsets(i));
      d_oracle(i) = qubit_decoherence_oracle(offsets(i));
    }
    result.r_oracle = std::move(r_oracle);
    result.d_oracle = std::move(d_oracle);
  }

  const SensitivityReport<double> sens = sensitivity_report(sc, loaded.readout, loaded.sweep.phi_B, tol);
  const TradeoffReport<double> trade =
      tradeoff_report(sc, loaded.readout, loaded.sweep.phi_B, offsets, tol);
  SweepScalars& s = result.scalars;
  s.fisher = sens.fisher;
  s.second_derivative = sens.second_derivative;
  s.delta_epsilon = sens.delta_epsilon;
  s.sensitivity = sens.sensitivity;
  s.qfi_bound = sens.qfi_bound;
  s.qcrb_satisfied = sens.bound_satisfied;
  s.delta_b = std::sqrt(mean_and_variance(sc.meter.generator, sc.meter.initial_state).variance);
  s.delta_a = sens.delta_a;
  s.c_a_closed = trade.c_a_closed;
  s.c_a_numeric = trade.c_a_numeric;
  s.d_geq_r_satisfied = trade.d_geq_r_satisfied;
  s.resolution_bound_satisfied = trade.resolution_bound_satisfied;
  s.min_d_minus_r = trade.min_d_minus_r;
  s.delta_a_minus_c_a = trade.delta_a_minus_c_a;
  s.vacuous = trade.vacuous;
  if (!sens.no_sensitivity()) {
    s.r_at_delta_epsilon =
        hellinger_resolution(sc.meter, loaded.readout, loaded.sweep.phi_B, sens.delta_epsilon, tol);
    try {
      s.eps_at_one_eighth = resolution_crossing(sc.meter, loaded.readout, loaded.sweep.phi_B);
    } catch (const NoSensitivity&) {
      // R never reaches 1/8 (periodic meters with weak readouts); leave NaN.
    }
  }
  return result;
}

/// Fixed 12-significant-digit scientific formatting used for all data files.
inline std::string format_sci(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

namespace sweep_detail {

inline void scalar_line(std::ostream& out, const char* key, const std::string& value) {
  out << "# " << key << " = " << value << "\n";
}

}  // namespace sweep_detail

/// Resolution table: `# key = value` scalar preamble, header row, data rows.
inline void write_resolve_csv(std::ostream& out, const SweepResult& r) {
  using sweep_detail::scalar_line;
  const SweepScalars& s = r.scalars;
  scalar_line(out, "scenario", r.scenario_name);
  scalar_line(out, "fisher", format_sci(s.fisher));
  scalar_line(out, "second_derivative", format_sci(s.second_derivative));
  scalar_line(out, "delta_epsilon", format_sci(s.delta_epsilon));
  scalar_line(out, "sensitivity", format_sci(s.sensitivity));
  scalar_line(out, "qfi_bound", format_sci(s.qfi_bound));
  scalar_line(out, "qcrb_satisfied", format_bool(s.qcrb_satisfied));
  scalar_line(out, "delta_b", format_sci(s.delta_b));
  scalar_line(out, "delta_a", format_sci(s.delta_a));
  scalar_line(out, "r_at_delta_epsilon", format_sci(s.r_at_delta_epsilon));
  scalar_line(out, "eps_at_one_eighth", format_sci(s.eps_at_one_eighth));
  out << "eps,R" << (r.r_oracle ? ",R_qubit_oracle" : "") << "\n";
  for (Index i = 0; i < r.offsets.size(); ++i) {
    out << format_sci(r.offsets(i)) << "," << format_sci(r.r_values(i));
    if (r.r_oracle) out << "," << format_sci((*r.r_oracle)(i));
    out << "\n";
  }
}

/// Decoherence table: C_A by both routes, |chi| and D columns.
inline void write_decohere_csv(std::ostream& out, const SweepResult& r) {
  using sweep_detail::scalar_line;
  const SweepScalars& s = r.scalars;
  scalar_line(out, "scenario", r.scenario_name);
  scalar_line(out, "delta_b", format_sci(s.delta_b));
  scalar_line(out, "c_a_closed", format_sci(s.c_a_closed));
  scalar_line(out, "c_a_numeric", format_sci(s.c_a_numeric));
  scalar_line(out, "delta_a", format_sci(s.delta_a));
  scalar_line(out, "min_d_minus_r", format_sci(s.min_d_minus_r));
  scalar_line(out, "delta_a_minus_c_a", format_sci(s.delta_a_minus_c_a));
  scalar_line(out, "d_geq_r_satisfied", format_bool(s.d_geq_r_satisfied));
  scalar_line(out, "resolution_bound_satisfied", format_bool(s.resolution_bound_satisfied));
  out << "eps,abs_chi,D" << (r.d_oracle ? ",D_qubit_oracle" : "") << "\n";
  for (Index i = 0; i < r.offsets.size(); ++i) {
    out << format_sci(r.offsets(i)) << "," << format_sci(r.chi_abs(i)) << ","
        << format_sci(r.d_values(i));
    if (r.d_oracle) out << "," << format_sci((*r.d_oracle)(i));
    out << "\n";
  }
}

namespace sweep_detail {

inline nlohmann::json vector_to_json(const RealVector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline RealVector<double> vector_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  RealVector<double> v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_number()) {
      v(Index(i)) = j[i].get<double>();
    } else if (j[i].is_null()) {
      v(Index(i)) = std::numeric_limits<double>::quiet_NaN();
    } else {
      throw ParseError(path + "[" + std::to_string(i) + "]: expected a number");
    }
  }
  return v;
}

}  // namespace sweep_detail

/// JSON envelope carrying the full sweep (both columns and the scalar block).
/// This is the interchange format consumed by the plot command. Non-finite
/// scalars serialize as null.
inline nlohmann::json sweep_to_json(const SweepResult& r) {
  using sweep_detail::vector_to_json;
  nlohmann::json scalars;
  const SweepScalars& s = r.scalars;
  scalars["fisher"] = s.fisher;
  scalars["second_derivative"] = s.second_derivative;
  scalars["delta_epsilon"] = s.delta_epsilon;
  scalars["sensitivity"] = s.sensitivity;
  scalars["qfi_bound"] = s.qfi_bound;
  scalars["qcrb_satisfied"] = s.qcrb_satisfied;
  scalars["delta_b"] = s.delta_b;
  scalars["delta_a"] = s.delta_a;
  scalars["c_a_closed"] = s.c_a_closed;
  scalars["c_a_numeric"] = s.c_a_numeric;
  scalars["d_geq_r_satisfied"] = s.d_geq_r_satisfied;
  scalars["resolution_bound_satisfied"] = s.resolution_bound_satisfied;
  scalars["min_d_minus_r"] = s.min_d_minus_r;
  scalars["delta_a_minus_c_a"] = s.delta_a_minus_c_a;
  scalars["vacuous"] = s.vacuous;
  scalars["r_at_delta_epsilon"] = s.r_at_delta_epsilon;
  scalars["eps_at_one_eighth"] = s.eps_at_one_eighth;

  nlohmann::json table;
  table["eps"] = vector_to_json(r.offsets);
  table["R"] = vector_to_json(r.r_values);
  table["D"] = vector_to_json(r.d_values);
  table["abs_chi"] = vector_to_json(r.chi_abs);
  if (r.r_oracle) table["R_qubit_oracle"] = vector_to_json(*r.r_oracle);
  if (r.d_oracle) table["D_qubit_oracle"] = vector_to_json(*r.d_oracle);

  nlohmann::json root;
  root["scenario"] = r.scenario_name;
  root["scalars"] = scalars;
  root["table"] = table;
  return root;
}

/// Parses the JSON envelope back into a SweepResult (scalars are optional so
/// the plot command accepts reduced envelopes).
inline SweepResult sweep_from_json(const nlohmann::json& root) {
  using sweep_detail::vector_from_json;
  if (!root.is_object() || !root.contains("table")) {
    throw ParseError("sweep result: missing 'table' object");
  }
  const nlohmann::json& table = root["table"];
  SweepResult r;
  r.scenario_name = root.contains("scenario") && root["scenario"].is_string()
                        ? root["scenario"].get<std::string>()
                        : "sweep";
  if (!table.contains("eps")) throw ParseError("sweep result: missing table.eps");
  r.offsets = vector_from_json(table["eps"], "table.eps");
  if (r.offsets.size() == 0) throw ParseError("sweep result: empty offset grid");
  const auto column = [&](const char* key) {
    if (!table.contains(key)) throw ParseError(std::string("sweep result: missing table.") + key);
    RealVector<double> v = vector_from_json(table[key], std::string("table.") + key);
    if (v.size() != r.offsets.size()) {
      throw ParseError(std::string("sweep result: table.") + key + " length mismatch");
    }
    return v;
  };
  r.r_values = column("R");
  r.d_values = column("D");
  if (table.contains("abs_chi")) {
    r.chi_abs = column("abs_chi");
  } else {
    r.chi_abs = RealVector<double>::Ones(r.offsets.size()) - r.d_values;
  }
  if (table.contains("R_qubit_oracle")) r.r_oracle = column("R_qubit_oracle");
  if (table.contains("D_qubit_oracle")) r.d_oracle = column("D_qubit_oracle");
  return r;
}

}  // namespace meterbench
