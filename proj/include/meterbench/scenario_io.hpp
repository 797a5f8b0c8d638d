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
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "meterbench/interaction.hpp"
#include "meterbench/scenarios.hpp"
#include "meterbench/sensitivity.hpp"
#include "meterbench/types.hpp"

namespace meterbench {

/// Offset grid and base parameter attached to a scenario file.
struct SweepSettings {
  double phi_B = 0.0;
  double eps_min = 0.0;
  double eps_max = 1.0;
  Index steps = 2;

  /// Inclusive uniform grid; log-spaced when requested (requires eps_min > 0).
  RealVector<double> offsets(bool log_spaced = false) const {
    RealVector<double> out(steps);
    if (log_spaced) {
      if (!(eps_min > 0.0)) {
        throw ValidationError("sweep: log-spaced grid requires eps_min > 0");
      }
      const double ratio = std::log(eps_max / eps_min);
      for (Index i = 0; i < steps; ++i) {
        out(i) = eps_min * std::exp(ratio * double(i) / double(steps - 1));
      }
      return out;
    }
    for (Index i = 0; i < steps; ++i) {
      out(i) = eps_min + (eps_max - eps_min) * double(i) / double(steps - 1);
    }
    return out;
  }
};

/// Everything a scenario file describes, fully validated.
struct LoadedScenario {
  std::string name;
  MeasurementScenario<double> scenario;
  ReadoutPOVM<double> readout;
  SweepSettings sweep;
  bool qubit_meter = false;  // built from the qubit constructor (enables oracle columns)
};

namespace io_detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path + ": missing key '" + key + "'");
  return *it;
}

inline double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": expected a number");
  return j.get<double>();
}

inline Index as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ValidationError(path + ": expected a nonnegative integer");
  }
  return j.get<Index>();
}

inline Complex<double> as_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw ValidationError(path + ": expected a two-element [re, im] array");
  }
  return {as_real(j[0], path + "[0]"), as_real(j[1], path + "[1]")};
}

inline ComplexVector<double> as_cvector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ValidationError(path + ": expected a nonempty array");
  ComplexVector<double> v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(Index(i)) = as_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline ComplexMatrix<double> as_cmatrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ValidationError(path + ": expected a nonempty array");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  ComplexMatrix<double> m;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) throw ValidationError(row_path + ": expected a row array");
    if (i == 0) {
      cols = row.size();
      m.resize(Index(rows), Index(cols));
    } else if (row.size() != cols) {
      throw ValidationError(row_path + ": ragged row (" + std::to_string(row.size()) + " vs " +
                            std::to_string(cols) + " entries)");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(Index(i), Index(k)) = as_complex(row[k], row_path + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

// Names the worst-offending (i, j) pair so file errors are actionable.
inline void check_hermitian_field(const ComplexMatrix<double>& m, const std::string& path,
                                  double tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError(path + ": matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  double worst = 0.0;
  Index wi = 0, wj = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > tol) {
    throw ValidationError(path + ": not Hermitian, |M(" + std::to_string(wi) + "," +
                          std::to_string(wj) + ") - conj(M(" + std::to_string(wj) + "," +
                          std::to_string(wi) + "))| = " + std::to_string(worst));
  }
}

inline json complex_to_json(const Complex<double>& z) { return json::array({z.real(), z.imag()}); }

inline json cvector_to_json(const ComplexVector<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline json cmatrix_to_json(const ComplexMatrix<double>& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

}  // namespace io_detail

/// Parses and validates a scenario file. Diagnostics carry the field path of
/// the offending entry.
inline LoadedScenario load_scenario(const std::string& path,
                                    const Tolerances<double>& tol = Tolerances<double>::active()) {
  using io_detail::as_cmatrix;
  using io_detail::as_count;
  using io_detail::as_cvector;
  using io_detail::as_real;
  using io_detail::require;
  using nlohmann::json;

  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!root.is_object()) throw ValidationError(path + ": top level must be an object");

  const std::string name = [&] {
    const json& j = require(root, "name", "(top level)");
    if (!j.is_string()) throw ValidationError("name: expected a string");
    return j.get<std::string>();
  }();
  const double hbar = root.contains("hbar") ? as_real(root["hbar"], "hbar") : 1.0;
  if (!(hbar > 0.0)) throw ValidationError("hbar: must be positive");
  const double coupling = as_real(require(root, "coupling", "(top level)"), "coupling");
  if (coupling < 0.0) throw ValidationError("coupling: must be nonnegative");

  // System block.
  const json& jsystem = require(root, "system", "(top level)");
  ComplexMatrix<double> a_matrix =
      as_cmatrix(require(jsystem, "matrix", "system"), "system.matrix");
  io_detail::check_hermitian_field(a_matrix, "system.matrix", tol.herm);
  ComplexVector<double> psi = as_cvector(require(jsystem, "amplitudes", "system"),
                                         "system.amplitudes");
  if (psi.size() != a_matrix.rows()) {
    throw ValidationError("system.amplitudes: dim " + std::to_string(psi.size()) +
                          " vs system.matrix dim " + std::to_string(a_matrix.rows()));
  }

  // Meter block: qubit | pointer | explicit.
  const json& jmeter = require(root, "meter", "(top level)");
  std::optional<MeterSpec<double>> meter_spec;
  std::optional<ReadoutPOVM<double>> default_readout;
  bool qubit_meter = false;
  if (jmeter.contains("qubit")) {
    const json& q = jmeter["qubit"];
    const double alpha = q.contains("alpha") ? as_real(q["alpha"], "meter.qubit.alpha") : 0.0;
    auto built = make_qubit_meter<double>(alpha, hbar);
    meter_spec = std::move(built.meter);
    default_readout = std::move(built.readout);
    qubit_meter = true;
  } else if (jmeter.contains("pointer")) {
    const json& p = jmeter["pointer"];
    const Index dim = as_count(require(p, "dim", "meter.pointer"), "meter.pointer.dim");
    const double sigma_b =
        as_real(require(p, "sigma_b", "meter.pointer"), "meter.pointer.sigma_b");
    auto built = make_pointer_meter<double>(dim, sigma_b, hbar);
    meter_spec = std::move(built.meter);
    default_readout = std::move(built.readout);
  } else if (jmeter.contains("explicit")) {
    const json& e = jmeter["explicit"];
    ComplexMatrix<double> b_matrix =
        as_cmatrix(require(e, "matrix", "meter.explicit"), "meter.explicit.matrix");
    io_detail::check_hermitian_field(b_matrix, "meter.explicit.matrix", tol.herm);
    ComplexVector<double> phi = as_cvector(require(e, "amplitudes", "meter.explicit"),
                                           "meter.explicit.amplitudes");
    if (phi.size() != b_matrix.rows()) {
      throw ValidationError("meter.explicit.amplitudes: dim " + std::to_string(phi.size()) +
                            " vs meter.explicit.matrix dim " + std::to_string(b_matrix.rows()));
    }
    meter_spec = MeterSpec<double>(PureState<double>(std::move(phi), tol),
                                   HermitianObservable<double>(std::move(b_matrix), tol), hbar);
  } else {
    throw ValidationError("meter: expected one of 'qubit', 'pointer', 'explicit'");
  }

  // Readout block (optional for built-in meters, which carry a canonical one).
  std::optional<ReadoutPOVM<double>> readout;
  if (root.contains("readout")) {
    const json& jreadout = root["readout"];
    if (jreadout.contains("qubit_angle")) {
      if (meter_spec->dim() != 2) {
        throw ValidationError("readout.qubit_angle: meter dimension is " +
                              std::to_string(meter_spec->dim()) + ", expected 2");
      }
      const json& q = jreadout["qubit_angle"];
      const double alpha =
          q.contains("alpha") ? as_real(q["alpha"], "readout.qubit_angle.alpha") : 0.0;
      readout = make_qubit_meter<double>(alpha, hbar).readout;
    } else if (jreadout.contains("projective")) {
      ComplexMatrix<double> basis =
          as_cmatrix(require(jreadout["projective"], "basis", "readout.projective"),
                     "readout.projective.basis");
      readout = ReadoutPOVM<double>::projective(basis, {}, tol);
    } else if (jreadout.contains("povm")) {
      const json& jelems = require(jreadout["povm"], "elements", "readout.povm");
      if (!jelems.is_array() || jelems.empty()) {
        throw ValidationError("readout.povm.elements: expected a nonempty array");
      }
      std::vector<ComplexMatrix<double>> elements;
      for (std::size_t m = 0; m < jelems.size(); ++m) {
        elements.push_back(
            as_cmatrix(jelems[m], "readout.povm.elements[" + std::to_string(m) + "]"));
      }
      readout = ReadoutPOVM<double>(std::move(elements), {}, tol);
    } else {
      throw ValidationError("readout: expected one of 'qubit_angle', 'projective', 'povm'");
    }
  } else if (!default_readout.has_value()) {
    throw ValidationError("readout: required when the meter is given explicitly");
  }
  ReadoutPOVM<double> povm = readout.has_value() ? std::move(*readout)
                                                 : std::move(*default_readout);
  if (povm.dim() != meter_spec->dim()) {
    throw ValidationError("readout: dimension " + std::to_string(povm.dim()) +
                          " vs meter dimension " + std::to_string(meter_spec->dim()));
  }

  // Sweep block.
  const json& jsweep = require(root, "sweep", "(top level)");
  SweepSettings sweep;
  sweep.phi_B = as_real(require(jsweep, "phi_B", "sweep"), "sweep.phi_B");
  sweep.eps_min = as_real(require(jsweep, "eps_min", "sweep"), "sweep.eps_min");
  sweep.eps_max = as_real(require(jsweep, "eps_max", "sweep"), "sweep.eps_max");
  sweep.steps = as_count(require(jsweep, "steps", "sweep"), "sweep.steps");
  if (sweep.steps < 2) throw ValidationError("sweep.steps: must be at least 2");
  if (!(sweep.eps_min < sweep.eps_max)) {
    throw ValidationError("sweep: eps_min must be smaller than eps_max");
  }

  MeasurementScenario<double> scenario(
      HermitianObservable<double>(std::move(a_matrix), tol), PureState<double>(std::move(psi), tol),
      std::move(*meter_spec), coupling);
  return {name, std::move(scenario), std::move(povm), sweep, qubit_meter};
}

/// Serializes a scenario in the explicit form (meter matrices and POVM element
/// list written out), so loading the file back reconstructs identical objects.
inline void write_scenario(const std::string& path, const LoadedScenario& loaded) {
  using io_detail::cmatrix_to_json;
  using io_detail::cvector_to_json;
  using nlohmann::json;

  const MeasurementScenario<double>& sc = loaded.scenario;
  json root;
  root["name"] = loaded.name;
  root["hbar"] = sc.hbar();
  root["coupling"] = sc.coupling;
  root["system"] = {{"matrix", cmatrix_to_json(sc.system_observable.matrix())},
                    {"amplitudes", cvector_to_json(sc.system_state.amplitudes())}};
  root["meter"] = {{"explicit", {{"matrix", cmatrix_to_json(sc.meter.generator.matrix())},
                                 {"amplitudes", cvector_to_json(sc.meter.initial_state.amplitudes())}}}};
  json elements = json::array();
  for (Index m = 0; m < loaded.readout.size(); ++m) {
    elements.push_back(cmatrix_to_json(loaded.readout.element(m)));
  }
  root["readout"] = {{"povm", {{"elements", elements}}}};
  root["sweep"] = {{"phi_B", loaded.sweep.phi_B},
                   {"eps_min", loaded.sweep.eps_min},
                   {"eps_max", loaded.sweep.eps_max},
                   {"steps", loaded.sweep.steps}};

  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << root.dump(2) << "\n";
}

}  // namespace meterbench
