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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "meterbench/sweep.hpp"
#include "meterbench/types.hpp"

namespace meterbench {

namespace svg_detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

inline std::string fmt_tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

// Largest 1/2/5-scaled step giving at most `max_ticks` intervals.
inline double nice_step(double range, int max_ticks) {
  const double raw = range / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) return mag * m;
  }
  return mag * 10.0;
}

}  // namespace svg_detail

/// Deterministic line chart of R(eps) and D(eps). Identical input bytes yield
/// identical output bytes: fixed canvas, fixed 2-decimal coordinates, no
/// timestamps or generator metadata.
inline void write_sweep_svg(std::ostream& out, const SweepResult& r) {
  using svg_detail::fmt;
  using svg_detail::fmt_tick;
  if (r.offsets.size() < 2) {
    throw ParseError("plot: need at least two sweep points");
  }

  const double width = 800, height = 500;
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  const double x_min = r.offsets.minCoeff();
  const double x_max = r.offsets.maxCoeff();
  if (!(x_max > x_min)) throw ParseError("plot: degenerate offset range");
  double y_max = std::max(r.r_values.maxCoeff(), r.d_values.maxCoeff());
  if (!std::isfinite(y_max)) throw ParseError("plot: non-finite curve values");
  y_max = std::max(y_max * 1.05, 1e-12);
  const double y_min = 0.0;

  const auto x_of = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto y_of = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << r.scenario_name << "</text>\n";

  // Frame and grid.
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(plot_w)
      << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double x_step = svg_detail::nice_step(x_max - x_min, 8);
  for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-12 * x_step; t += x_step) {
    const double px = x_of(t);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << fmt(top + plot_h) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(top + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << fmt_tick(t)
        << "</text>\n";
  }
  const double y_step = svg_detail::nice_step(y_max - y_min, 6);
  for (double t = 0.0; t <= y_max + 1e-12 * y_step; t += y_step) {
    const double py = y_of(t);
    out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(left + plot_w)
        << "\" y2=\"" << fmt(py) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fmt_tick(t)
        << "</text>\n";
  }
  out << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(height - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">parameter offset "
         "eps</text>\n";
  out << "<text x=\"18\" y=\"" << fmt(top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 18 "
      << fmt(top + plot_h / 2) << ")\">R, D</text>\n";

  const auto polyline = [&](const RealVector<double>& values, const char* color, const char* dash) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (dash[0] != '\0') out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"";
    for (Index i = 0; i < r.offsets.size(); ++i) {
      if (i > 0) out << " ";
      out << fmt(x_of(r.offsets(i))) << "," << fmt(y_of(values(i)));
    }
    out << "\"/>\n";
  };
  polyline(r.d_values, "#d62728", "");
  polyline(r.r_values, "#1f77b4", "6,4");

  // Legend.
  const double lx = left + 12, ly = top + 14;
  out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 30)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << fmt(lx + 36) << "\" y=\"" << fmt(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"13\">D(eps) decoherence</text>\n";
  out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly + 20) << "\" x2=\"" << fmt(lx + 30)
      << "\" y2=\"" << fmt(ly + 20)
      << "\" stroke=\"#1f77b4\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
  out << "<text x=\"" << fmt(lx + 36) << "\" y=\"" << fmt(ly + 24)
      << "\" font-family=\"sans-serif\" font-size=\"13\">R(eps) resolution</text>\n";

  out << "</svg>\n";
}

}  // namespace meterbench
