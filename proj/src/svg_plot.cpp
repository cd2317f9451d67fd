// Copyright 2026 The esc-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "esclab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "esclab/csv.hpp"

namespace esclab {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  Vector x;
  Vector y;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * (1.0 + std::abs(lo))) {
      const double pad = 0.5 * (1.0 + std::abs(lo));
      lo -= pad;
      hi += pad;
    }
  }
};

// 1-2-5 step giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return mag * (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0);
}

}  // namespace

void emit_plot(const std::vector<std::filesystem::path>& csv_paths, const std::vector<std::string>& columns,
               const std::filesystem::path& out_path, const PlotOptions& options) {
  if (csv_paths.empty()) throw PlotError("emit_plot: no CSV files given");
  if (columns.empty()) throw PlotError("emit_plot: no columns selected");

  std::vector<Series> series;
  Range xr, yr;
  for (const auto& path : csv_paths) {
    const CsvTable table = read_csv(path);
    const long xc = table.column(options.x_column);
    if (xc < 0) throw PlotError(path.string() + ": unknown column '" + options.x_column + "'");
    for (const auto& name : columns) {
      const long yc = table.column(name);
      if (yc < 0) throw PlotError(path.string() + ": unknown column '" + name + "'");
      Series s;
      s.label = csv_paths.size() > 1 ? path.stem().string() + ":" + name : name;
      const std::size_t rows = table.rows.size();
      const std::size_t stride =
          options.max_points > 1 && rows > options.max_points ? (rows + options.max_points - 2) / (options.max_points - 1) : 1;
      for (std::size_t r = 0; r < rows; r += stride) {
        s.x.push_back(table.rows[r][xc]);
        s.y.push_back(table.rows[r][yc]);
      }
      if (rows > 0 && (rows - 1) % stride != 0) {
        s.x.push_back(table.rows.back()[xc]);
        s.y.push_back(table.rows.back()[yc]);
      }
      for (double v : s.x) xr.add(v);
      for (double v : s.y) yr.add(v);
      series.push_back(std::move(s));
    }
  }
  xr.finish();
  yr.finish();

  const double W = options.width, H = options.height;
  const double left = 70, right = 180, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) +
         " " + std::to_string(options.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + escape(options.title) + "</text>\n";
  }

  // Axes and ticks.
  svg += "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", top) + "\" width=\"" + fmt("%.1f", pw) +
         "\" height=\"" + fmt("%.1f", ph) + "\"/>\n</g>\n";
  svg += "<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  const double xs = nice_step(xr.hi - xr.lo, 8), ys = nice_step(yr.hi - yr.lo, 6);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
    const double x = px(v);
    svg += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", top + ph) + "\" x2=\"" + fmt("%.2f", x) +
           "\" y2=\"" + fmt("%.2f", top + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", top + ph + 18) + "\" text-anchor=\"middle\">" +
           fmt("%g", std::abs(v) < 1e-12 * xs ? 0.0 : v) + "</text>\n";
  }
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
    const double y = py(v);
    svg += "<line x1=\"" + fmt("%.2f", left - 5) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", left) +
           "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", left - 8) + "\" y=\"" + fmt("%.2f", y + 4) + "\" text-anchor=\"end\">" +
           fmt("%g", std::abs(v) < 1e-12 * ys ? 0.0 : v) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"" + fmt("%.1f", H - 12) +
         "\" text-anchor=\"middle\">" + escape(options.x_column) + "</text>\n</g>\n";

  // Data.
  svg += "<g id=\"data\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    svg += "<polyline stroke=\"" + std::string(kPalette[i % std::size(kPalette)]) + "\" points=\"";
    bool first = true;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      if (!first) svg += ' ';
      first = false;
      svg += fmt("%.2f", px(s.x[j])) + "," + fmt("%.2f", py(s.y[j]));
    }
    svg += "\"/>\n";
  }
  svg += "</g>\n";

  // Legend.
  svg += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = top + 10 + 18.0 * static_cast<double>(i);
    const double x = left + pw + 12;
    svg += "<line x1=\"" + fmt("%.1f", x) + "\" y1=\"" + fmt("%.1f", y) + "\" x2=\"" + fmt("%.1f", x + 20) +
           "\" y2=\"" + fmt("%.1f", y) + "\" stroke=\"" + kPalette[i % std::size(kPalette)] +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", x + 26) + "\" y=\"" + fmt("%.1f", y + 4) + "\">" + escape(series[i].label) +
           "</text>\n";
  }
  svg += "</g>\n</svg>\n";

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + out_path.string() + "'");
  out << svg;
  if (!out) throw Error("write failed for '" + out_path.string() + "'");
}

}  // namespace esclab
