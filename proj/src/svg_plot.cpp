// Copyright 2026 The dilqr Authors
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

#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace dilqr::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf", "#393b79", "#637939"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render(const Plot& plot, int width, int height) {
  const double left = 70, right = 150, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  auto ty = [&](double v) { return plot.log_y ? std::log10(std::max(v, 1e-300)) : v; };

  Range xr, yr;
  for (const auto& s : plot.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) {
      if (!plot.log_y || v > 0.0) yr.add(ty(v));
    }
  }
  for (double h : plot.hlines) yr.add(ty(h));
  xr.pad();
  yr.pad();
  if (plot.log_y) {
    yr.lo = std::floor(yr.lo);
    yr.hi = std::ceil(yr.hi);
    if (yr.hi <= yr.lo) yr.hi = yr.lo + 1;
  }
  if (plot.equal_aspect) {
    const double sx = (xr.hi - xr.lo) / pw, sy = (yr.hi - yr.lo) / ph;
    const double s = std::max(sx, sy);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr.lo = cx - 0.5 * s * pw, xr.hi = cx + 0.5 * s * pw;
    yr.lo = cy - 0.5 * s * ph, yr.hi = cy + 0.5 * s * ph;
  }
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - yr.lo) / (yr.hi - yr.lo) * ph; };
  auto py_raw = [&](double t) { return top + ph - (t - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-size=\"15\">" << escape(plot.title) << "</text>\n";

  // Ticks and grid.
  const int ticks = 5;
  for (int k = 0; k <= ticks; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / ticks;
    os << "<line x1=\"" << px(xv) << "\" y1=\"" << top << "\" x2=\"" << px(xv)
       << "\" y2=\"" << top + ph << "\" stroke=\"#eee\"/>\n";
    os << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 16
       << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
  }
  if (plot.log_y) {
    for (int e = static_cast<int>(yr.lo); e <= static_cast<int>(yr.hi); ++e) {
      os << "<line x1=\"" << left << "\" y1=\"" << py_raw(e) << "\" x2=\"" << left + pw
         << "\" y2=\"" << py_raw(e) << "\" stroke=\"#eee\"/>\n";
      os << "<text x=\"" << left - 6 << "\" y=\"" << py_raw(e) + 4
         << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
  } else {
    for (int k = 0; k <= ticks; ++k) {
      const double yv = yr.lo + (yr.hi - yr.lo) * k / ticks;
      os << "<line x1=\"" << left << "\" y1=\"" << py_raw(yv) << "\" x2=\"" << left + pw
         << "\" y2=\"" << py_raw(yv) << "\" stroke=\"#eee\"/>\n";
      os << "<text x=\"" << left - 6 << "\" y=\"" << py_raw(yv) + 4
         << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
     << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label)
     << (plot.log_y ? " (log scale)" : "") << "</text>\n";

  for (double h : plot.hlines) {
    os << "<line x1=\"" << left << "\" y1=\"" << py(h) << "\" x2=\"" << left + pw
       << "\" y2=\"" << py(h) << "\" stroke=\"#999\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const Series& s = plot.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (s.dashed) os << " stroke-dasharray=\"4,3\"";
    os << " points=\"";
    for (std::size_t n = 0; n < s.x.size() && n < s.y.size(); ++n) {
      if (plot.log_y && !(s.y[n] > 0.0)) continue;
      os << px(s.x[n]) << ',' << py(s.y[n]) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14 + 16.0 * k;
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << left + pw + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dilqr::svg
