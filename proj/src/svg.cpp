#include "peskin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "peskin/errors.hpp"
#include "peskin/io.hpp"

namespace peskin {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts) {
  if (series.empty()) throw InputError("render_svg: no series");
  auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    if (s.t.size() < 2 || s.t.size() != s.value.size()) {
      throw InputError("render_svg: series '" + s.name + "' needs at least two (t, value) points");
    }
    for (size_t i = 0; i < s.t.size(); ++i) {
      if ((opts.log_x && !(s.t[i] > 0.0)) || (opts.log_y && !(s.value[i] > 0.0))) {
        throw InputError("render_svg: non-positive value on a log axis in '" + s.name + "'");
      }
      x0 = std::min(x0, tx(s.t[i]));
      x1 = std::max(x1, tx(s.t[i]));
      y0 = std::min(y0, ty(s.value[i]));
      y1 = std::max(y1, ty(s.value[i]));
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    y0 -= 0.5 * std::max(1.0, std::abs(y0));
    y1 += 0.5 * std::max(1.0, std::abs(y1));
  }
  const double left = 70, right = 20, top = 30, bottom = 40;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    svg << "<text x=\"" << num(left) << "\" y=\"18\" font-size=\"13\">" << opts.title << "</text>\n";
  }
  svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = left + pw * i / 4.0;
    const double sy = top + ph - ph * i / 4.0;
    svg << "<text x=\"" << num(sx) << "\" y=\"" << num(top + ph + 15) << "\" text-anchor=\"middle\">"
        << label(opts.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
    svg << "<text x=\"" << num(left - 5) << "\" y=\"" << num(sy + 4) << "\" text-anchor=\"end\">"
        << label(opts.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % (sizeof kColors / sizeof kColors[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.t.size(); ++i) svg << (i ? " " : "") << num(px(s.t[i])) << "," << num(py(s.value[i]));
    svg << "\"/>\n";
    svg << "<text x=\"" << num(left + pw - 5) << "\" y=\"" << num(top + 15 + 14 * k) << "\" text-anchor=\"end\" fill=\""
        << color << "\">" << s.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_svg(const std::vector<Series>& series, const std::string& path, const PlotOptions& opts) {
  write_text(path, render_svg(series, opts));
}

}  // namespace peskin
