#pragma once

// Static line plots for quick inspection of a run. Decorative only.

#include <string>
#include <vector>

namespace peskin {

struct Series {
  std::string name;
  std::vector<double> t;
  std::vector<double> value;
};

struct PlotOptions {
  std::string title;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 400;
};

/// Self-contained SVG text. Throws InputError when a series has fewer than
/// two points or mismatched lengths, or on non-positive data on a log axis.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts = {});
void render_svg(const std::vector<Series>& series, const std::string& path, const PlotOptions& opts = {});

}  // namespace peskin
