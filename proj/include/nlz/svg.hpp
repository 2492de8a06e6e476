// Minimal self-contained SVG line charts for quick inspection of the CSV
// datasets. Rendering is a convenience; the CSV files are the deliverable.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nlz {

struct SvgSeries {
  std::vector<std::pair<double, double>> points;
  std::string label;
  std::string color;  // empty: assigned from a fixed palette
};

struct SvgChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;  // nonpositive x values are dropped
  int width = 760;
  int height = 480;
};

void write_svg_chart(const std::filesystem::path& path, std::vector<SvgSeries> series,
                     const SvgChartOptions& opt);

}  // namespace nlz
