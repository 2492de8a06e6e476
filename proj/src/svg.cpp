#include "nlz/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace nlz {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

void write_svg_chart(const std::filesystem::path& path, std::vector<SvgSeries> series,
                     const SvgChartOptions& opt) {
  // Transform and collect bounds.
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (auto& s : series) {
    std::vector<std::pair<double, double>> kept;
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (opt.log_x) {
        if (x <= 0.0) continue;
        x = std::log10(x);
      }
      kept.emplace_back(x, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    s.points = std::move(kept);
  }
  if (!(xmin < xmax)) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (!(ymin < ymax)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double ml = 64, mr = 16, mt = 34, mb = 46;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<style>text{font-family:sans-serif;font-size:12px;}</style>\n";
  if (!opt.title.empty())
    out << "<text x=\"" << opt.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << opt.title << "</text>\n";

  // Frame and ticks.
  out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    out << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(px(fx))
        << "\" y2=\"" << num(mt + ph + 4) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << (opt.log_x ? "1e" + num(fx) : num(fx)) << "</text>\n"
        << "<line x1=\"" << num(ml - 4) << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(fy) + 4)
        << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
  }
  if (!opt.x_label.empty())
    out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(opt.height - 8)
        << "\" text-anchor=\"middle\">" << opt.x_label << "</text>\n";
  if (!opt.y_label.empty())
    out << "<text x=\"14\" y=\"" << num(mt + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << num(mt + ph / 2) << ")\">" << opt.y_label << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.points.empty()) continue;
    const std::string color =
        s.color.empty() ? kPalette[i % (sizeof kPalette / sizeof *kPalette)] : s.color;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
    for (auto [x, y] : s.points) out << num(px(x)) << ',' << num(py(y)) << ' ';
    out << "\"/>\n";
    if (!s.label.empty())
      out << "<text x=\"" << num(ml + pw - 8) << "\" y=\"" << num(mt + 16 + 14.0 * i)
          << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace nlz
