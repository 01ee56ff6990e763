#include "dsw/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dsw/errors.hpp"

namespace dsw::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Csv::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw SolverError("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << fmt(r[i]);
    out << "\n";
  }
}

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError("cannot open: " + path);
  Csv c;
  std::string line;
  if (!std::getline(in, line)) throw SolverError("empty csv: " + path);
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) c.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    c.rows.push_back(std::move(row));
  }
  return c;
}

void write_svg_plot(const std::string& path, const Csv& data, size_t x_col,
                    const std::vector<size_t>& y_cols, int width, int height) {
  if (data.rows.empty() || y_cols.empty()) throw SolverError("svg plot: no data");
  const int ml = 64, mr = 16, mt = 16, mb = 44;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : data.rows) {
    xmin = std::min(xmin, r[x_col]);
    xmax = std::max(xmax, r[x_col]);
    for (size_t c : y_cols) {
      if (!std::isfinite(r[c])) continue;
      ymin = std::min(ymin, r[c]);
      ymax = std::max(ymax, r[c]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ofstream out(path);
  if (!out) throw SolverError("cannot open for writing: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  // axes
  out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
      << height - mb << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
      << "' stroke='black'/>\n";
  for (int i = 0; i <= 5; ++i) {
    double xv = xmin + (xmax - xmin) * i / 5.0;
    double yv = ymin + (ymax - ymin) * i / 5.0;
    out << "<text x='" << px(xv) << "' y='" << height - mb + 18
        << "' font-size='11' text-anchor='middle'>" << fmt(std::round(xv * 1e4) / 1e4)
        << "</text>\n";
    out << "<text x='" << ml - 6 << "' y='" << py(yv) + 4
        << "' font-size='11' text-anchor='end'>" << fmt(std::round(yv * 1e4) / 1e4)
        << "</text>\n";
  }
  for (size_t s = 0; s < y_cols.size(); ++s) {
    out << "<polyline fill='none' stroke='" << colors[s % 8] << "' stroke-width='1' points='";
    for (const auto& r : data.rows) {
      if (!std::isfinite(r[y_cols[s]])) continue;
      out << px(r[x_col]) << "," << py(r[y_cols[s]]) << " ";
    }
    out << "'/>\n";
    out << "<text x='" << width - mr - 150 << "' y='" << mt + 16 + 16 * s
        << "' font-size='12' fill='" << colors[s % 8] << "'>"
        << (y_cols[s] < data.header.size() ? data.header[y_cols[s]] : "series") << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace dsw::io
