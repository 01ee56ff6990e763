#ifndef DSW_IO_HPP
#define DSW_IO_HPP

#include <string>
#include <vector>

namespace dsw::io {

// Numbers are serialized with 17 significant digits so CSV/JSON round-trip
// losslessly and identical invocations produce identical bytes.
std::string fmt(double v);

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(const std::vector<double>& r) { rows.push_back(r); }
  void write(const std::string& path) const;
};

Csv read_csv(const std::string& path);

// Minimal SVG line plot: each y-column against the x-column, polyline per
// series, axes and a small legend.
void write_svg_plot(const std::string& path, const Csv& data, size_t x_col,
                    const std::vector<size_t>& y_cols, int width = 900, int height = 560);

}  // namespace dsw::io

#endif
