#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cornerlab/lattice.hpp"

namespace cornerlab {

/// Lattice-coordinate SVG canvas: one unit cell per site, y axis up.
class SvgCanvas {
 public:
  SvgCanvas(LatticeWindow window, double cell_px = 6.0);

  void cell(Site s, const std::string& fill);
  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                double width_px = 1.5);
  void write(std::ostream& os) const;

 private:
  std::pair<double, double> to_px(double x, double y) const;

  LatticeWindow window_;
  double cell_;
  std::vector<std::string> items_;
};

}  // namespace cornerlab
