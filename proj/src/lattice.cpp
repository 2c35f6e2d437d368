#include "cornerlab/lattice.hpp"

namespace cornerlab {

std::string to_string(Site s) {
  return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
}

LatticeWindow::LatticeWindow(Site origin, std::int64_t width, std::int64_t height)
    : origin_(origin), width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("window dimensions must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

LatticeWindow LatticeWindow::spanning(Site lower_left, Site upper_right) {
  return LatticeWindow(lower_left, upper_right.x - lower_left.x + 1,
                       upper_right.y - lower_left.y + 1);
}

}  // namespace cornerlab
