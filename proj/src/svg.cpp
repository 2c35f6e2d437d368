#include "cornerlab/svg.hpp"

#include <cstdio>

namespace cornerlab {

namespace {
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

SvgCanvas::SvgCanvas(LatticeWindow window, double cell_px) : window_(window), cell_(cell_px) {}

std::pair<double, double> SvgCanvas::to_px(double x, double y) const {
  const double px = (x - static_cast<double>(window_.origin().x) + 0.5) * cell_;
  const double py = (static_cast<double>(window_.upper_right().y) - y + 0.5) * cell_;
  return {px, py};
}

void SvgCanvas::cell(Site s, const std::string& fill) {
  auto [px, py] = to_px(static_cast<double>(s.x), static_cast<double>(s.y));
  items_.push_back("<rect x=\"" + num(px - cell_ / 2) + "\" y=\"" + num(py - cell_ / 2) +
                   "\" width=\"" + num(cell_) + "\" height=\"" + num(cell_) + "\" fill=\"" + fill +
                   "\"/>");
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& points,
                         const std::string& stroke, double width_px) {
  std::string pts;
  for (const auto& [x, y] : points) {
    auto [px, py] = to_px(x, y);
    if (!pts.empty()) pts += ' ';
    pts += num(px) + "," + num(py);
  }
  items_.push_back("<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + stroke +
                   "\" stroke-width=\"" + num(width_px) + "\"/>");
}

void SvgCanvas::write(std::ostream& os) const {
  const double w = static_cast<double>(window_.width()) * cell_;
  const double h = static_cast<double>(window_.height()) * cell_;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n";
  for (const auto& item : items_) os << item << '\n';
  os << "</svg>\n";
}

}  // namespace cornerlab
