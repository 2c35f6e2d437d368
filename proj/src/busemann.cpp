#include "cornerlab/busemann.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "cornerlab/stats.hpp"

namespace cornerlab {

namespace {

void write_double(std::ostream& os, double v) {
  if (std::isinf(v)) {
    os << (v > 0 ? "inf" : "-inf");
    return;
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  os << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
}

}  // namespace

double BusemannEstimate::mean_horizontal() const { return stats::mean(i_); }
double BusemannEstimate::mean_vertical() const { return stats::mean(j_); }

IdentityReport BusemannEstimate::check_recovery() const {
  IdentityReport rep;
  for (std::size_t k = 0; k < window_.size(); ++k) {
    if (window_.site(k) == sink_) continue;
    ++rep.checked;
    if (std::min(i_[k], j_[k]) != w_[k] && rep.violations++ == 0) rep.first_violation = window_.site(k);
  }
  return rep;
}

IdentityReport BusemannEstimate::check_closure() const {
  IdentityReport rep;
  for (std::size_t k = 0; k < window_.size(); ++k) {
    const Site x = window_.site(k);
    if (!window_.contains(x + kE1 + kE2) || !dominated(x + kE1 + kE2, sink_)) continue;
    ++rep.checked;
    if (horizontal(x) + vertical(x + kE1) != vertical(x) + horizontal(x + kE2) &&
        rep.violations++ == 0) {
      rep.first_violation = x;
    }
  }
  return rep;
}

void BusemannEstimate::export_csv(std::ostream& os) const {
  os << "x,y,I,J,w\n";
  for (std::size_t k = 0; k < window_.size(); ++k) {
    const Site x = window_.site(k);
    os << x.x << ',' << x.y << ',';
    write_double(os, i_[k]);
    os << ',';
    write_double(os, j_[k]);
    os << ',';
    write_double(os, w_[k]);
    os << '\n';
  }
}

BusemannEstimate estimate_to_sink(const SiteWeightField& field, Site sink, const LatticeWindow& window,
                                  DirectionU xi, std::int64_t n, int workers) {
  if (!dominated(window.upper_right(), sink)) {
    throw InsufficientMargin("observation window must lie below the sink " + to_string(sink));
  }
  const PassagePlane plane =
      backward_plane(field, sink, LatticeWindow::spanning(window.origin(), sink), workers);
  const GradientPlane g(plane);
  BusemannEstimate est(xi, n);
  est.sink_ = sink;
  est.window_ = window;
  est.seed_ = field.seed();
  est.i_.resize(window.size());
  est.j_.resize(window.size());
  est.w_.resize(window.size());
  for (std::size_t k = 0; k < window.size(); ++k) {
    const Site x = window.site(k);
    est.i_[k] = g.horizontal(x);
    est.j_[k] = g.vertical(x);
    est.w_[k] = g.weight(x);
  }
  return est;
}

BusemannEstimate estimate(const SiteWeightField& field, DirectionU xi, std::int64_t n,
                          const LatticeWindow& window, int workers) {
  const Site sink = xi.lattice_point(n);
  const std::int64_t margin = std::max(window.width(), window.height());
  const Site corner = window.upper_right();
  if (sink.x - corner.x < margin || sink.y - corner.y < margin) {
    throw InsufficientMargin("sink " + to_string(sink) + " is within " + std::to_string(margin) +
                             " of the observation window");
  }
  return estimate_to_sink(field, sink, window, xi, n, workers);
}

std::vector<StabilizationRung> stabilization_diagnostic(const SiteWeightField& field, DirectionU xi,
                                                        std::span<const std::int64_t> ladder,
                                                        const LatticeWindow& window, int workers) {
  std::vector<BusemannEstimate> rungs;
  for (std::int64_t n : ladder) rungs.push_back(estimate(field, xi, n, window, workers));
  std::vector<StabilizationRung> out;
  for (std::size_t r = 1; r < rungs.size(); ++r) {
    StabilizationRung s{ladder[r - 1], ladder[r], 0.0, 0.0};
    for (std::size_t k = 0; k < window.size(); ++k) {
      const Site x = window.site(k);
      s.sup_horizontal = std::max(s.sup_horizontal, std::abs(rungs[r - 1].horizontal(x) - rungs[r].horizontal(x)));
      s.sup_vertical = std::max(s.sup_vertical, std::abs(rungs[r - 1].vertical(x) - rungs[r].vertical(x)));
    }
    out.push_back(s);
  }
  return out;
}

DirectionMonotonicityReport direction_monotonicity_check(const SiteWeightField& field, Site left_sink,
                                                         Site right_sink, const LatticeWindow& window) {
  if (left_sink.level() != right_sink.level() || left_sink.x > right_sink.x) {
    throw std::invalid_argument("sinks must share a level with left_sink.x <= right_sink.x");
  }
  DirectionMonotonicityReport rep;
  rep.left_sink = left_sink;
  rep.right_sink = right_sink;
  const Site lower = window.origin();
  const GradientPlane gl(backward_plane(field, left_sink, LatticeWindow::spanning(lower, left_sink)));
  const GradientPlane gr(backward_plane(field, right_sink, LatticeWindow::spanning(lower, right_sink)));
  for (std::size_t k = 0; k < window.size(); ++k) {
    const Site x = window.site(k);
    if (!dominated(x, left_sink) || !dominated(x, right_sink)) continue;
    if (x == left_sink || x == right_sink) continue;
    ++rep.checked;
    const bool ok = gl.horizontal(x) >= gr.horizontal(x) && gl.vertical(x) <= gr.vertical(x);
    if (!ok && rep.violations++ == 0) rep.first_violation = x;
  }
  return rep;
}

DirectionMonotonicityReport direction_monotonicity_check(const SiteWeightField& field, double a1,
                                                         double a2, std::int64_t level,
                                                         const LatticeWindow& window) {
  if (!(a1 <= a2)) throw std::invalid_argument("directions must satisfy a1 <= a2");
  return direction_monotonicity_check(field, DirectionU(a1).lattice_point(level),
                                      DirectionU(a2).lattice_point(level), window);
}

CocycleGeodesic cocycle_geodesic(const BusemannEstimate& est, Site u, const TiePolicy& policy) {
  const LatticeWindow& w = est.window();
  if (!w.contains(u)) throw std::invalid_argument("start outside the observation window");
  CocycleGeodesic out{LatticePath{u, {}}, 0.0, false};
  Site x = u;
  while (x != est.sink()) {
    const double i = est.horizontal(x);
    const double j = est.vertical(x);
    const Step st = i < j ? Step::E1 : j < i ? Step::E2 : policy.forward(x);
    const Site next = x + unit(st);
    if (!w.contains(next)) {
      out.truncated = true;
      break;
    }
    out.b_sum += st == Step::E1 ? i : j;
    out.path.steps.push_back(st);
    x = next;
  }
  if (out.path.steps.empty() && out.truncated) {
    throw std::invalid_argument("cocycle geodesic leaves the window immediately at " + to_string(u));
  }
  return out;
}

SandwichReport sandwich_check(const SiteWeightField& field, DirectionU xi, std::int64_t n, Site u) {
  const Site sink = xi.lattice_point(n);
  const GradientPlane g(backward_plane(field, sink, LatticeWindow::spanning(u, sink)));
  const auto left = extract_geodesic(g, u, TiePolicy::leftmost()).e1_profile();
  const auto right = extract_geodesic(g, u, TiePolicy::rightmost()).e1_profile();
  auto between = [&](const LatticePath& p) {
    const auto prof = p.e1_profile();
    for (std::size_t k = 0; k < prof.size(); ++k) {
      if (prof[k] < left[k] || prof[k] > right[k]) return false;
    }
    return true;
  };
  SandwichReport rep;
  if ((sink - u).level() <= kEnumerationLimit) {
    rep.enumerated = true;
    for (const auto& p : enumerate_geodesics(field, u, sink)) {
      ++rep.paths_checked;
      if (!between(p)) ++rep.violations;
    }
  } else {
    for (std::uint64_t s = 0; s < 16; ++s) {
      ++rep.paths_checked;
      if (!between(extract_geodesic(g, u, TiePolicy::stationary(s)))) ++rep.violations;
    }
  }
  return rep;
}

std::vector<double> assemble_busemann(const BusemannEstimate& est, bool columns_first) {
  const LatticeWindow& w = est.window();
  const Site o = w.origin();
  std::vector<double> b(w.size(), 0.0);
  auto at = [&](std::int64_t c, std::int64_t r) -> double& {
    return b[w.unchecked_index(o + Site{c, r})];
  };
  for (std::int64_t r = 0; r < w.height(); ++r) {
    for (std::int64_t c = 0; c < w.width(); ++c) {
      if (r == 0 && c == 0) continue;
      const bool use_row = columns_first ? (c > 0) : (r == 0);
      if (use_row) {
        at(c, r) = at(c - 1, r) + est.horizontal(o + Site{c - 1, r});
      } else {
        at(c, r) = at(c, r - 1) + est.vertical(o + Site{c, r - 1});
      }
    }
  }
  return b;
}

UniformDeviation uniform_deviation_check(const BusemannEstimate& est, std::array<double, 2> h,
                                         std::int64_t min_level) {
  const LatticeWindow& w = est.window();
  UniformDeviation out;
  out.min_level = min_level >= 0 ? min_level : std::min(w.width(), w.height()) - 1;
  out.argmax = w.origin();
  const auto b = assemble_busemann(est);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Site d = w.site(k) - w.origin();
    const std::int64_t level = d.level();
    if (level == 0 || level < out.min_level) continue;
    const double dev = std::abs(b[k] + h[0] * static_cast<double>(d.x) + h[1] * static_cast<double>(d.y)) /
                       static_cast<double>(level);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.argmax = w.site(k);
    }
  }
  return out;
}

std::int64_t deviation_window_side(std::int64_t n) {
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(2.0 * std::sqrt(static_cast<double>(n)))));
}

}  // namespace cornerlab
