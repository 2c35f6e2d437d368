#include "cornerlab/geodesic.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>
#include <stdexcept>

#include "cornerlab/rng.hpp"
#include "cornerlab/svg.hpp"

namespace cornerlab {

Site LatticePath::end() const {
  Site s = start;
  for (Step st : steps) s = s + unit(st);
  return s;
}

std::vector<Site> LatticePath::sites() const {
  std::vector<Site> out;
  out.reserve(steps.size() + 1);
  out.push_back(start);
  for (Step st : steps) out.push_back(out.back() + unit(st));
  return out;
}

std::vector<std::int64_t> LatticePath::e1_profile() const {
  std::vector<std::int64_t> out;
  out.reserve(steps.size() + 1);
  for (const Site& s : sites()) out.push_back(s.x);
  return out;
}

void LatticePath::export_csv(std::ostream& os) const {
  os << "index,x,y\n";
  const auto pts = sites();
  for (std::size_t i = 0; i < pts.size(); ++i) os << i << ',' << pts[i].x << ',' << pts[i].y << '\n';
}

double path_weight(const SiteWeightField& field, const LatticePath& path) {
  double total = 0.0;
  Site s = path.start;
  for (Step st : path.steps) {
    total += field.weight_at(s);
    s = s + unit(st);
  }
  return total;
}

Step TiePolicy::forward(Site x) const {
  switch (kind_) {
    case Kind::Leftmost: return Step::E2;
    case Kind::Rightmost: return Step::E1;
    case Kind::Stationary:
      return (rng::site_bits(seed_, rng::Stream::TieBreak, x) >> 63) ? Step::E1 : Step::E2;
  }
  return Step::E2;
}

Step TiePolicy::backward(Site v) const {
  switch (kind_) {
    case Kind::Leftmost: return Step::E1;
    case Kind::Rightmost: return Step::E2;
    case Kind::Stationary:
      return (rng::site_bits(seed_, rng::Stream::TieBreakBackward, v) >> 63) ? Step::E1 : Step::E2;
  }
  return Step::E1;
}

LatticePath extract_geodesic(const GradientPlane& gplane, Site u, const TiePolicy& policy) {
  if (!gplane.window().contains(u)) {
    throw std::invalid_argument("start " + to_string(u) + " is not below the sink " +
                                to_string(gplane.sink()));
  }
  LatticePath path{u, {}};
  path.steps.reserve(static_cast<std::size_t>((gplane.sink() - u).level()));
  Site x = u;
  while (x != gplane.sink()) {
    const double i = gplane.horizontal(x);
    const double j = gplane.vertical(x);
    const Step st = i < j ? Step::E1 : j < i ? Step::E2 : policy.forward(x);
    path.steps.push_back(st);
    x = x + unit(st);
  }
  return path;
}

std::vector<LatticePath> enumerate_geodesics(const SiteWeightField& field, Site u, Site v) {
  if (!dominated(u, v)) throw std::invalid_argument("enumeration needs u <= v");
  if ((v - u).level() > kEnumerationLimit) {
    throw std::length_error("enumeration limited to |v-u|_1 <= 20");
  }
  std::vector<LatticePath> best;
  double best_weight = kNoPath;
  LatticePath current{u, {}};
  std::function<void(Site, double)> walk = [&](Site at, double sum) {
    if (at == v) {
      if (sum > best_weight) {
        best_weight = sum;
        best.clear();
      }
      if (sum == best_weight) best.push_back(current);
      return;
    }
    const double next = sum + field.weight_at(at);
    for (Step st : {Step::E1, Step::E2}) {
      const Site to = at + unit(st);
      if (!dominated(to, v)) continue;
      current.steps.push_back(st);
      walk(to, next);
      current.steps.pop_back();
    }
  };
  walk(u, 0.0);
  return best;
}

// ---- tree ------------------------------------------------------------------

GeodesicTree build_tree(const SiteWeightField& field, const LatticeWindow& window,
                        const TiePolicy& policy) {
  const PassagePlane plane = forward_plane(field, window.origin(), window);
  GeodesicTree t(policy);
  t.window_ = window;
  t.parent_.assign(window.size(), GeodesicTree::kNone);
  t.label_.assign(window.size(), GeodesicTree::kNone);
  const Site root = window.origin();
  for (std::size_t i = 0; i < window.size(); ++i) {
    const Site v = window.site(i);
    if (v == root) continue;
    const std::uint8_t bits = plane.argmax(v);
    Step st;
    if (bits == (kViaE1 | kViaE2)) {
      st = policy.backward(v);
      t.ties_.push_back(v);
    } else {
      st = (bits & kViaE1) ? Step::E1 : Step::E2;
    }
    t.parent_[i] = static_cast<std::uint8_t>(st);
    const Site parent = v - unit(st);
    // row-major order visits parents first
    t.label_[i] = parent == root ? static_cast<std::uint8_t>(st) : t.label_[window.unchecked_index(parent)];
  }
  return t;
}

std::optional<Step> GeodesicTree::parent_step(Site v) const {
  const std::uint8_t p = parent_[window_.index(v)];
  if (p == kNone) return std::nullopt;
  return static_cast<Step>(p);
}

std::optional<Step> GeodesicTree::subtree(Site v) const {
  const std::uint8_t l = label_[window_.index(v)];
  if (l == kNone) return std::nullopt;
  return static_cast<Step>(l);
}

bool GeodesicTree::tie(Site v) const {
  const std::size_t i = window_.index(v);
  auto it = std::lower_bound(ties_.begin(), ties_.end(), i, [this](Site a, std::size_t idx) {
    return window_.unchecked_index(a) < idx;
  });
  return it != ties_.end() && *it == v;
}

LatticePath GeodesicTree::path_from_root(Site v) const {
  std::vector<Step> rev;
  Site at = v;
  while (auto st = parent_step(at)) {
    rev.push_back(*st);
    at = at - unit(*st);
  }
  return LatticePath{at, std::vector<Step>(rev.rbegin(), rev.rend())};
}

void GeodesicTree::export_csv(std::ostream& os) const {
  os << "x,y,parent_step,subtree\n";
  for (std::size_t i = 0; i < window_.size(); ++i) {
    const Site v = window_.site(i);
    auto name = [](std::uint8_t b) { return b == kNone ? "none" : b == 0 ? "e1" : "e2"; };
    os << v.x << ',' << v.y << ',' << name(parent_[i]) << ',' << name(label_[i]) << '\n';
  }
}

void GeodesicTree::export_svg(std::ostream& os, std::span<const LatticePath> overlay) const {
  SvgCanvas canvas(window_);
  for (std::size_t i = 0; i < window_.size(); ++i) {
    const std::uint8_t l = label_[i];
    canvas.cell(window_.site(i), l == kNone ? "#ffffff" : l == 0 ? "#f4a582" : "#92c5de");
  }
  for (const auto& path : overlay) {
    std::vector<std::pair<double, double>> pts;
    for (const Site& s : path.sites()) pts.emplace_back(static_cast<double>(s.x), static_cast<double>(s.y));
    canvas.polyline(pts, "#222222");
  }
  canvas.write(os);
}

// ---- coalescence -----------------------------------------------------------

std::optional<Coalescence> coalescence(const LatticePath& p1, const LatticePath& p2) {
  if (p1.end() != p2.end()) throw std::invalid_argument("coalescence needs paths to a common sink");
  const auto s1 = p1.sites();
  const auto s2 = p2.sites();
  const std::int64_t l1 = p1.start.level(), l2 = p2.start.level();
  const std::int64_t lo = std::max(l1, l2);
  std::int64_t level = p1.end().level();
  // walk back from the common end while the paths agree
  while (level > lo) {
    const std::int64_t prev = level - 1;
    if (s1[static_cast<std::size_t>(prev - l1)] != s2[static_cast<std::size_t>(prev - l2)]) break;
    level = prev;
  }
  const auto i1 = static_cast<std::size_t>(level - l1);
  const auto i2 = static_cast<std::size_t>(level - l2);
  return Coalescence{s1[i1], i1, i2};
}

bool CoalescenceTrial::early(double fraction) const {
  const std::int64_t base = std::max(start1.level(), start2.level());
  return static_cast<double>(meet.site.level() - base) <=
         fraction * static_cast<double>(sink.level() - base);
}

CoalescenceTrial coalescence_trial(const WeightDistribution& dist, std::uint64_t seed,
                                   std::int64_t n, DirectionU xi, Site offset,
                                   const TiePolicy& policy) {
  CoalescenceTrial trial;
  trial.sink = xi.lattice_point(n);
  trial.start1 = {0, 0};
  trial.start2 = offset;
  if (!dominated(offset, trial.sink)) throw std::invalid_argument("offset start is not below the sink");
  const Site lower{std::min<std::int64_t>(0, offset.x), std::min<std::int64_t>(0, offset.y)};
  const LatticeWindow window = LatticeWindow::spanning(lower, trial.sink);
  const SiteWeightField field(window, dist, seed);
  const GradientPlane g(backward_plane(field, trial.sink, window));
  trial.meet = *coalescence(extract_geodesic(g, trial.start1, policy),
                            extract_geodesic(g, trial.start2, policy));
  return trial;
}

// ---- junctions -------------------------------------------------------------

JunctionCensus junction_census(std::span<const LatticePath> family, const LatticeWindow& box) {
  JunctionCensus c;
  c.sources = family.size();
  std::vector<std::int64_t> owner(box.size(), -1);
  std::vector<std::uint8_t> entered(box.size(), 0);  // bit 0: from west, bit 1: from south
  std::set<Site> exits;
  for (std::size_t p = 0; p < family.size(); ++p) {
    const auto pts = family[p].sites();
    if (!box.contains(pts.front())) throw std::invalid_argument("census sources must lie in the box");
    bool merged = false;
    Site exit = pts.back();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Site s = pts[k];
      if (!box.contains(s)) {
        exit = s;
        break;
      }
      const std::size_t i = box.unchecked_index(s);
      if (k > 0) entered[i] |= family[p].steps[k - 1] == Step::E1 ? 1 : 2;
      if (!merged) {
        if (owner[i] >= 0 && owner[i] != static_cast<std::int64_t>(p)) {
          merged = true;
          ++c.merges;
        } else {
          owner[i] = static_cast<std::int64_t>(p);
        }
      }
    }
    exits.insert(exit);
  }
  c.exits = exits.size();
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (entered[i] == 3) ++c.junctions;
    if (entered[i] == 0) ++c.leaves;
  }
  c.forest_identity = c.merges + c.exits == c.sources;
  c.binary_identity = c.junctions + c.exits == c.leaves;
  c.junction_density = static_cast<double>(c.junctions) / static_cast<double>(box.size());
  return c;
}

}  // namespace cornerlab
