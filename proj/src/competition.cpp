#include "cornerlab/competition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cornerlab/parallel.hpp"
#include "cornerlab/passage.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/svg.hpp"

namespace cornerlab {

std::pair<double, double> InterfacePath::dual_point(std::int64_t n) const {
  const double kk = static_cast<double>(at_level(n));
  return {static_cast<double>(root.x) + kk + 0.5, static_cast<double>(root.y) + static_cast<double>(n) - kk - 0.5};
}

bool InterfacePath::path_property() const {
  for (std::size_t i = 1; i < k.size(); ++i) {
    const std::int64_t d = k[i] - k[i - 1];
    if (d != 0 && d != 1) return false;
  }
  return true;
}

InterfacePair trace_interfaces(const SiteWeightField& field, std::int64_t levels) {
  if (levels < 1) throw std::invalid_argument("interface needs at least one level");
  const Site root = field.window().origin();
  if (!field.window().contains(root + Site{levels, 0}) || !field.window().contains(root + Site{0, levels})) {
    throw std::invalid_argument("field does not cover levels up to " + std::to_string(levels));
  }
  InterfacePair out{{root, InterfaceSide::Left, {}}, {root, InterfaceSide::Right, {}}};
  out.left.k.reserve(static_cast<std::size_t>(levels));
  out.right.k.reserve(static_cast<std::size_t>(levels));

  // a[j], b[j]: G from root+e1 and root+e2 to root+(j, n-j); w[j] the weight there
  std::vector<double> a{kNoPath, 0.0}, b{0.0, kNoPath}, w(2), na, nb, nw;
  w[0] = field.unchecked(root + kE2);
  w[1] = field.unchecked(root + kE1);
  out.left.k.push_back(0);
  out.right.k.push_back(0);
  const double limit = field.exact_sum_limit();
  for (std::int64_t n = 2; n <= levels; ++n) {
    const auto len = static_cast<std::size_t>(n + 1);
    na.assign(len, kNoPath);
    nb.assign(len, kNoPath);
    nw.resize(len);
    std::int64_t kr = 0, kl = 0;
    double peak = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const auto jj = static_cast<std::int64_t>(j);
      nw[j] = field.unchecked(root + Site{jj, n - jj});
      // predecessors: (j-1, n-j) is index j-1 and (j, n-1-j) is index j on level n-1
      double va = kNoPath, vb = kNoPath;
      if (j >= 1) {
        va = std::max(va, a[j - 1] + w[j - 1]);
        vb = std::max(vb, b[j - 1] + w[j - 1]);
      }
      if (j + 1 < len) {
        va = std::max(va, a[j] + w[j]);
        vb = std::max(vb, b[j] + w[j]);
      }
      na[j] = va;
      nb[j] = vb;
      if (std::isfinite(va)) peak = std::max(peak, std::abs(va));
      if (std::isfinite(vb)) peak = std::max(peak, std::abs(vb));
      const double delta = j == 0 ? kUnbounded : j + 1 == len ? -kUnbounded : vb - va;
      if (delta > 0) kr = jj;
      if (delta >= 0) kl = jj;
    }
    if (peak > limit) {
      throw ArithmeticOverflow("passage times exceed the exact range at level " + std::to_string(n));
    }
    out.right.k.push_back(kr);
    out.left.k.push_back(kl);
    std::swap(a, na);
    std::swap(b, nb);
    std::swap(w, nw);
  }
  return out;
}

InterfacePath trace_interface(const SiteWeightField& field, std::int64_t levels, InterfaceSide side) {
  InterfacePair both = trace_interfaces(field, levels);
  switch (side) {
    case InterfaceSide::Left:
      return std::move(both.left);
    case InterfaceSide::Right:
      return std::move(both.right);
    case InterfaceSide::Unique:
      break;
  }
  for (std::size_t i = 0; i < both.left.k.size(); ++i) {
    if (both.left.k[i] != both.right.k[i]) {
      throw InterfaceTie("exact tie at level " + std::to_string(i + 1) +
                         "; trace the left or right interface instead");
    }
  }
  both.right.side = InterfaceSide::Unique;
  return std::move(both.right);
}

DirectionEstimate direction(const InterfacePath& interface) {
  const std::int64_t n = interface.levels();
  if (n < 1) throw std::invalid_argument("empty interface");
  const double x = static_cast<double>(interface.at_level(n)) + 0.5;
  const double y = static_cast<double>(n) - x;
  return {n, DirectionU(x / static_cast<double>(n)), std::atan2(y, x)};
}

std::vector<double> AngleDistribution::thetas() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.theta);
  return out;
}

void AngleDistribution::export_csv(std::ostream& os) const {
  os << "seed,N,theta,side\n";
  const std::string s = to_string(side);
  for (const auto& smp : samples) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, smp.theta);
    os << smp.seed << ',' << n << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << ','
       << s << '\n';
  }
}

double angle_ks(const WeightDistribution& dist, std::vector<double> thetas, InterfaceSide side) {
  return stats::ks_statistic(std::move(thetas),
                             [&](double t) { return interface_angle_cdf_exact(dist, t, side); });
}

namespace {

AngleDistribution finish(const WeightDistribution& dist, std::int64_t levels, InterfaceSide side,
                         std::vector<AngleSample> samples) {
  AngleDistribution d{dist, side, levels, std::move(samples), 0.0, 1.0, {}};
  const auto th = d.thetas();
  d.ks = angle_ks(dist, th, side);
  d.ks_pvalue = stats::ks_pvalue(d.ks, th.size());
  d.histogram = stats::histogram(th, 0.0, std::numbers::pi / 2, 30);
  return d;
}

void check_solvable(const WeightDistribution& dist, std::size_t replicates) {
  if (!dist.is_solvable()) throw UnsupportedModel("angle law needs exponential or geometric weights");
  if (replicates == 0) throw std::invalid_argument("replicates must be positive");
}

}  // namespace

AngleDistribution mc_angle_distribution(const WeightDistribution& dist, std::int64_t levels,
                                        std::size_t replicates, InterfaceSide side,
                                        std::uint64_t seed, int workers) {
  check_solvable(dist, replicates);
  // the exact law throws for an unsupported side before any work is done
  interface_angle_cdf_exact(dist, std::numbers::pi / 4, side);
  std::vector<AngleSample> samples(replicates);
  const LatticeWindow win({0, 0}, levels + 1, levels + 1);
  parallel_for(replicates, workers, [&](std::size_t r) {
    const std::uint64_t s = rng::derive_seed(seed, r);
    const SiteWeightField field(win, dist, s, /*materialize=*/false);
    samples[r] = {r, s, direction(trace_interface(field, levels, side)).theta};
  });
  return finish(dist, levels, side, std::move(samples));
}

std::pair<AngleDistribution, AngleDistribution> mc_angle_distribution_pair(
    const WeightDistribution& dist, std::int64_t levels, std::size_t replicates, std::uint64_t seed,
    int workers) {
  check_solvable(dist, replicates);
  std::vector<AngleSample> left(replicates), right(replicates);
  const LatticeWindow win({0, 0}, levels + 1, levels + 1);
  parallel_for(replicates, workers, [&](std::size_t r) {
    const std::uint64_t s = rng::derive_seed(seed, r);
    const SiteWeightField field(win, dist, s, /*materialize=*/false);
    const InterfacePair both = trace_interfaces(field, levels);
    left[r] = {r, s, direction(both.left).theta};
    right[r] = {r, s, direction(both.right).theta};
  });
  return {finish(dist, levels, InterfaceSide::Left, std::move(left)),
          finish(dist, levels, InterfaceSide::Right, std::move(right))};
}

SeparationReport separation_audit(const GeodesicTree& tree, const InterfacePath& interface) {
  const Site root = tree.root();
  if (root != interface.root) throw std::invalid_argument("tree and interface have different roots");
  const std::int64_t levels = interface.levels();
  if (!tree.window().contains(root + Site{levels, levels})) {
    throw std::invalid_argument("tree window does not cover the interface levels");
  }
  SeparationReport rep;
  for (std::int64_t n = 1; n <= levels; ++n) {
    const std::int64_t k = interface.at_level(n);
    for (std::int64_t j = 0; j <= n; ++j) {
      const Site v = root + Site{j, n - j};
      ++rep.checked;
      const Step expected = j <= k ? Step::E2 : Step::E1;
      if (tree.subtree(v) != expected && rep.violations++ == 0) rep.first_violation = v;
    }
  }
  return rep;
}

SignCrossCheck interface_sign_crosscheck(const SiteWeightField& field, const InterfacePath& interface) {
  const std::int64_t n = interface.levels();
  const std::int64_t k = interface.at_level(n);
  const Site root = interface.root;
  auto diff = [&](Site sink) {
    const GradientPlane g(backward_plane(field, sink, LatticeWindow::spanning(root, sink)));
    return g.horizontal(root) - g.vertical(root);
  };
  SignCrossCheck out;
  out.left_difference = diff(root + Site{k, n - k});
  out.right_difference = diff(root + Site{k + 1, n - k - 1});
  const bool left_ok = interface.side == InterfaceSide::Left ? out.left_difference >= 0 : out.left_difference > 0;
  const bool right_ok = interface.side == InterfaceSide::Right ? out.right_difference <= 0 : out.right_difference < 0;
  out.consistent = left_ok && right_ok;
  return out;
}

void export_interface_svg(std::ostream& os, const GeodesicTree& tree, const InterfacePath& interface) {
  const LatticeWindow& w = tree.window();
  SvgCanvas canvas(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto st = tree.subtree(w.site(i));
    canvas.cell(w.site(i), !st ? "#ffffff" : *st == Step::E1 ? "#f4a582" : "#92c5de");
  }
  std::vector<std::pair<double, double>> pts;
  for (std::int64_t n = 1; n <= interface.levels(); ++n) pts.push_back(interface.dual_point(n));
  canvas.polyline(pts, "#111111", 2.0);
  canvas.write(os);
}

}  // namespace cornerlab
