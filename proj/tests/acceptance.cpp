// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cornerlab/busemann.hpp"
#include "cornerlab/competition.hpp"
#include "cornerlab/geodesic.hpp"
#include "cornerlab/parallel.hpp"
#include "cornerlab/passage.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/stationary.hpp"
#include "cornerlab/stats.hpp"
#include "oracles.hpp"

using namespace cornerlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

int g_workers = 1;

std::uint64_t seed_for(int criterion, std::uint64_t k) {
  return rng::derive_seed(0xC0FFEEull + static_cast<std::uint64_t>(criterion), k);
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1
Outcome dp_vs_enumeration() {
  oracle::Lcg g(1);
  std::size_t compared = 0, mismatches = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    std::int64_t w = 1 + g.integer(0, 6), h = 1 + g.integer(0, 6);
    while ((w - 1) + (h - 1) > 12) --h;
    const LatticeWindow win({g.integer(-5, 5), g.integer(-5, 5)}, w, h);
    std::vector<double> vals(win.size());
    for (double& x : vals) x = g.integer(0, 5);
    const auto f = SiteWeightField::from_values(win, vals);
    auto weight = [&](Site s) { return vals[win.index(s)]; };
    const Site u = win.origin(), v = win.upper_right();
    const auto fwd = forward_plane(f, u);
    const auto bwd = backward_plane(f, v);
    for (std::size_t k = 0; k < win.size(); ++k) {
      const Site x = win.site(k);
      compared += 2;
      if (fwd.at(x) != oracle::enumerate(weight, u, x).best) ++mismatches;
      if (bwd.at(x) != oracle::enumerate(weight, x, v).best) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%zu plane entries compared, %zu mismatches", compared, mismatches)};
}

// 2
Outcome recovery_closure() {
  std::size_t checked = 0, bad = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 200, 200), Exponential{1.0}, seed_for(2, k), true, g_workers);
    const GradientPlane gp(backward_plane(f, {199, 199}, g_workers));
    const auto r = check_recovery(gp), c = check_closure(gp);
    checked += r.checked + c.checked;
    bad += r.violations + c.violations;
  }
  return {bad == 0, fmt("%zu site identities, %zu violations", checked, bad)};
}

// 3
Outcome gradient_chains() {
  std::size_t comparisons = 0, bad = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 200, 200), Exponential{1.0}, seed_for(3, k), true, g_workers);
    const auto rep = check_gradient_monotonicity(f, 199, g_workers);
    comparisons += rep.comparisons;
    bad += rep.violations;
  }
  return {bad == 0, fmt("%zu chain comparisons on all levels, %zu violations", comparisons, bad)};
}

// 4
Outcome sandwich() {
  std::size_t paths = 0, bad = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 6, 6), Geometric{0.5}, seed_for(4, k));
    const auto rep = sandwich_check(f, DirectionU(0.5), 10, {0, 0});
    if (!rep.enumerated) ++bad;
    bad += rep.violations;
    // the independent enumerator's argmax set, against the extracted extremes
    const GradientPlane gp(backward_plane(f, {5, 5}));
    const auto left = extract_geodesic(gp, {0, 0}, TiePolicy::leftmost()).sites();
    const auto right = extract_geodesic(gp, {0, 0}, TiePolicy::rightmost()).sites();
    const auto brute = oracle::enumerate([&](Site s) { return f.weight_at(s); }, {0, 0}, {5, 5});
    for (const auto& p : brute.argmax_paths) {
      ++paths;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].x < left[i].x || p[i].x > right[i].x) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0, fmt("%zu enumerated geodesics on 1000 instances, %zu violations", paths, bad)};
}

// 5
Outcome separation() {
  std::size_t checked = 0, bad = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 201, 201), Exponential{1.0}, seed_for(5, k), true, g_workers);
    const auto iface = trace_interface(f, 200, InterfaceSide::Unique);
    if (!iface.path_property()) ++bad;
    for (const auto& pol : {TiePolicy::leftmost(), TiePolicy::rightmost()}) {
      const auto rep = separation_audit(build_tree(f, f.window(), pol), iface);
      checked += rep.checked;
      bad += rep.violations;
    }
  }
  return {bad == 0, fmt("%zu labelled sites on 100 fields, %zu violations (incl. dual-path)", checked, bad)};
}

// 6
Outcome forest_identity() {
  std::size_t runs = 0, bad = 0, merges = 0;
  auto census_on = [&](const SiteWeightField& f, Site sink, const LatticeWindow& box, const TiePolicy& pol) {
    const GradientPlane gp(backward_plane(f, sink, LatticeWindow::spanning(box.origin(), sink)));
    std::vector<LatticePath> family;
    for (std::size_t i = 0; i < box.size(); ++i) family.push_back(extract_geodesic(gp, box.site(i), pol));
    const auto c = junction_census(family, box);
    ++runs;
    merges += c.merges;
    if (!c.forest_identity || c.merges + c.exits != c.sources) ++bad;
  };
  for (std::uint64_t k = 0; k < 20; ++k) {
    const SiteWeightField e(LatticeWindow({0, 0}, 301, 301), Exponential{1.0}, seed_for(6, k));
    census_on(e, {300, 300}, LatticeWindow({0, 0}, 25, 25), TiePolicy::leftmost());
    census_on(e, {100, 200}, LatticeWindow({5, 5}, 15, 30), TiePolicy::stationary(k));
    const SiteWeightField g(LatticeWindow({0, 0}, 201, 201), Geometric{0.5}, seed_for(6, 100 + k));
    census_on(g, {200, 200}, LatticeWindow({0, 0}, 20, 20), TiePolicy::leftmost());
    census_on(g, {200, 200}, LatticeWindow({0, 0}, 20, 20), TiePolicy::rightmost());
  }
  return {bad == 0, fmt("%zu censuses (%zu merges), %zu identity failures", runs, merges, bad)};
}

// 7
Outcome shape() {
  const auto est = shape_estimate(Exponential{1.0}, DirectionU(0.5), 1000, 50, seed_for(7, 0), g_workers);
  const double rel = std::abs(est.mean - 2.0) / 2.0;
  return {rel < 0.02, fmt("G/n = %.5f +- %.5f, relative error %.4f (bound 0.02)", est.mean, est.standard_error, rel)};
}

// 8
Outcome busemann_mean() {
  const std::size_t seeds = 200;
  std::vector<double> means(seeds), jmeans(seeds);
  const LatticeWindow w({0, 0}, 100, 100);
  parallel_for(seeds, g_workers, [&](std::size_t k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 1001, 1001), Exponential{1.0}, seed_for(8, k));
    const auto est = estimate(f, DirectionU(0.5), 2000, w);
    means[k] = est.mean_horizontal();
    jmeans[k] = est.mean_vertical();
  });
  const double m = stats::mean(means);
  const double rel = std::abs(m - 2.0) / 2.0;
  return {rel < 0.03, fmt("mean I = %.4f +- %.4f (mean J = %.4f), relative error %.4f (bound 0.03)", m,
                          stats::standard_error(means), stats::mean(jmeans), rel)};
}

// 9
Outcome angle_law() {
  const auto e = mc_angle_distribution(Exponential{1.0}, 1500, 500, InterfaceSide::Unique, seed_for(9, 0), g_workers);
  const auto [l, r] = mc_angle_distribution_pair(Geometric{0.5}, 1500, 500, seed_for(9, 1), g_workers);
  const bool pass = e.ks < 0.09 && l.ks < 0.09 && r.ks < 0.09;
  return {pass, fmt("KS exponential %.4f, geometric left %.4f, geometric right %.4f (bound 0.09)", e.ks, l.ks, r.ks)};
}

// 10
Outcome coalescence_trend() {
  auto fraction = [](std::int64_t n) {
    const std::size_t seeds = 200;
    std::vector<int> early(seeds);
    parallel_for(seeds, g_workers, [&](std::size_t k) {
      early[k] = coalescence_trial(Exponential{1.0}, seed_for(10, k), n, DirectionU(0.5), {10, -10},
                                   TiePolicy::leftmost())
                     .early()
                     ? 1
                     : 0;
    });
    return static_cast<double>(std::count(early.begin(), early.end(), 1)) / static_cast<double>(seeds);
  };
  const double f200 = fraction(200), f2000 = fraction(2000);
  return {f2000 > f200, fmt("coalesced in the first half: %.3f at n=200, %.3f at n=2000", f200, f2000)};
}

// 11
Outcome ladder_trends() {
  const std::vector<std::int64_t> ladder{250, 500, 1000};
  const std::size_t seeds = 50;
  const DirectionU xi(0.5);
  std::vector<std::array<double, 2>> sup_i(seeds), sup_j(seeds);
  std::vector<std::array<double, 3>> dev(seeds);
  parallel_for(seeds, g_workers, [&](std::size_t k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 501, 501), Exponential{1.0}, seed_for(11, k));
    const auto rungs = stabilization_diagnostic(f, xi, ladder, LatticeWindow({0, 0}, 20, 20));
    for (std::size_t r = 0; r < 2; ++r) {
      sup_i[k][r] = rungs[r].sup_horizontal;
      sup_j[k][r] = rungs[r].sup_vertical;
    }
    for (std::size_t r = 0; r < ladder.size(); ++r) {
      const std::int64_t side = deviation_window_side(ladder[r]);
      const auto est = estimate(f, xi, ladder[r], LatticeWindow({0, 0}, side, side));
      dev[k][r] = uniform_deviation_check(est, {-2.0, -2.0}).max_deviation;
    }
  });
  auto median_of = [&](auto& rows, std::size_t col) {
    std::vector<double> v;
    for (const auto& row : rows) v.push_back(row[col]);
    return stats::median(v);
  };
  const double si0 = median_of(sup_i, 0), si1 = median_of(sup_i, 1);
  const double sj0 = median_of(sup_j, 0), sj1 = median_of(sup_j, 1);
  const double d0 = median_of(dev, 0), d1 = median_of(dev, 1), d2 = median_of(dev, 2);
  const bool pass = si0 > si1 && sj0 > sj1 && d0 > d1 && d1 > d2;
  return {pass, fmt("median sup|dI| %.4f > %.4f, sup|dJ| %.4f > %.4f; median deviation %.4f > %.4f > %.4f", si0, si1,
                    sj0, sj1, d0, d1, d2)};
}

// 12
Outcome stationary() {
  const auto r = stationarity_tests(Exponential{1.0}, DirectionU(0.5), 500, 500, seed_for(12, 0), g_workers);
  double worst = 0.0;
  for (double c : r.autocorrelation) worst = std::max(worst, std::abs(c));
  const double ei = std::abs(r.mean_horizontal - r.alpha) / r.alpha;
  const double ej = std::abs(r.mean_vertical - r.beta) / r.beta;
  const bool pass = r.ks_far_row < 0.07 && worst <= r.autocorrelation_bound && ei < 0.03 && ej < 0.03 &&
                    r.recovery_violations == 0 && r.closure_violations == 0;
  return {pass, fmt("KS %.4f (bound 0.07); max |autocorr| %.5f (bound %.5f); mean I %.4f, mean J %.4f vs (%.3f, %.3f)",
                    r.ks_far_row, worst, r.autocorrelation_bound, r.mean_horizontal, r.mean_vertical, r.alpha,
                    r.beta)};
}

}  // namespace

int main(int argc, char** argv) {
  g_workers = resolve_workers(argc > 1 ? std::atoi(argv[1]) : 0);
  const std::vector<Criterion> criteria{
      {1, "dp-vs-enumeration", dp_vs_enumeration},
      {2, "recovery-and-closure", recovery_closure},
      {3, "gradient-chains", gradient_chains},
      {4, "leftmost-rightmost-sandwich", sandwich},
      {5, "interface-tree-separation", separation},
      {6, "junction-forest-identity", forest_identity},
      {7, "shape-function", shape},
      {8, "busemann-mean", busemann_mean},
      {9, "interface-angle-law", angle_law},
      {10, "coalescence-trend", coalescence_trend},
      {11, "stabilization-and-deviation-trends", ladder_trends},
      {12, "stationary-increments", stationary},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d  %-36s %s  [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
