#include <cmath>
#include <numbers>
#include <sstream>

#include "cornerlab/competition.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cornerlab;

namespace {

SiteWeightField level_two_toy() {
  // w(1,0) = 3, w(0,1) = 2
  return SiteWeightField::from_values(LatticeWindow({0, 0}, 3, 3), {0.5, 3, 1, 2, 7, 1, 4, 1, 1});
}

SiteWeightField random_integer_field(oracle::Lcg& g, LatticeWindow w, int hi) {
  std::vector<double> v(w.size());
  for (double& x : v) x = g.integer(0, hi);
  return SiteWeightField::from_values(w, std::move(v));
}

// k(n) from brute-force passage times under a given tie convention
std::vector<std::int64_t> brute_interface(const SiteWeightField& f, std::int64_t levels, bool left) {
  auto w = [&](Site s) { return f.weight_at(s); };
  std::vector<std::int64_t> ks;
  for (std::int64_t n = 1; n <= levels; ++n) {
    std::int64_t k = 0;
    for (std::int64_t j = 1; j < n; ++j) {
      const Site v{j, n - j};
      const double d = oracle::enumerate(w, {0, 1}, v).best - oracle::enumerate(w, {1, 0}, v).best;
      if (d > 0 || (left && d == 0)) k = j;
    }
    ks.push_back(k);
  }
  return ks;
}

}  // namespace

TEST_CASE("trace_interface") {
  SUBCASE("level-two toy") {
    const auto iface = trace_interface(level_two_toy(), 2, InterfaceSide::Unique);
    CHECK(iface.k == std::vector<std::int64_t>{0, 0});
    CHECK(iface.dual_point(2) == std::pair<double, double>{0.5, 1.5});
  }
  SUBCASE("one level") {
    const SiteWeightField f(LatticeWindow({0, 0}, 2, 2), Exponential{1.0}, 4);
    const auto iface = trace_interface(f, 1, InterfaceSide::Unique);
    CHECK(iface.dual_point(1) == std::pair<double, double>{0.5, 0.5});
  }
  SUBCASE("matches brute force on small integer fields") {
    oracle::Lcg g(21);
    for (int trial = 0; trial < 200; ++trial) {
      const auto f = random_integer_field(g, LatticeWindow({0, 0}, 8, 8), 3);
      const auto both = trace_interfaces(f, 7);
      CHECK(both.left.k == brute_interface(f, 7, true));
      CHECK(both.right.k == brute_interface(f, 7, false));
    }
  }
  SUBCASE("right interface is weakly left of the left interface") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const SiteWeightField f(LatticeWindow({0, 0}, 31, 31), Geometric{0.5}, seed);
      const auto both = trace_interfaces(f, 30);
      bool ordered = true;
      for (std::size_t i = 0; i < both.left.k.size(); ++i) ordered = ordered && both.right.k[i] <= both.left.k[i];
      CHECK(ordered);
      CHECK(both.left.path_property());
      CHECK(both.right.path_property());
    }
  }
  SUBCASE("exact ties need a side") {
    const auto f = SiteWeightField::constant(LatticeWindow({0, 0}, 5, 5), 1.0);
    CHECK_THROWS_AS(trace_interface(f, 4, InterfaceSide::Unique), InterfaceTie);
    CHECK(trace_interface(f, 4, InterfaceSide::Right).k == std::vector<std::int64_t>{0, 0, 0, 0});
    CHECK(trace_interface(f, 4, InterfaceSide::Left).k == std::vector<std::int64_t>{0, 1, 2, 3});
  }
  SUBCASE("coverage check") {
    const SiteWeightField f(LatticeWindow({0, 0}, 5, 5), Exponential{1.0}, 4);
    CHECK_THROWS_AS(trace_interface(f, 5, InterfaceSide::Unique), std::invalid_argument);
    CHECK_THROWS_AS(trace_interface(f, 0, InterfaceSide::Unique), std::invalid_argument);
  }
}

TEST_CASE("direction") {
  SUBCASE("all e2 dual steps") {
    const InterfacePath p{{0, 0}, InterfaceSide::Unique, std::vector<std::int64_t>(400, 0)};
    const auto d = direction(p);
    CHECK(d.theta == std::atan2(399.5, 0.5));
    CHECK(d.theta > std::numbers::pi / 2 - 1.0 / 400);
    CHECK(d.direction.a() == doctest::Approx(0.5 / 400));
  }
  SUBCASE("central interface") {
    std::vector<std::int64_t> k(100);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::int64_t>(i + 1) / 2;
    const auto d = direction(InterfacePath{{0, 0}, InterfaceSide::Unique, k});
    CHECK(d.theta == std::atan2(49.5, 50.5));
    CHECK(d.direction.a() == 50.5 / 100);
  }
  SUBCASE("exponential symmetry") {
    const auto law = mc_angle_distribution(Exponential{1.0}, 1000, 500, InterfaceSide::Unique, 2024);
    double below = 0;
    for (double t : law.thetas()) below += t <= std::numbers::pi / 4 ? 1 : 0;
    CHECK(below / 500 == doctest::Approx(0.5).epsilon(0.1));
  }
}

TEST_CASE("mc_angle_distribution") {
  SUBCASE("single replicate") {
    const auto law = mc_angle_distribution(Exponential{1.0}, 50, 1, InterfaceSide::Unique, 7);
    REQUIRE(law.samples.size() == 1);
    const double f = interface_angle_cdf_exact(Exponential{1.0}, law.samples[0].theta, InterfaceSide::Unique);
    CHECK(law.ks == doctest::Approx(std::max(f, 1 - f)));
    CHECK(law.ks <= 1.0);
  }
  SUBCASE("replicates are reproducible and ordered") {
    const auto a = mc_angle_distribution(Geometric{0.5}, 40, 20, InterfaceSide::Left, 3, 1);
    const auto b = mc_angle_distribution(Geometric{0.5}, 40, 20, InterfaceSide::Left, 3, 3);
    CHECK(a.thetas() == b.thetas());
    for (std::size_t r = 0; r < a.samples.size(); ++r) CHECK(a.samples[r].replicate == r);
    const auto [left, right] = mc_angle_distribution_pair(Geometric{0.5}, 40, 20, 3);
    CHECK(left.thetas() == a.thetas());
    for (std::size_t r = 0; r < 20; ++r) CHECK(right.samples[r].theta >= left.samples[r].theta);
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(mc_angle_distribution(Geometric{0.5}, 10, 5, InterfaceSide::Unique, 1), std::exception);
    CHECK_THROWS_AS(mc_angle_distribution(BernoulliShifted{}, 10, 5, InterfaceSide::Left, 1), UnsupportedModel);
    CHECK_THROWS_AS(mc_angle_distribution(Exponential{1.0}, 10, 0, InterfaceSide::Unique, 1), std::invalid_argument);
  }
  SUBCASE("csv") {
    const auto law = mc_angle_distribution(Exponential{1.0}, 10, 2, InterfaceSide::Unique, 5);
    std::ostringstream os;
    law.export_csv(os);
    CHECK(os.str().rfind("seed,N,theta,side\n", 0) == 0);
    CHECK(os.str().find(",10,") != std::string::npos);
  }
}

TEST_CASE("separation_audit") {
  SUBCASE("level-two toy") {
    const auto f = level_two_toy();
    const auto tree = build_tree(f, f.window(), TiePolicy::leftmost());
    CHECK(tree.subtree({1, 1}) == Step::E1);
    CHECK(tree.subtree({0, 1}) == Step::E2);
    CHECK(tree.subtree({0, 2}) == Step::E2);
    const auto rep = separation_audit(tree, trace_interface(f, 2, InterfaceSide::Unique));
    CHECK(rep.ok());
    CHECK(rep.checked == 5u);
  }
  SUBCASE("exponential fields") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SiteWeightField f(LatticeWindow({0, 0}, 201, 201), Exponential{1.0}, seed);
      const auto iface = trace_interface(f, 200, InterfaceSide::Unique);
      CHECK(iface.path_property());
      CHECK(separation_audit(build_tree(f, f.window(), TiePolicy::leftmost()), iface).ok());
      CHECK(separation_audit(build_tree(f, f.window(), TiePolicy::rightmost()), iface).ok());
    }
  }
  SUBCASE("atomic fields need the matching tree") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const SiteWeightField f(LatticeWindow({0, 0}, 41, 41), Geometric{0.5}, seed);
      const auto both = trace_interfaces(f, 40);
      CHECK(separation_audit(build_tree(f, f.window(), TiePolicy::leftmost()), both.left).ok());
      CHECK(separation_audit(build_tree(f, f.window(), TiePolicy::rightmost()), both.right).ok());
    }
    const auto c = SiteWeightField::constant(LatticeWindow({0, 0}, 5, 5), 1.0);
    CHECK(!separation_audit(build_tree(c, c.window(), TiePolicy::leftmost()), trace_interface(c, 4, InterfaceSide::Right)).ok());
  }
  SUBCASE("preconditions") {
    const auto f = level_two_toy();
    const auto tree = build_tree(f, LatticeWindow({0, 0}, 3, 2), TiePolicy::leftmost());
    CHECK_THROWS_AS(separation_audit(tree, trace_interface(f, 2, InterfaceSide::Unique)), std::invalid_argument);
  }
}

TEST_CASE("interface_sign_crosscheck") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SiteWeightField f(LatticeWindow({0, 0}, 101, 101), Exponential{1.0}, seed);
    const auto iface = trace_interface(f, 100, InterfaceSide::Unique);
    const auto cc = interface_sign_crosscheck(f, iface);
    CHECK(cc.consistent);
    CHECK(cc.left_difference > 0);
    CHECK(cc.right_difference < 0);
  }
  const SiteWeightField g(LatticeWindow({0, 0}, 61, 61), Geometric{0.5}, 8);
  const auto both = trace_interfaces(g, 60);
  CHECK(interface_sign_crosscheck(g, both.left).consistent);
  CHECK(interface_sign_crosscheck(g, both.right).consistent);
}

TEST_CASE("export_interface_svg") {
  const auto f = level_two_toy();
  std::ostringstream os;
  export_interface_svg(os, build_tree(f, f.window(), TiePolicy::leftmost()), trace_interface(f, 2, InterfaceSide::Unique));
  CHECK(os.str().find("<polyline") != std::string::npos);
  CHECK(os.str().find("#92c5de") != std::string::npos);
}
