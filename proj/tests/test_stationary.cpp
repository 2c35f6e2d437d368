#include <cmath>
#include <sstream>

#include "cornerlab/stationary.hpp"
#include "cornerlab/stats.hpp"
#include "doctest.h"

using namespace cornerlab;

TEST_CASE("sample_boundary") {
  SUBCASE("exponential means at the diagonal") {
    const auto p = sample_boundary(Exponential{1.0}, DirectionU(0.5), 10, 1);
    CHECK(p.alpha == doctest::Approx(2.0));
    CHECK(p.beta == doctest::Approx(2.0));
  }
  SUBCASE("means exceed the bulk mean") {
    for (double a : {0.1, 0.3, 0.5, 0.8}) {
      const auto [h, v] = boundary_laws(Geometric{0.4}, DirectionU(a));
      CHECK(h.mean() > WeightDistribution(Geometric{0.4}).mean());
      CHECK(v.mean() > WeightDistribution(Geometric{0.4}).mean());
      CHECK(h.is_geometric());
    }
  }
  SUBCASE("reflection swaps the axes") {
    for (double a : {0.2, 0.35, 0.6}) {
      const auto [h1, v1] = boundary_laws(Exponential{1.0}, DirectionU(a));
      const auto [h2, v2] = boundary_laws(Exponential{1.0}, DirectionU(1 - a));
      CHECK(h1.mean() == doctest::Approx(v2.mean()));
      CHECK(v1.mean() == doctest::Approx(h2.mean()));
    }
  }
  SUBCASE("empirical boundary mean") {
    const auto p = sample_boundary(Exponential{1.0}, DirectionU(0.5), 100000, 12);
    CHECK(stats::mean(p.horizontal) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(stats::mean(p.vertical) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(p.horizontal != p.vertical);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sample_boundary(BernoulliShifted{}, DirectionU(0.5), 10, 1), UnsupportedModel);
    CHECK_THROWS_AS(sample_boundary(Exponential{1.0}, DirectionU(0.0), 10, 1), BoundaryDirection);
  }
}

TEST_CASE("StationaryPlane") {
  SUBCASE("L = 1 corner") {
    const auto p = sample_boundary(Exponential{1.0}, DirectionU(0.5), 1, 5);
    const auto bulk = SiteWeightField::from_values(LatticeWindow({1, 1}, 1, 1), {0.75});
    const StationaryPlane plane(p, bulk);
    const double bh = p.horizontal[0], bv = p.vertical[0];
    CHECK(plane.horizontal({1, 1}) == 0.75 + std::max(bh - bv, 0.0));
    CHECK(plane.vertical({1, 1}) == 0.75 + std::max(bv - bh, 0.0));
  }
  SUBCASE("degenerate boundary and bulk") {
    const auto p = sample_boundary(Geometric{1.0}, DirectionU(0.5), 6, 5);
    const auto bulk = SiteWeightField::constant(LatticeWindow({1, 1}, 6, 6), 0.0);
    const StationaryPlane plane(p, bulk);
    for (std::int64_t y = 1; y <= 6; ++y) {
      for (std::int64_t x = 1; x <= 6; ++x) {
        CHECK(plane.horizontal({x, y}) == 0.0);
        CHECK(plane.vertical({x, y}) == 0.0);
      }
    }
  }
  SUBCASE("recovery and closure on every interior site") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (const WeightDistribution& d : {WeightDistribution(Exponential{1.0}), WeightDistribution(Geometric{0.5})}) {
        const auto p = sample_boundary(d, DirectionU(0.3), 80, seed);
        const StationaryPlane plane(p, SiteWeightField(LatticeWindow({1, 1}, 80, 80), d, seed));
        const auto rec = plane.check_recovery();
        CHECK(rec.ok());
        CHECK(rec.checked == 80u * 80u);
        CHECK(plane.check_closure().ok());
      }
    }
  }
  SUBCASE("dimension checks") {
    const auto p = sample_boundary(Exponential{1.0}, DirectionU(0.5), 10, 5);
    CHECK_THROWS_AS(StationaryPlane(p, SiteWeightField(LatticeWindow({1, 1}, 9, 10), Exponential{1.0}, 1)),
                    std::invalid_argument);
    const StationaryPlane plane(p, SiteWeightField(LatticeWindow({0, 0}, 11, 11), Exponential{1.0}, 1));
    CHECK_THROWS_AS(plane.horizontal({0, 3}), OutOfWindow);
    CHECK_THROWS_AS(plane.weight({3, 0}), OutOfWindow);
  }
  SUBCASE("increments csv") {
    const auto p = sample_boundary(Geometric{1.0}, DirectionU(0.5), 2, 5);
    const StationaryPlane plane(p, SiteWeightField::constant(LatticeWindow({1, 1}, 2, 2), 1.0));
    std::ostringstream os;
    plane.export_increments_csv(os);
    CHECK(os.str() == "x,y,I,J,w\n1,1,1,1,1\n2,1,1,2,1\n1,2,2,1,1\n2,2,1,1,1\n");
  }
}

TEST_CASE("stationarity_tests") {
  SUBCASE("degenerate model has zero KS") {
    const auto rep = stationarity_tests(Geometric{1.0}, DirectionU(0.5), 5, 100, 3);
    CHECK(rep.ks_far_row == 0.0);
    CHECK(rep.ks_row_mean == 0.0);
    CHECK(rep.mean_horizontal == 0.0);
  }
  SUBCASE("exponential far-row means") {
    const auto rep = stationarity_tests(Exponential{1.0}, DirectionU(0.5), 500, 200, 99);
    CHECK(rep.recovery_violations == 0u);
    CHECK(rep.closure_violations == 0u);
    CHECK(rep.mean_horizontal == doctest::Approx(2.0).epsilon(0.03));
    CHECK(rep.mean_vertical == doctest::Approx(2.0).epsilon(0.03));
    CHECK(rep.shape_ratio == doctest::Approx(rep.shape_target).epsilon(0.01));
    CHECK(rep.autocorrelation.size() == 5u);
    CHECK(rep.staircase_samples == 200000u);
  }
  SUBCASE("geometric mean-matched boundary") {
    const auto rep = stationarity_tests(Geometric{0.5}, DirectionU(0.4), 200, 200, 7);
    MESSAGE("geometric far-row KS " << rep.ks_far_row << ", row-mean KS " << rep.ks_row_mean);
    CHECK(rep.mean_horizontal == doctest::Approx(rep.alpha).epsilon(0.03));
    CHECK(rep.mean_vertical == doctest::Approx(rep.beta).epsilon(0.03));
    CHECK(rep.ks_far_row < 0.12);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(stationarity_tests(Exponential{1.0}, DirectionU(0.5), 10, 99, 1), std::invalid_argument);
  }
}
