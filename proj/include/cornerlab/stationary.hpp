#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cornerlab/environment.hpp"
#include "cornerlab/passage.hpp"

namespace cornerlab {

/// Axis weights for the boundary-augmented model. horizontal[k-1] sits at
/// (k, 0) and vertical[k-1] at (0, k), k = 1..L.
struct BoundaryProfile {
  DirectionU direction{0.5};
  WeightDistribution horizontal_law;
  WeightDistribution vertical_law;
  double alpha = 0.0;  ///< horizontal mean
  double beta = 0.0;   ///< vertical mean
  std::vector<double> horizontal;
  std::vector<double> vertical;

  std::int64_t length() const { return static_cast<std::int64_t>(horizontal.size()); }
};

/// Boundary laws of the same family as `dist` whose means are the mean
/// gradient of the shape function at (a, 1-a).
std::pair<WeightDistribution, WeightDistribution> boundary_laws(const WeightDistribution& dist,
                                                                DirectionU a);

BoundaryProfile sample_boundary(const WeightDistribution& dist, DirectionU a, std::int64_t length,
                                std::uint64_t seed);

/// Boundary drawn from explicitly given laws.
BoundaryProfile sample_boundary(WeightDistribution horizontal_law, WeightDistribution vertical_law,
                                DirectionU a, std::int64_t length, std::uint64_t seed);

/// Passage values over {0..L}^2 with G(0) = 0, boundary partial sums on the
/// axes and G(v) = w_v + max(G(v - e1), G(v - e2)) inside.
class StationaryPlane {
 public:
  StationaryPlane(const BoundaryProfile& profile, const SiteWeightField& bulk);

  std::int64_t length() const { return length_; }
  const LatticeWindow& window() const { return window_; }
  double at(Site v) const { return g_[window_.index(v)]; }
  double weight(Site v) const;  ///< bulk weight at an interior site
  /// G(v) - G(v - e1), for v.x >= 1.
  double horizontal(Site v) const;
  /// G(v) - G(v - e2), for v.y >= 1.
  double vertical(Site v) const;

  IdentityReport check_recovery() const;
  IdentityReport check_closure() const;

  void export_increments_csv(std::ostream& os) const;  ///< x,y,I,J,w over the interior

 private:
  std::int64_t length_;
  LatticeWindow window_;
  std::vector<double> g_;
  std::vector<double> w_;
};

struct StationarityReport {
  WeightDistribution distribution;
  DirectionU direction{0.5};
  std::int64_t length = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0, beta = 0.0;

  // one I at the middle of the far row per replicate, against the horizontal law
  double ks_far_row = 0.0;
  double ks_far_row_pvalue = 1.0;
  // whole far row of each replicate, averaged
  double ks_row_mean = 0.0;

  // pooled standardized increments along the down-right staircase
  std::vector<double> autocorrelation{};  ///< lags 1..5
  std::size_t staircase_samples = 0;
  double autocorrelation_bound = 0.0;  ///< 3 / sqrt(samples)

  double mean_horizontal = 0.0, se_horizontal = 0.0;  ///< far row
  double mean_vertical = 0.0, se_vertical = 0.0;      ///< far column
  double shape_ratio = 0.0, se_shape_ratio = 0.0;     ///< G(v)/L at the level-L point of a
  double shape_target = 0.0;

  std::size_t recovery_violations = 0;
  std::size_t closure_violations = 0;
};

StationarityReport stationarity_tests(const WeightDistribution& dist, DirectionU a, std::int64_t length,
                                      std::size_t replicates, std::uint64_t seed, int workers = 1);

}  // namespace cornerlab
