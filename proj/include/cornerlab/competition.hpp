#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cornerlab/environment.hpp"
#include "cornerlab/geodesic.hpp"
#include "cornerlab/stats.hpp"

namespace cornerlab {

/// An exact tie in G_{e2,v} - G_{e1,v}; the interface is not unique.
class InterfaceTie : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Competition interface between the subtrees rooted at e1 and e2, relative
/// to `root`. Entry k[n-1] is the index k(n) at level n, so that the dual
/// point at level n is (k(n) + 1/2, n - k(n) - 1/2).
struct InterfacePath {
  Site root;
  InterfaceSide side = InterfaceSide::Unique;
  std::vector<std::int64_t> k;

  std::int64_t levels() const { return static_cast<std::int64_t>(k.size()); }
  std::int64_t at_level(std::int64_t n) const { return k.at(static_cast<std::size_t>(n - 1)); }
  /// Absolute coordinates of the dual point at level n.
  std::pair<double, double> dual_point(std::int64_t n) const;
  /// Consecutive dual points differ by e1 or e2.
  bool path_property() const;
  bool operator==(const InterfacePath&) const = default;
};

struct InterfacePair {
  InterfacePath left, right;
};

/// Traces both tie conventions from the e1- and e2-sourced passage times,
/// streaming anti-diagonals up to level N.
InterfacePair trace_interfaces(const SiteWeightField& field, std::int64_t levels);

/// Single side; InterfaceSide::Unique throws InterfaceTie on an exact tie.
InterfacePath trace_interface(const SiteWeightField& field, std::int64_t levels, InterfaceSide side);

struct DirectionEstimate {
  std::int64_t n = 0;
  DirectionU direction;  ///< dual point at level n divided by n
  double theta = 0.0;    ///< angle of that dual point from the e1 axis
};

DirectionEstimate direction(const InterfacePath& interface);

struct AngleSample {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double theta = 0.0;
};

struct AngleDistribution {
  WeightDistribution distribution;
  InterfaceSide side = InterfaceSide::Unique;
  std::int64_t n = 0;
  std::vector<AngleSample> samples;  ///< ordered by replicate
  double ks = 0.0;                   ///< against interface_angle_cdf_exact
  double ks_pvalue = 1.0;
  stats::Histogram histogram;

  std::vector<double> thetas() const;
  void export_csv(std::ostream& os) const;  ///< seed,N,theta,side
};

/// Angle law over `replicates` independent fields, replicate r using
/// derive_seed(seed, r).
AngleDistribution mc_angle_distribution(const WeightDistribution& dist, std::int64_t levels,
                                        std::size_t replicates, InterfaceSide side,
                                        std::uint64_t seed, int workers = 1);

/// Left and right laws from the same fields.
std::pair<AngleDistribution, AngleDistribution> mc_angle_distribution_pair(
    const WeightDistribution& dist, std::int64_t levels, std::size_t replicates, std::uint64_t seed,
    int workers = 1);

/// KS distance of angle samples against the exact law.
double angle_ks(const WeightDistribution& dist, std::vector<double> thetas, InterfaceSide side);

struct SeparationReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::optional<Site> first_violation;
  bool ok() const { return violations == 0; }
};

/// Sites left-above the interface belong to the e2-subtree and sites
/// right-below to the e1-subtree, at every level 1..N.
SeparationReport separation_audit(const GeodesicTree& tree, const InterfacePath& interface);

struct SignCrossCheck {
  double left_difference = 0.0;   ///< I(root) - J(root) toward the sink just left of the interface
  double right_difference = 0.0;  ///< same, just right of it
  bool consistent = false;
};

/// Busemann-estimate sign of I - J at the root, from backward planes to the
/// two level-N sinks adjacent to the final dual point.
SignCrossCheck interface_sign_crosscheck(const SiteWeightField& field, const InterfacePath& interface);

/// Tree subtree coloring with the interface drawn over it.
void export_interface_svg(std::ostream& os, const GeodesicTree& tree, const InterfacePath& interface);

}  // namespace cornerlab
