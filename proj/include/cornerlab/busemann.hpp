#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <iosfwd>
#include <span>
#include <vector>

#include "cornerlab/environment.hpp"
#include "cornerlab/geodesic.hpp"
#include "cornerlab/passage.hpp"

namespace cornerlab {

class InsufficientMargin : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite-n Busemann increments I, J on an observation window W, taken from
/// one backward plane to a far sink.
class BusemannEstimate {
 public:
  DirectionU direction() const { return direction_; }
  std::int64_t n() const { return n_; }
  Site sink() const { return sink_; }
  const LatticeWindow& window() const { return window_; }
  std::uint64_t seed() const { return seed_; }

  double horizontal(Site x) const { return i_[window_.index(x)]; }
  double vertical(Site x) const { return j_[window_.index(x)]; }
  double weight(Site x) const { return w_[window_.index(x)]; }
  double mean_horizontal() const;
  double mean_vertical() const;

  IdentityReport check_recovery() const;
  IdentityReport check_closure() const;

  void export_csv(std::ostream& os) const;  ///< x,y,I,J,w

 private:
  friend BusemannEstimate estimate_to_sink(const SiteWeightField&, Site, const LatticeWindow&,
                                           DirectionU, std::int64_t, int);
  BusemannEstimate(DirectionU d, std::int64_t n) : direction_(d), n_(n) {}

  DirectionU direction_;
  std::int64_t n_;
  Site sink_;
  LatticeWindow window_;
  std::uint64_t seed_ = 0;
  std::vector<double> i_, j_, w_;
};

/// Sink v_n = (floor(n a), n - floor(n a)). The sink must exceed every site of
/// W by at least max(width, height) in both coordinates.
BusemannEstimate estimate(const SiteWeightField& field, DirectionU xi, std::int64_t n,
                          const LatticeWindow& window, int workers = 1);

/// Same, for an explicit sink; no margin requirement beyond window <= sink.
BusemannEstimate estimate_to_sink(const SiteWeightField& field, Site sink,
                                  const LatticeWindow& window, DirectionU xi = DirectionU(0.5),
                                  std::int64_t n = 0, int workers = 1);

struct StabilizationRung {
  std::int64_t n_low, n_high;
  double sup_horizontal;  ///< sup over W of |I_low - I_high|
  double sup_vertical;
};

/// Sup-differences between consecutive ladder entries on one field.
std::vector<StabilizationRung> stabilization_diagnostic(const SiteWeightField& field, DirectionU xi,
                                                        std::span<const std::int64_t> ladder,
                                                        const LatticeWindow& window, int workers = 1);

struct DirectionMonotonicityReport {
  Site left_sink, right_sink;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::optional<Site> first_violation;
  bool ok() const { return violations == 0; }
};

/// With left_sink.x <= right_sink.x at a common level: I_left >= I_right and
/// J_left <= J_right at every x of W below both sinks.
DirectionMonotonicityReport direction_monotonicity_check(const SiteWeightField& field, Site left_sink,
                                                         Site right_sink, const LatticeWindow& window);
DirectionMonotonicityReport direction_monotonicity_check(const SiteWeightField& field, double a1,
                                                         double a2, std::int64_t level,
                                                         const LatticeWindow& window);

struct CocycleGeodesic {
  LatticePath path;
  double b_sum = 0.0;  ///< sum of the followed increments
  bool truncated = false;  ///< stopped at the edge of W before the sink
};

/// Follows the minimal increment from u inside W.
CocycleGeodesic cocycle_geodesic(const BusemannEstimate& est, Site u, const TiePolicy& policy);

struct SandwichReport {
  std::size_t paths_checked = 0;
  std::size_t violations = 0;
  bool enumerated = false;  ///< exhaustive (small instances) rather than sampled policies
  bool ok() const { return violations == 0; }
};

/// Every geodesic from u to v_n lies between the leftmost and rightmost
/// gradient-following geodesics. Exhaustive when |v_n - u|_1 <= 20, otherwise
/// checks stationary-policy geodesics.
SandwichReport sandwich_check(const SiteWeightField& field, DirectionU xi, std::int64_t n, Site u);

/// B(x0, x) by summing I along the bottom row and J up the column; with
/// `columns_first` J first then I.
std::vector<double> assemble_busemann(const BusemannEstimate& est, bool columns_first = false);

struct UniformDeviation {
  double max_deviation = 0.0;
  Site argmax;
  std::int64_t min_level = 0;
};

/// max of |B(x0, x) + h.(x - x0)| / |x - x0|_1 over x in W with
/// |x - x0|_1 >= min_level (default: the outermost full anti-diagonal).
UniformDeviation uniform_deviation_check(const BusemannEstimate& est, std::array<double, 2> h,
                                         std::int64_t min_level = -1);

/// Side of the observation window used for the deviation ladder at scale n.
std::int64_t deviation_window_side(std::int64_t n);

}  // namespace cornerlab
