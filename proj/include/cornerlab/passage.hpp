#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cornerlab/environment.hpp"
#include "cornerlab/lattice.hpp"

namespace cornerlab {

/// Passage value of a site with no admissible path to or from the anchor.
inline constexpr double kNoPath = -std::numeric_limits<double>::infinity();
/// Gradient across the anchor's boundary lines.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class Orientation : std::uint8_t { Forward = 0, Backward = 1 };

/// Which endpoint weight a passage value includes. Public planes always use
/// ExcludeTerminal: G_{x,y} sums the weights of x_0, ..., x_{n-1}.
enum class EndpointConvention : std::uint8_t { ExcludeTerminal = 0, IncludeTerminal = 1 };

/// Bits of PassagePlane::argmax.
enum ArgmaxBits : std::uint8_t {
  kViaE1 = 1,  ///< forward: v-e1 attains the max; backward: x+e1 does
  kViaE2 = 2,
};

class OrientationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Last-passage values from a source (forward) or to a sink (backward).
class PassagePlane {
 public:
  Site anchor() const { return anchor_; }
  Orientation orientation() const { return orientation_; }
  EndpointConvention convention() const { return EndpointConvention::ExcludeTerminal; }
  const LatticeWindow& window() const { return window_; }

  /// G at v; kNoPath where v is not comparable with the anchor.
  double at(Site v) const { return values_[window_.index(v)]; }
  double weight(Site v) const { return weights_[window_.index(v)]; }
  /// ArgmaxBits of the neighbors attaining the max; 0 at the anchor and
  /// outside the reachable region.
  std::uint8_t argmax(Site v) const { return argmax_[window_.index(v)]; }
  bool tie(Site v) const { return argmax(v) == (kViaE1 | kViaE2); }
  /// Rectangle of sites comparable with the anchor.
  const LatticeWindow& reachable() const { return reachable_; }
  bool reaches(Site v) const { return reachable_.contains(v); }

  std::span<const double> values() const { return values_; }
  std::size_t tie_count() const;

  void export_csv(std::ostream& os) const;
  /// Little-endian dump: magic "CLPPLANE", u32 version, u8 orientation,
  /// u8 convention, u16 zero, i64 origin.x, origin.y, width, height,
  /// anchor.x, anchor.y, then width*height f64 values row-major.
  void export_binary(std::ostream& os) const;

  struct BinaryImage {
    Orientation orientation;
    EndpointConvention convention;
    LatticeWindow window;
    Site anchor;
    std::vector<double> values;
  };
  static BinaryImage read_binary(std::istream& is);

 private:
  friend PassagePlane forward_plane(const SiteWeightField&, Site, const LatticeWindow&, int);
  friend PassagePlane backward_plane(const SiteWeightField&, Site, const LatticeWindow&, int);

  Site anchor_{};
  Orientation orientation_ = Orientation::Forward;
  LatticeWindow window_;
  LatticeWindow reachable_;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> argmax_;
};

/// G_{source, v} for v in window. workers > 1 evaluates tiles of one
/// anti-diagonal concurrently; the result is bit-identical for any count.
PassagePlane forward_plane(const SiteWeightField& field, Site source, const LatticeWindow& window,
                           int workers = 1);
PassagePlane forward_plane(const SiteWeightField& field, Site source, int workers = 1);

/// G_{x, sink} for x in window.
PassagePlane backward_plane(const SiteWeightField& field, Site sink, const LatticeWindow& window,
                            int workers = 1);
PassagePlane backward_plane(const SiteWeightField& field, Site sink, int workers = 1);

/// I(x) = G_{x,sink} - G_{x+e1,sink} and J(x) = G_{x,sink} - G_{x+e2,sink}
/// over the sites x <= sink of a backward plane. A gradient across the
/// sink's north/east line is kUnbounded.
class GradientPlane {
 public:
  explicit GradientPlane(const PassagePlane& backward);

  Site sink() const { return sink_; }
  const LatticeWindow& window() const { return window_; }
  double horizontal(Site x) const { return i_[window_.index(x)]; }
  double vertical(Site x) const { return j_[window_.index(x)]; }
  double weight(Site x) const { return w_[window_.index(x)]; }
  /// G_{x, sink}.
  double passage(Site x) const { return g_[window_.index(x)]; }

 private:
  Site sink_;
  LatticeWindow window_;
  std::vector<double> i_, j_, w_, g_;
};

GradientPlane gradient_plane(const PassagePlane& backward);

struct IdentityReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::optional<Site> first_violation;
  bool ok() const { return violations == 0; }
};

/// min(I, J) == w at every x != sink.
IdentityReport check_recovery(const GradientPlane& g);
/// I(x) + J(x+e1) == J(x) + I(x+e2) wherever x + e1 + e2 <= sink.
IdentityReport check_closure(const GradientPlane& g);

struct ChainViolation {
  std::int64_t level;
  Site u;  ///< left member of the offending adjacent pair
  int chain;  ///< 1: G_{0,.}-G_{e1,.} must not increase; 2: G_{0,.}-G_{e2,.} must not decrease
};

struct MonotonicityReport {
  std::int64_t levels = 0;
  std::size_t comparisons = 0;
  std::size_t violations = 0;
  std::optional<ChainViolation> first_violation;
  bool ok() const { return violations == 0; }
};

/// Compares the gradient chains along every anti-diagonal covered by three
/// forward planes from root, root+e1, root+e2 over the same window.
MonotonicityReport check_gradient_chains(const PassagePlane& from_root, const PassagePlane& from_e1,
                                         const PassagePlane& from_e2);

/// Builds the three planes over [root, root + (n,n)] (root = field origin)
/// and checks every level up to 2n.
MonotonicityReport check_gradient_monotonicity(const SiteWeightField& field, std::int64_t n,
                                               int workers = 1);

/// G_{0, v} for a single terminal v, holding one row at a time.
double terminal_passage(const WeightDistribution& dist, std::uint64_t seed, Site v);

struct ShapeEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::int64_t n = 0;
  Site terminal;
  std::vector<double> samples;  ///< G/n per replicate, replicate order
};

/// Mean of G_{0, v_n}/n, v_n = (floor(n a), n - floor(n a)), over replicates
/// with seeds derive_seed(seed, r).
ShapeEstimate shape_estimate(const WeightDistribution& dist, DirectionU xi, std::int64_t n,
                             std::int64_t replicates, std::uint64_t seed, int workers = 1);

}  // namespace cornerlab
