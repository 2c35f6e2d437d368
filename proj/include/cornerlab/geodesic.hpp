#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cornerlab/environment.hpp"
#include "cornerlab/lattice.hpp"
#include "cornerlab/passage.hpp"

namespace cornerlab {

/// An up-right lattice path.
struct LatticePath {
  Site start;
  std::vector<Step> steps;

  std::size_t length() const { return steps.size(); }
  Site end() const;
  std::vector<Site> sites() const;
  /// e1-coordinate of the site on each level from start to end.
  std::vector<std::int64_t> e1_profile() const;

  void export_csv(std::ostream& os) const;  ///< index,x,y

  friend bool operator==(const LatticePath&, const LatticePath&) = default;
};

/// Sum of the weights of every site but the last.
double path_weight(const SiteWeightField& field, const LatticePath& path);

/// How ties between the two steps (or two predecessors) are resolved.
class TiePolicy {
 public:
  enum class Kind { Leftmost, Rightmost, Stationary };

  static TiePolicy leftmost() { return TiePolicy(Kind::Leftmost, 0); }
  static TiePolicy rightmost() { return TiePolicy(Kind::Rightmost, 0); }
  /// Coin flip attached to each site: a pure function of (seed, site).
  static TiePolicy stationary(std::uint64_t seed) { return TiePolicy(Kind::Stationary, seed); }

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  /// Step out of x when both steps are optimal. Leftmost takes e2.
  Step forward(Site x) const;
  /// Last step into v when both predecessors are optimal. Leftmost arrives
  /// from v - e1, so the leftmost geodesic tree is reproduced.
  Step backward(Site v) const;

 private:
  TiePolicy(Kind k, std::uint64_t seed) : kind_(k), seed_(seed) {}
  Kind kind_;
  std::uint64_t seed_;
};

/// Follows the minimal gradient from u to the sink: I < J steps e1, J < I
/// steps e2, ties go to the policy.
LatticePath extract_geodesic(const GradientPlane& gplane, Site u, const TiePolicy& policy);

/// Every maximizing path u -> v by enumeration; requires |v-u|_1 <= 20.
std::vector<LatticePath> enumerate_geodesics(const SiteWeightField& field, Site u, Site v);

inline constexpr std::int64_t kEnumerationLimit = 20;

/// For every site v of the window, the predecessor on the policy geodesic
/// from the root (window origin), and which of root+e1 / root+e2 it passes.
class GeodesicTree {
 public:
  Site root() const { return window_.origin(); }
  const LatticeWindow& window() const { return window_; }
  const TiePolicy& policy() const { return policy_; }

  /// Last step into v; empty at the root.
  std::optional<Step> parent_step(Site v) const;
  /// Subtree through root+e1 (Step::E1) or root+e2 (Step::E2); empty at the root.
  std::optional<Step> subtree(Site v) const;
  /// Both predecessors attain the maximum at v.
  bool tie(Site v) const;
  std::span<const Site> ties() const { return ties_; }

  LatticePath path_from_root(Site v) const;

  void export_csv(std::ostream& os) const;  ///< x,y,parent_step,subtree
  void export_svg(std::ostream& os, std::span<const LatticePath> overlay = {}) const;

 private:
  friend GeodesicTree build_tree(const SiteWeightField&, const LatticeWindow&, const TiePolicy&);
  explicit GeodesicTree(TiePolicy p) : policy_(p) {}

  static constexpr std::uint8_t kNone = 0xFF;
  LatticeWindow window_;
  TiePolicy policy_;
  std::vector<std::uint8_t> parent_;
  std::vector<std::uint8_t> label_;
  std::vector<Site> ties_;  // sorted by window index
};

GeodesicTree build_tree(const SiteWeightField& field, const LatticeWindow& window,
                        const TiePolicy& policy);

struct Coalescence {
  Site site;
  std::size_t index1;  ///< position of `site` along the first path
  std::size_t index2;
};

/// First common site after which the two paths agree to their common end.
/// Both paths must end at the same site.
std::optional<Coalescence> coalescence(const LatticePath& p1, const LatticePath& p2);

struct CoalescenceTrial {
  Site sink;
  Site start1, start2;
  Coalescence meet;
  /// Meeting happened within the first `fraction` of the sink's level.
  bool early(double fraction = 0.5) const;
};

/// Policy geodesics from 0 and `offset` to the level-n sink in direction a,
/// on a fresh field with the given seed.
CoalescenceTrial coalescence_trial(const WeightDistribution& dist, std::uint64_t seed,
                                   std::int64_t n, DirectionU xi, Site offset,
                                   const TiePolicy& policy);

struct JunctionCensus {
  std::size_t sources = 0;
  std::size_t merges = 0;  ///< paths that run into a site already claimed by another path
  std::size_t exits = 0;   ///< distinct sites where streams leave the box
  std::size_t junctions = 0;  ///< box sites entered from both west and south
  std::size_t leaves = 0;     ///< box sites no stream enters
  /// merges == sources - exits
  bool forest_identity = false;
  /// junctions == leaves - exits (binary in-degree forest)
  bool binary_identity = false;
  double junction_density = 0.0;
};

/// Census of a family of paths that start at every site of `box`.
JunctionCensus junction_census(std::span<const LatticePath> family, const LatticeWindow& box);

}  // namespace cornerlab
