#pragma once

#include <array>
#include <concepts>
#include <type_traits>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cornerlab/lattice.hpp"

namespace cornerlab {

// Every weight lives on the dyadic grid 2^-30 Z. Path sums of such values are
// exact in double precision as long as they stay below 2^23, so DP maxima and
// gradient identities are compared with ==, never with a tolerance.
inline constexpr int kFixedPointBits = 30;
inline constexpr double kFixedPointScale = 0x1.0p30;

double quantize(double v);
bool on_fixed_point_grid(double v);

class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundaryDirection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

struct Exponential {
  double mean = 1.0;
};

/// P{w = k} = p0 (1-p0)^k on {0,1,2,...}; mean (1-p0)/p0, variance m(m-1) with m = 1/p0.
struct Geometric {
  double p0 = 0.5;
};

/// w = 1 with probability p, w = low otherwise.
struct BernoulliShifted {
  double p = 0.7;
  double low = 0.0;
};

/// Piecewise-linear quantile function through (u_i, value_i), u from 0 to 1.
struct TableInverseCdf {
  std::vector<std::pair<double, double>> breakpoints;
};

enum class WeightRepresentation { Integer, FixedPoint };

class WeightDistribution {
 public:
  using Variant = std::variant<Exponential, Geometric, BernoulliShifted, TableInverseCdf>;

  WeightDistribution(Variant v);  // NOLINT(google-explicit-constructor)
  template <class Law>
    requires(!std::same_as<std::decay_t<Law>, Variant> &&
             std::is_constructible_v<Variant, Law>)
  WeightDistribution(Law law)  // NOLINT(google-explicit-constructor)
      : WeightDistribution(Variant(std::move(law))) {}

  const Variant& variant() const { return law_; }
  std::string name() const;
  std::string describe() const;

  double mean() const;
  double variance() const;
  double stddev() const;

  bool is_exponential() const { return std::holds_alternative<Exponential>(law_); }
  bool is_geometric() const { return std::holds_alternative<Geometric>(law_); }
  /// Exponential or geometric: closed-form shape, Busemann and interface laws.
  bool is_solvable() const { return is_exponential() || is_geometric(); }
  /// The law has atoms, so exact ties occur with positive probability.
  bool is_atomic() const;
  WeightRepresentation representation() const;

  /// Quantile on the fixed-point grid; u in (0,1).
  double quantile(double u) const;
  double cdf(double x) const;
  /// P{w < x}.
  double cdf_left(double x) const;

  friend bool operator==(const WeightDistribution& a, const WeightDistribution& b);

 private:
  Variant law_;
};

bool operator==(const TableInverseCdf& a, const TableInverseCdf& b);
inline bool operator==(const Exponential& a, const Exponential& b) { return a.mean == b.mean; }
inline bool operator==(const Geometric& a, const Geometric& b) { return a.p0 == b.p0; }
inline bool operator==(const BernoulliShifted& a, const BernoulliShifted& b) {
  return a.p == b.p && a.low == b.low;
}

/// Geometric on {0,1,...} with the given mean.
Geometric geometric_with_mean(double mean);

/// A direction xi = (a, 1-a) of the simplex.
class DirectionU {
 public:
  explicit DirectionU(double a);
  double a() const { return a_; }
  double e1() const { return a_; }
  double e2() const { return 1.0 - a_; }
  bool interior() const { return a_ > 0.0 && a_ < 1.0; }

  /// Level-n lattice representative (floor(n a), n - floor(n a)).
  Site lattice_point(std::int64_t n) const;

 private:
  double a_;
};

/// One i.i.d. weight, computed lazily from (seed, site).
double sample_weight(const WeightDistribution& dist, std::uint64_t seed, Site x);

/// Weights over a window. Lazily evaluated or materialized row-major; both
/// give bit-identical values.
class SiteWeightField {
 public:
  SiteWeightField(LatticeWindow window, WeightDistribution dist, std::uint64_t seed,
                  bool materialize = true, int workers = 1);

  /// Hand-specified environment; values row-major over the window and on the
  /// fixed-point grid.
  static SiteWeightField from_values(LatticeWindow window, std::vector<double> values);
  /// Every site carries the same weight.
  static SiteWeightField constant(LatticeWindow window, double c);

  const LatticeWindow& window() const { return window_; }
  const std::optional<WeightDistribution>& distribution() const { return dist_; }
  std::uint64_t seed() const { return seed_; }
  WeightRepresentation representation() const { return representation_; }
  bool materialized() const { return !values_.empty(); }

  double weight_at(Site x) const {
    const std::size_t i = window_.index(x);
    return values_.empty() ? sample_weight(*dist_, seed_, x) : values_[i];
  }
  /// No bounds check; x must be inside the window.
  double unchecked(Site x) const {
    return values_.empty() ? sample_weight(*dist_, seed_, x) : values_[window_.unchecked_index(x)];
  }

  /// Largest |w|. Exact on materialized fields, a high quantile bound otherwise.
  double max_abs_weight() const;
  /// Bound on |path sum| below which double arithmetic on these weights is exact.
  double exact_sum_limit() const;

  void export_csv(std::ostream& os) const;

 private:
  SiteWeightField() = default;

  LatticeWindow window_;
  std::optional<WeightDistribution> dist_;
  std::uint64_t seed_ = 0;
  WeightRepresentation representation_ = WeightRepresentation::FixedPoint;
  std::vector<double> values_;
};

// ---- closed forms for the exactly solvable laws ----------------------------

/// g_pp(x, y) = E(w)(x + y) + 2 sigma sqrt(x y), extended 1-homogeneously.
double shape_exact(const WeightDistribution& dist, double x, double y);
double shape_exact(const WeightDistribution& dist, DirectionU xi);

/// (E(w) + sigma sqrt((1-a)/a), E(w) + sigma sqrt(a/(1-a))), the Busemann means.
std::array<double, 2> shape_gradient_exact(const WeightDistribution& dist, DirectionU xi);

enum class InterfaceSide { Unique, Left, Right };
std::string to_string(InterfaceSide side);

/// Limit law P{theta <= t} of the competition-interface angle.
double interface_angle_cdf_exact(const WeightDistribution& dist, double t, InterfaceSide side);

/// P{xi_*^(r) . e1 > a} for geometric weights.
double right_direction_exceedance_exact(const WeightDistribution& dist, double a);

}  // namespace cornerlab
