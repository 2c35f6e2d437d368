#include "cornerlab/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cornerlab/parallel.hpp"
#include "cornerlab/rng.hpp"

namespace cornerlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Smallest uniform produced by rng::to_open_unit.
constexpr double kMinUniform = 0x1.0p-54;

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void validate(const Exponential& e) {
  if (!(e.mean > 0.0) || !std::isfinite(e.mean)) {
    throw std::invalid_argument("exponential mean must be positive");
  }
}
void validate(const Geometric& g) {
  if (!(g.p0 > 0.0 && g.p0 <= 1.0)) {
    throw std::invalid_argument("geometric success probability must lie in (0,1]");
  }
}
void validate(const BernoulliShifted& b) {
  if (!(b.p > 0.0 && b.p < 1.0)) throw std::invalid_argument("bernoulli p must lie in (0,1)");
  if (!(b.low < 1.0)) throw std::invalid_argument("bernoulli low value must be below 1");
  if (!on_fixed_point_grid(b.low)) {
    throw std::invalid_argument("bernoulli low value must be a multiple of 2^-30");
  }
}
void validate(const TableInverseCdf& t) {
  const auto& bp = t.breakpoints;
  if (bp.size() < 2) throw std::invalid_argument("table needs at least two breakpoints");
  if (bp.front().first != 0.0 || bp.back().first != 1.0) {
    throw std::invalid_argument("table breakpoints must span u in [0,1]");
  }
  for (std::size_t i = 1; i < bp.size(); ++i) {
    if (!(bp[i].first > bp[i - 1].first) || bp[i].second < bp[i - 1].second) {
      throw std::invalid_argument("table breakpoints must be strictly increasing in u and "
                                  "nondecreasing in value");
    }
  }
}

double table_quantile(const TableInverseCdf& t, double u) {
  const auto& bp = t.breakpoints;
  auto it = std::upper_bound(bp.begin(), bp.end(), u,
                             [](double val, const auto& p) { return val < p.first; });
  if (it == bp.begin()) return bp.front().second;
  if (it == bp.end()) return bp.back().second;
  const auto& [u1, v1] = *it;
  const auto& [u0, v0] = *(it - 1);
  return v0 + (v1 - v0) * (u - u0) / (u1 - u0);
}

double table_cdf(const TableInverseCdf& t, double x, bool left) {
  const auto& bp = t.breakpoints;
  if (x < bp.front().second) return 0.0;
  if (x > bp.back().second) return 1.0;
  // largest u with Q(u) <= x (or < x for the left limit)
  double best = 0.0;
  for (std::size_t i = 1; i < bp.size(); ++i) {
    const auto& [u0, v0] = bp[i - 1];
    const auto& [u1, v1] = bp[i];
    if (v1 == v0) {
      if (left ? v0 < x : v0 <= x) best = u1;
      continue;
    }
    if (left ? v1 < x : v1 <= x) {
      best = u1;
    } else if (v0 < x || (!left && v0 == x)) {
      best = std::max(best, u0 + (u1 - u0) * (x - v0) / (v1 - v0));
    }
  }
  return best;
}

}  // namespace

double quantize(double v) { return std::nearbyint(v * kFixedPointScale) / kFixedPointScale; }

bool on_fixed_point_grid(double v) { return std::isfinite(v) && quantize(v) == v; }

WeightDistribution::WeightDistribution(Variant v) : law_(std::move(v)) {
  std::visit([](const auto& law) { validate(law); }, law_);
}

std::string WeightDistribution::name() const {
  return std::visit(Overloaded{[](const Exponential&) { return std::string("exponential"); },
                               [](const Geometric&) { return std::string("geometric"); },
                               [](const BernoulliShifted&) { return std::string("bernoulli"); },
                               [](const TableInverseCdf&) { return std::string("table"); }},
                    law_);
}

std::string WeightDistribution::describe() const {
  return std::visit(
      Overloaded{
          [](const Exponential& e) { return "exponential(mean=" + shortest(e.mean) + ")"; },
          [](const Geometric& g) { return "geometric(p0=" + shortest(g.p0) + ")"; },
          [](const BernoulliShifted& b) {
            return "bernoulli(p=" + shortest(b.p) + ",low=" + shortest(b.low) + ")";
          },
          [](const TableInverseCdf& t) {
            return "table(" + std::to_string(t.breakpoints.size()) + " breakpoints)";
          }},
      law_);
}

double WeightDistribution::mean() const {
  return std::visit(Overloaded{[](const Exponential& e) { return e.mean; },
                               [](const Geometric& g) { return (1.0 - g.p0) / g.p0; },
                               [](const BernoulliShifted& b) { return b.p + (1.0 - b.p) * b.low; },
                               [](const TableInverseCdf& t) {
                                 double m = 0.0;
                                 const auto& bp = t.breakpoints;
                                 for (std::size_t i = 1; i < bp.size(); ++i) {
                                   m += (bp[i].first - bp[i - 1].first) *
                                        (bp[i].second + bp[i - 1].second) / 2.0;
                                 }
                                 return m;
                               }},
                    law_);
}

double WeightDistribution::variance() const {
  return std::visit(
      Overloaded{[](const Exponential& e) { return e.mean * e.mean; },
                 [](const Geometric& g) {
                   const double m = 1.0 / g.p0;
                   return m * (m - 1.0);
                 },
                 [](const BernoulliShifted& b) {
                   const double d = 1.0 - b.low;
                   return b.p * (1.0 - b.p) * d * d;
                 },
                 [this](const TableInverseCdf& t) {
                   double second = 0.0;
                   const auto& bp = t.breakpoints;
                   for (std::size_t i = 1; i < bp.size(); ++i) {
                     const double v0 = bp[i - 1].second, v1 = bp[i].second;
                     second += (bp[i].first - bp[i - 1].first) * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
                   }
                   const double m = mean();
                   return std::max(0.0, second - m * m);
                 }},
      law_);
}

double WeightDistribution::stddev() const { return std::sqrt(variance()); }

bool WeightDistribution::is_atomic() const {
  return std::visit(Overloaded{[](const Exponential&) { return false; },
                               [](const Geometric&) { return true; },
                               [](const BernoulliShifted&) { return true; },
                               [](const TableInverseCdf& t) {
                                 const auto& bp = t.breakpoints;
                                 for (std::size_t i = 1; i < bp.size(); ++i) {
                                   if (bp[i].second == bp[i - 1].second) return true;
                                 }
                                 return false;
                               }},
                    law_);
}

WeightRepresentation WeightDistribution::representation() const {
  if (is_geometric()) return WeightRepresentation::Integer;
  if (const auto* b = std::get_if<BernoulliShifted>(&law_); b && std::floor(b->low) == b->low) {
    return WeightRepresentation::Integer;
  }
  return WeightRepresentation::FixedPoint;
}

double WeightDistribution::quantile(double u) const {
  return std::visit(
      Overloaded{[u](const Exponential& e) { return quantize(-e.mean * std::log(u)); },
                 [u](const Geometric& g) {
                   if (g.p0 >= 1.0) return 0.0;
                   return std::floor(std::log(u) / std::log1p(-g.p0));
                 },
                 // high value on the lower u-range keeps the quantile monotone
                 [u](const BernoulliShifted& b) { return u < 1.0 - b.p ? b.low : 1.0; },
                 [u](const TableInverseCdf& t) { return quantize(table_quantile(t, u)); }},
      law_);
}

double WeightDistribution::cdf(double x) const {
  return std::visit(
      Overloaded{[x](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-x / e.mean); },
                 [x](const Geometric& g) {
                   if (x < 0.0) return 0.0;
                   return 1.0 - std::pow(1.0 - g.p0, std::floor(x) + 1.0);
                 },
                 [x](const BernoulliShifted& b) {
                   if (x < b.low) return 0.0;
                   return x < 1.0 ? 1.0 - b.p : 1.0;
                 },
                 [x](const TableInverseCdf& t) { return table_cdf(t, x, false); }},
      law_);
}

double WeightDistribution::cdf_left(double x) const {
  return std::visit(
      Overloaded{[x](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-x / e.mean); },
                 [x](const Geometric& g) {
                   if (x <= 0.0) return 0.0;
                   return 1.0 - std::pow(1.0 - g.p0, std::ceil(x));
                 },
                 [x](const BernoulliShifted& b) {
                   if (x <= b.low) return 0.0;
                   return x <= 1.0 ? 1.0 - b.p : 1.0;
                 },
                 [x](const TableInverseCdf& t) { return table_cdf(t, x, true); }},
      law_);
}

bool operator==(const TableInverseCdf& a, const TableInverseCdf& b) {
  return a.breakpoints == b.breakpoints;
}

bool operator==(const WeightDistribution& a, const WeightDistribution& b) {
  return a.law_ == b.law_;
}

Geometric geometric_with_mean(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("geometric mean must be nonnegative");
  return Geometric{1.0 / (1.0 + mean)};
}

DirectionU::DirectionU(double a) : a_(a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("direction a must lie in [0,1]");
}

Site DirectionU::lattice_point(std::int64_t n) const {
  const auto k = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * a_));
  return {k, n - k};
}

double sample_weight(const WeightDistribution& dist, std::uint64_t seed, Site x) {
  return dist.quantile(rng::site_uniform(seed, rng::Stream::Bulk, x));
}

SiteWeightField::SiteWeightField(LatticeWindow window, WeightDistribution dist,
                                 std::uint64_t seed, bool materialize, int workers)
    : window_(window), dist_(std::move(dist)), seed_(seed),
      representation_(dist_->representation()) {
  if (!materialize) return;
  values_.resize(window_.size());
  parallel_for(static_cast<std::size_t>(window_.height()), workers, [&](std::size_t row) {
    const std::size_t base = row * static_cast<std::size_t>(window_.width());
    for (std::int64_t c = 0; c < window_.width(); ++c) {
      values_[base + static_cast<std::size_t>(c)] =
          sample_weight(*dist_, seed_, window_.site(base + static_cast<std::size_t>(c)));
    }
  });
}

SiteWeightField SiteWeightField::from_values(LatticeWindow window, std::vector<double> values) {
  if (values.size() != window.size()) {
    throw std::invalid_argument("value count does not match the window");
  }
  SiteWeightField f;
  f.window_ = window;
  bool integral = true;
  for (double v : values) {
    if (!on_fixed_point_grid(v)) {
      throw std::invalid_argument("explicit weights must be finite multiples of 2^-30");
    }
    integral = integral && std::floor(v) == v;
  }
  f.representation_ = integral ? WeightRepresentation::Integer : WeightRepresentation::FixedPoint;
  f.values_ = std::move(values);
  return f;
}

SiteWeightField SiteWeightField::constant(LatticeWindow window, double c) {
  return from_values(window, std::vector<double>(window.size(), c));
}

double SiteWeightField::max_abs_weight() const {
  if (!values_.empty()) {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  return std::visit(
      Overloaded{[](const Exponential& e) { return -e.mean * std::log(kMinUniform) + 1.0; },
                 [](const Geometric& g) {
                   return g.p0 >= 1.0 ? 0.0 : std::floor(std::log(kMinUniform) / std::log1p(-g.p0));
                 },
                 [](const BernoulliShifted& b) { return std::max(1.0, std::abs(b.low)); },
                 [](const TableInverseCdf& t) {
                   return std::max(std::abs(t.breakpoints.front().second),
                                   std::abs(t.breakpoints.back().second));
                 }},
      dist_->variant());
}

double SiteWeightField::exact_sum_limit() const {
  return representation_ == WeightRepresentation::Integer ? 0x1.0p53 : 0x1.0p23;
}

void SiteWeightField::export_csv(std::ostream& os) const {
  os << "x,y,weight\n";
  char buf[32];
  for (std::size_t i = 0; i < window_.size(); ++i) {
    const Site s = window_.site(i);
    auto res = std::to_chars(buf, buf + sizeof buf, unchecked(s));
    os << s.x << ',' << s.y << ',' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

// ---- closed forms ----------------------------------------------------------

namespace {

void require_solvable(const WeightDistribution& dist) {
  if (!dist.is_solvable()) {
    throw UnsupportedModel("closed form available only for exponential and geometric weights, got " +
                           dist.name());
  }
}

double atom_parameter(const WeightDistribution& dist) {
  if (const auto* g = std::get_if<Geometric>(&dist.variant())) return g->p0;
  return 0.0;
}

}  // namespace

double shape_exact(const WeightDistribution& dist, double x, double y) {
  require_solvable(dist);
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("shape function needs a nonnegative vector");
  return dist.mean() * (x + y) + 2.0 * dist.stddev() * std::sqrt(x * y);
}

double shape_exact(const WeightDistribution& dist, DirectionU xi) {
  return shape_exact(dist, xi.e1(), xi.e2());
}

std::array<double, 2> shape_gradient_exact(const WeightDistribution& dist, DirectionU xi) {
  require_solvable(dist);
  if (!xi.interior()) {
    throw BoundaryDirection("shape gradient diverges at boundary direction a=" + shortest(xi.a()));
  }
  const double m = dist.mean();
  const double s = dist.stddev();
  const double a = xi.a();
  return {m + s * std::sqrt((1.0 - a) / a), m + s * std::sqrt(a / (1.0 - a))};
}

std::string to_string(InterfaceSide side) {
  switch (side) {
    case InterfaceSide::Unique: return "unique";
    case InterfaceSide::Left: return "left";
    case InterfaceSide::Right: return "right";
  }
  return "?";
}

double interface_angle_cdf_exact(const WeightDistribution& dist, double t, InterfaceSide side) {
  require_solvable(dist);
  if (!(t >= 0.0 && t <= std::numbers::pi / 2)) {
    throw std::invalid_argument("angle must lie in [0, pi/2]");
  }
  const double q = 1.0 - atom_parameter(dist);
  if (side == InterfaceSide::Unique && dist.is_geometric() && q < 1.0) {
    throw UnsupportedModel("geometric weights have distinct left and right interfaces");
  }
  const double s = std::sin(t);
  const double c = std::max(0.0, std::cos(t));
  if (side == InterfaceSide::Left) {
    const double num = std::sqrt(s);
    const double den = num + std::sqrt(q * c);
    return den == 0.0 ? 0.0 : num / den;
  }
  const double num = std::sqrt(q * s);
  const double den = num + std::sqrt(c);
  return den == 0.0 ? 0.0 : num / den;
}

double right_direction_exceedance_exact(const WeightDistribution& dist, double a) {
  const auto* g = std::get_if<Geometric>(&dist.variant());
  if (g == nullptr) throw UnsupportedModel("right-direction exceedance needs geometric weights");
  if (!(a > 0.0 && a < 1.0)) throw BoundaryDirection("a must lie in (0,1)");
  const double m = 1.0 / g->p0;
  const double num = std::sqrt((m - 1.0) * (1.0 - a));
  return num / (std::sqrt(m * a) + num);
}

}  // namespace cornerlab
