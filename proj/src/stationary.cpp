#include "cornerlab/stationary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "cornerlab/parallel.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/stats.hpp"

namespace cornerlab {

std::pair<WeightDistribution, WeightDistribution> boundary_laws(const WeightDistribution& dist,
                                                                DirectionU a) {
  if (!dist.is_solvable()) throw UnsupportedModel("stationary boundary needs exponential or geometric weights");
  if (!a.interior()) throw BoundaryDirection("stationary boundary needs 0 < a < 1");
  const auto [alpha, beta] = shape_gradient_exact(dist, a);
  if (dist.is_exponential()) return {Exponential{alpha}, Exponential{beta}};
  return {geometric_with_mean(alpha), geometric_with_mean(beta)};
}

BoundaryProfile sample_boundary(WeightDistribution horizontal_law, WeightDistribution vertical_law,
                                DirectionU a, std::int64_t length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("boundary length must be positive");
  BoundaryProfile p{a, std::move(horizontal_law), std::move(vertical_law), 0.0, 0.0, {}, {}};
  p.alpha = p.horizontal_law.mean();
  p.beta = p.vertical_law.mean();
  p.horizontal.resize(static_cast<std::size_t>(length));
  p.vertical.resize(static_cast<std::size_t>(length));
  for (std::int64_t k = 1; k <= length; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    p.horizontal[i] = p.horizontal_law.quantile(rng::site_uniform(seed, rng::Stream::BoundaryHorizontal, {k, 0}));
    p.vertical[i] = p.vertical_law.quantile(rng::site_uniform(seed, rng::Stream::BoundaryVertical, {0, k}));
  }
  return p;
}

BoundaryProfile sample_boundary(const WeightDistribution& dist, DirectionU a, std::int64_t length,
                                std::uint64_t seed) {
  auto [h, v] = boundary_laws(dist, a);
  return sample_boundary(std::move(h), std::move(v), a, length, seed);
}

StationaryPlane::StationaryPlane(const BoundaryProfile& profile, const SiteWeightField& bulk)
    : length_(profile.length()), window_({0, 0}, profile.length() + 1, profile.length() + 1) {
  const std::int64_t n = length_;
  if (n < 1 || profile.vertical.size() != profile.horizontal.size()) {
    throw std::invalid_argument("boundary axes must have equal positive length");
  }
  if (!bulk.window().contains(LatticeWindow({1, 1}, n, n))) {
    throw std::invalid_argument("bulk field does not cover (0, L]^2 for L = " + std::to_string(n));
  }
  g_.assign(window_.size(), 0.0);
  w_.assign(window_.size(), 0.0);
  const std::size_t stride = static_cast<std::size_t>(n + 1);
  for (std::int64_t k = 1; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    g_[i] = g_[i - 1] + profile.horizontal[i - 1];
    g_[i * stride] = g_[(i - 1) * stride] + profile.vertical[i - 1];
    w_[i] = profile.horizontal[i - 1];
    w_[i * stride] = profile.vertical[i - 1];
  }
  double peak = 0.0;
  for (std::int64_t y = 1; y <= n; ++y) {
    for (std::int64_t x = 1; x <= n; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x);
      w_[i] = bulk.unchecked({x, y});
      g_[i] = w_[i] + std::max(g_[i - 1], g_[i - stride]);
      peak = std::max(peak, std::abs(g_[i]));
    }
  }
  if (peak > bulk.exact_sum_limit()) throw ArithmeticOverflow("stationary passage values exceed the exact range");
}

double StationaryPlane::weight(Site v) const {
  if (v.x < 1 || v.y < 1) throw OutOfWindow("no bulk weight on the axes: " + to_string(v));
  return w_[window_.index(v)];
}

double StationaryPlane::horizontal(Site v) const {
  if (v.x < 1) throw OutOfWindow("horizontal increment needs x >= 1: " + to_string(v));
  return at(v) - at(v - kE1);
}

double StationaryPlane::vertical(Site v) const {
  if (v.y < 1) throw OutOfWindow("vertical increment needs y >= 1: " + to_string(v));
  return at(v) - at(v - kE2);
}

IdentityReport StationaryPlane::check_recovery() const {
  IdentityReport rep;
  for (std::int64_t y = 1; y <= length_; ++y) {
    for (std::int64_t x = 1; x <= length_; ++x) {
      const Site v{x, y};
      ++rep.checked;
      if (std::min(horizontal(v), vertical(v)) != weight(v) && rep.violations++ == 0) rep.first_violation = v;
    }
  }
  return rep;
}

IdentityReport StationaryPlane::check_closure() const {
  IdentityReport rep;
  for (std::int64_t y = 1; y <= length_; ++y) {
    for (std::int64_t x = 1; x <= length_; ++x) {
      const Site v{x, y};
      ++rep.checked;
      if (horizontal(v) + vertical(v - kE1) != vertical(v) + horizontal(v - kE2) && rep.violations++ == 0) {
        rep.first_violation = v;
      }
    }
  }
  return rep;
}

void StationaryPlane::export_increments_csv(std::ostream& os) const {
  auto put = [&os](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    os << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
  };
  os << "x,y,I,J,w\n";
  for (std::int64_t y = 1; y <= length_; ++y) {
    for (std::int64_t x = 1; x <= length_; ++x) {
      const Site v{x, y};
      os << x << ',' << y << ',';
      put(horizontal(v));
      os << ',';
      put(vertical(v));
      os << ',';
      put(weight(v));
      os << '\n';
    }
  }
}

namespace {

constexpr std::size_t kMaxLag = 5;

struct ReplicateStats {
  double far_sample = 0.0;
  double row_ks = 0.0;
  double row_sum = 0.0, row_sq = 0.0, col_sum = 0.0, col_sq = 0.0;
  double shape = 0.0;
  std::array<double, kMaxLag + 1> lag{};  // lag[0] is the sum of squares
  std::size_t recovery = 0, closure = 0;
};

}  // namespace

StationarityReport stationarity_tests(const WeightDistribution& dist, DirectionU a, std::int64_t length,
                                      std::size_t replicates, std::uint64_t seed, int workers) {
  if (replicates < 100) throw std::invalid_argument("stationarity tests need at least 100 replicates");
  if (length < 2) throw std::invalid_argument("stationarity tests need L >= 2");
  const auto [hlaw, vlaw] = boundary_laws(dist, a);
  StationarityReport rep{.distribution = dist, .direction = a};
  rep.length = length;
  rep.replicates = replicates;
  rep.seed = seed;
  rep.alpha = hlaw.mean();
  rep.beta = vlaw.mean();
  const double sda = hlaw.stddev(), sdb = vlaw.stddev();
  const Site target = a.lattice_point(length);
  rep.shape_target = a.a() * rep.alpha + (1.0 - a.a()) * rep.beta;
  const std::int64_t mid = (length + 1) / 2;
  auto hcdf = [&](double x) { return hlaw.cdf(x); };
  auto hcdf_left = [&](double x) { return hlaw.cdf_left(x); };

  std::vector<ReplicateStats> per(replicates);
  parallel_for(replicates, workers, [&](std::size_t r) {
    const std::uint64_t s = rng::derive_seed(seed, r);
    const BoundaryProfile prof = sample_boundary(hlaw, vlaw, a, length, s);
    const SiteWeightField bulk(LatticeWindow({1, 1}, length, length), dist, s, /*materialize=*/false);
    const StationaryPlane plane(prof, bulk);
    ReplicateStats& st = per[r];
    st.recovery = plane.check_recovery().violations;
    st.closure = plane.check_closure().violations;
    st.far_sample = plane.horizontal({mid, length});
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(length));
    for (std::int64_t k = 1; k <= length; ++k) {
      const double i = plane.horizontal({k, length});
      const double j = plane.vertical({length, k});
      row.push_back(i);
      st.row_sum += i;
      st.row_sq += i * i;
      st.col_sum += j;
      st.col_sq += j * j;
    }
    st.row_ks = sda > 0 ? stats::ks_statistic(std::move(row), hcdf, hcdf_left) : 0.0;
    st.shape = plane.at(target) / static_cast<double>(length);
    // staircase (0,L) -> (1,L) -> (1,L-1) -> ... -> (L,0)
    std::vector<double> z;
    z.reserve(2 * static_cast<std::size_t>(length));
    for (std::int64_t k = 1; k <= length; ++k) {
      const Site h{k, length - k + 1};
      z.push_back(sda > 0 ? (plane.horizontal(h) - rep.alpha) / sda : 0.0);
      z.push_back(sdb > 0 ? (plane.vertical(h) - rep.beta) / sdb : 0.0);
    }
    for (std::size_t lag = 0; lag <= kMaxLag; ++lag) {
      for (std::size_t i = 0; i + lag < z.size(); ++i) st.lag[lag] += z[i] * z[i + lag];
    }
  });

  std::vector<double> far, shapes;
  double rs = 0, rq = 0, cs = 0, cq = 0;
  std::array<double, kMaxLag + 1> lag{};
  for (const auto& st : per) {
    far.push_back(st.far_sample);
    shapes.push_back(st.shape);
    rep.ks_row_mean += st.row_ks / static_cast<double>(replicates);
    rs += st.row_sum;
    rq += st.row_sq;
    cs += st.col_sum;
    cq += st.col_sq;
    for (std::size_t l = 0; l <= kMaxLag; ++l) lag[l] += st.lag[l];
    rep.recovery_violations += st.recovery;
    rep.closure_violations += st.closure;
  }
  rep.ks_far_row = sda > 0 ? stats::ks_statistic(far, hcdf, hcdf_left) : 0.0;
  rep.ks_far_row_pvalue = stats::ks_pvalue(rep.ks_far_row, far.size());

  const double cnt = static_cast<double>(replicates) * static_cast<double>(length);
  auto se = [cnt](double sum, double sq) {
    const double m = sum / cnt;
    return std::sqrt(std::max(0.0, sq / cnt - m * m) / cnt);
  };
  rep.mean_horizontal = rs / cnt;
  rep.se_horizontal = se(rs, rq);
  rep.mean_vertical = cs / cnt;
  rep.se_vertical = se(cs, cq);
  rep.shape_ratio = stats::mean(shapes);
  rep.se_shape_ratio = stats::standard_error(shapes);

  rep.staircase_samples = replicates * 2 * static_cast<std::size_t>(length);
  rep.autocorrelation_bound = 3.0 / std::sqrt(static_cast<double>(rep.staircase_samples));
  for (std::size_t l = 1; l <= kMaxLag; ++l) rep.autocorrelation.push_back(lag[0] > 0 ? lag[l] / lag[0] : 0.0);
  return rep;
}

}  // namespace cornerlab
