#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cornerlab::stats {

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  ///< unbiased
double standard_error(std::span<const double> xs);
double median(std::vector<double> xs);

/// sup_x |F_n(x) - F(x)|. `cdf_left` gives P{X < x}; pass it for laws with
/// atoms, omit it for continuous laws.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left = {});

/// Two-sided asymptotic p-value of a KS distance on n samples.
double ks_pvalue(double distance, std::size_t n);

/// Sample autocorrelation at `lag` around the sample mean.
double autocorrelation(std::span<const double> xs, std::size_t lag);

struct Histogram {
  double lo = 0.0, hi = 1.0;
  std::vector<std::size_t> counts;
};
Histogram histogram(std::span<const double> xs, double lo, double hi, std::size_t bins);

}  // namespace cornerlab::stats
