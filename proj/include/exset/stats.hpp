#pragma once

#include <functional>
#include <span>
#include <vector>

namespace exset {

double sample_mean(std::span<const double> x);
/// Unbiased sample variance (divisor n - 1).
double sample_variance(std::span<const double> x);
/// Standard error of the sample variance from the fourth central moment,
/// sqrt((m4 - s^4) / n).
double variance_standard_error(std::span<const double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sided one-sample Kolmogorov-Smirnov test against a fully specified CDF.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// P(K > lambda) for the Kolmogorov limit distribution.
double kolmogorov_survival(double lambda);

/// Wilson score interval for a binomial proportion; z defaults to the 99%
/// two-sided normal quantile.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 2.5758293035489);

}  // namespace exset
