#pragma once

#include <functional>
#include <span>

namespace molcomm::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test of sorted samples against a continuous
/// CDF. The p-value uses the asymptotic Kolmogorov distribution with
/// Stephens' small-sample correction. Requires >= 10 ascending samples.
KsResult ks_statistic(std::span<const double> sorted_samples, const std::function<double(double)>& cdf);

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of the mean (n - 1 denominator), using
/// compensated two-pass sums in index order. std_error is 0 for n = 1.
MeanAndError mean_and_error(std::span<const double> values);

}  // namespace molcomm::stats
