#include "molcomm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "molcomm/numerics.hpp"

namespace molcomm::stats {

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  if (x < 1.18) {
    // Theta-function form, fast for small x.
    const double y = std::exp(-pi2 / (8.0 * x * x));
    double sum = 0.0;
    for (int k = 1; k <= 7; k += 2) sum += std::pow(y, k * k);
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_statistic(std::span<const double> sorted_samples,
                      const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n < 10) throw std::invalid_argument("ks_statistic needs at least 10 samples");
  if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end())) {
    throw std::invalid_argument("ks_statistic needs samples sorted ascending");
  }
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_samples[i]);
    const double above = static_cast<double>(i + 1) / nd - f;
    const double below = f - static_cast<double>(i) / nd;
    d = std::max({d, above, below});
  }
  const double root = std::sqrt(nd);
  return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

MeanAndError mean_and_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("mean_and_error of an empty sample");
  const double mean = numerics::compensated_sum(values) / static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  numerics::CompensatedSum squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  const double variance = squares.value() / static_cast<double>(n - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n))};
}

}  // namespace molcomm::stats
