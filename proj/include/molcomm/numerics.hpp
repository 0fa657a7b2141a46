#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace molcomm::numerics {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_subdivisions = 4000;
};

/// Raised when adaptive subdivision runs out of budget. Carries the best
/// estimate reached so callers can decide whether it is good enough.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  [[nodiscard]] const QuadratureResult& best_estimate() const noexcept { return best_; }

 private:
  QuadratureResult best_;
};

using Integrand = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod over [a, b]; the interval with the largest
/// error estimate is bisected until the global estimate meets
/// max(abs_tol, rel_tol * |value|).
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts = {});

/// Integral over [a, inf) through x = a + u / (1 - u), u in [0, 1).
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureOptions& opts = {});

double erf(double x);
double erfc(double x);

/// Neumaier-compensated sum, evaluated left to right.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values);

/// Brent's method on a sign-changing bracket.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-13, int max_iter = 200);

}  // namespace molcomm::numerics
