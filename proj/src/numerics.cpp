#include "molcomm/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace molcomm::numerics {

namespace {

// Kronrod nodes (positive half) and weights for the 7/15 pair.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const { return l.error < r.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * pair;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * pair;
  }
  kronrod *= half;
  gauss *= half;
  // The raw |K - G| difference is a pessimistic bound for smooth integrands;
  // the QUADPACK rescaling is not used so the estimate stays conservative.
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts) {
  if (!(a < b)) {
    if (a == b) return {};
    throw std::invalid_argument("integrate_finite: require a < b");
  }
  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  auto first = gauss_kronrod(f, a, b);
  CompensatedSum total;
  double value = first.value;
  double error = first.error;
  std::size_t evaluations = 15;
  heap.push(first);

  std::size_t subdivisions = 0;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (subdivisions >= opts.max_subdivisions) {
      throw QuadratureError("quadrature did not converge", {value, error, evaluations});
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("quadrature interval collapsed", {value, error, evaluations});
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    evaluations += 30;
    ++subdivisions;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (!std::isfinite(value)) {
      throw QuadratureError("non-finite integrand value", {value, error, evaluations});
    }
  }

  // Re-sum the final partition so the running updates do not leak round-off.
  // Segments are sorted by left endpoint so the result is independent of
  // heap internals.
  std::vector<Segment> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  CompensatedSum err_sum;
  for (const auto& p : parts) {
    total.add(p.value);
    err_sum.add(p.error);
  }
  return {total.value(), err_sum.value(), evaluations};
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureOptions& opts) {
  auto mapped = [&f, a](double u) {
    const double one_minus = 1.0 - u;
    const double x = a + u / one_minus;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx / (one_minus * one_minus);
  };
  return integrate_finite(mapped, 0.0, 1.0, opts);
}

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double x_tol,
                 int max_iter) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw std::invalid_argument("find_root: bracket has no sign change");
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

}  // namespace molcomm::numerics
