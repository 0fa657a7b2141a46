#include "molcomm/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "molcomm/channel.hpp"
#include "molcomm/geometry.hpp"
#include "molcomm/parallel.hpp"

namespace molcomm::expectation {

namespace {

constexpr double kPi = std::numbers::pi;

using FractionFn = double (*)(double, double, double, double) noexcept;

FractionFn fraction_for(ReceiverKind kind) {
  return kind == ReceiverKind::FullyAbsorbing ? &channel::fa_fraction_raw
                                              : &channel::ps_fraction_raw;
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("expectation time must be finite and >= 0");
  }
}

// int_{r_r}^inf F(x, t) f_nearest(x) dx
double nearest_integral(FractionFn frac, const Scenario& s, double t, const EngineOptions& opts) {
  const double lambda = s.field.active_density();
  const double rr = s.receiver.radius;
  const double d = s.environment.diffusion_coefficient;
  auto integrand = [&](double x) {
    const double f = frac(x, t, d, rr);
    if (f == 0.0) return 0.0;
    return f * geometry::nearest_pdf_3d(x, lambda, rr);
  };
  return numerics::integrate_semi_infinite(integrand, rr, opts.quadrature).value;
}

// int_{lower}^inf F(r, t) r^2 dr
double campbell_integral(FractionFn frac, const Scenario& s, double lower, double t,
                         const numerics::QuadratureOptions& q) {
  const double rr = s.receiver.radius;
  const double d = s.environment.diffusion_coefficient;
  auto integrand = [&](double r) { return frac(r, t, d, rr) * r * r; };
  return numerics::integrate_semi_infinite(integrand, lower, q).value;
}

// int_{r_r}^inf [int_x^inf F(r, t) r^2 dr] x^2 exp(-lambda_a V(x)) dx
double interferer_integral(FractionFn frac, const Scenario& s, double t,
                           const EngineOptions& opts) {
  const double lambda = s.field.active_density();
  const double rr = s.receiver.radius;
  // Half of the error budget goes to the inner integral; its absolute
  // tolerance is scaled down so it stays below the outer resolution.
  numerics::QuadratureOptions inner = opts.quadrature;
  inner.rel_tol *= 0.5;
  inner.abs_tol *= 1e-3;
  numerics::QuadratureOptions outer = opts.quadrature;
  outer.rel_tol *= 0.5;
  auto integrand = [&](double x) {
    const double weight =
        x * x * std::exp(-lambda * (4.0 / 3.0) * kPi * (x - rr) * (x * x + x * rr + rr * rr));
    if (weight == 0.0) return 0.0;
    return weight * campbell_integral(frac, s, x, t, inner);
  };
  return numerics::integrate_semi_infinite(integrand, rr, outer).value;
}

double e_nearest(ReceiverKind kind, const Scenario& s, double t, const EngineOptions& opts) {
  require_time(t);
  if (t == 0.0 || s.field.active_density() == 0.0) return 0.0;
  return s.field.pulse_amplitude * nearest_integral(fraction_for(kind), s, t, opts);
}

double e_interferers(ReceiverKind kind, const Scenario& s, double t, const EngineOptions& opts) {
  require_time(t);
  const double lambda = s.field.active_density();
  if (t == 0.0 || lambda == 0.0) return 0.0;
  const double scale = 4.0 * kPi * lambda;
  return s.field.pulse_amplitude * scale * scale *
         interferer_integral(fraction_for(kind), s, t, opts);
}

double campbell_total(ReceiverKind kind, const Scenario& s, double lower, double t,
                      const EngineOptions& opts) {
  require_time(t);
  const double lambda = s.field.active_density();
  if (t == 0.0 || lambda == 0.0 || std::isinf(lower)) return 0.0;
  return 4.0 * kPi * s.field.pulse_amplitude * lambda *
         campbell_integral(fraction_for(kind), s, lower, t, opts.quadrature);
}

double level(ReceiverKind kind, Component c, const Scenario& s, double t,
             const EngineOptions& opts) {
  switch (c) {
    case Component::Nearest:
      return e_nearest(kind, s, t, opts);
    case Component::Interferers:
      return e_interferers(kind, s, t, opts);
    case Component::All:
      return kind == ReceiverKind::FullyAbsorbing ? e_all_fa_closed(s, t) : e_all_ps(s, t, opts);
  }
  throw std::logic_error("unhandled component");
}

}  // namespace

double e_nearest_fa(const Scenario& s, double t, const EngineOptions& opts) {
  return e_nearest(ReceiverKind::FullyAbsorbing, s, t, opts);
}

double e_interferers_fa(const Scenario& s, double t, const EngineOptions& opts) {
  return e_interferers(ReceiverKind::FullyAbsorbing, s, t, opts);
}

double e_all_fa_closed(const Scenario& s, double t) {
  require_time(t);
  const double d = s.environment.diffusion_coefficient;
  const double rr = s.receiver.radius;
  const double sqrt_pi = std::sqrt(kPi);
  return 4.0 * s.field.pulse_amplitude * sqrt_pi * s.field.active_density() * rr *
         (d * sqrt_pi * t + 2.0 * rr * std::sqrt(d * t));
}

double e_all_fa_net(const Scenario& s, double t, double t_ss) {
  require_time(t);
  if (!(t_ss > 0.0)) throw std::domain_error("sampling interval must be positive");
  const double d = s.environment.diffusion_coefficient;
  const double rr = s.receiver.radius;
  const double sqrt_pi = std::sqrt(kPi);
  return 4.0 * s.field.pulse_amplitude * sqrt_pi * s.field.active_density() * rr *
         (d * sqrt_pi * t_ss + 2.0 * std::sqrt(d) * rr * (std::sqrt(t_ss + t) - std::sqrt(t)));
}

double e_nearest_ps(const Scenario& s, double t, const EngineOptions& opts) {
  return e_nearest(ReceiverKind::Passive, s, t, opts);
}

double e_interferers_ps(const Scenario& s, double t, const EngineOptions& opts) {
  return e_interferers(ReceiverKind::Passive, s, t, opts);
}

double e_all_ps(const Scenario& s, double t, const EngineOptions& opts) {
  return campbell_total(ReceiverKind::Passive, s, s.receiver.radius, t, opts);
}

double e_all_ps_net(const Scenario& s, double t, double t_ss, const EngineOptions& opts) {
  if (!(t_ss > 0.0)) throw std::domain_error("sampling interval must be positive");
  return e_all_ps(s, t + t_ss, opts) - e_all_ps(s, t, opts);
}

double e_all_by_quadrature(const Scenario& s, double t, const EngineOptions& opts) {
  return campbell_total(s.receiver.kind, s, s.receiver.radius, t, opts);
}

double truncation_tail(const Scenario& s, double big_r, double t, const EngineOptions& opts) {
  if (std::isinf(big_r)) return 0.0;
  return campbell_total(s.receiver.kind, s, std::max(big_r, s.receiver.radius), t, opts);
}

ExpectationBreakdown breakdown(const Scenario& s, double t, const EngineOptions& opts) {
  const auto kind = s.receiver.kind;
  ExpectationBreakdown b;
  b.e_nearest = e_nearest(kind, s, t, opts);
  b.e_interferers = e_interferers(kind, s, t, opts);
  if (kind == ReceiverKind::FullyAbsorbing) {
    b.e_all = e_all_fa_closed(s, t);
    b.method = Method::ClosedForm;
  } else {
    b.e_all = e_all_ps(s, t, opts);
    b.method = Method::Quadrature;
  }
  return b;
}

SignalCurve analytic_curve(const Scenario& s, Component component, const EngineOptions& opts) {
  const auto kind = s.receiver.kind;
  const auto times = record_times(s.sampling);
  std::vector<double> levels(times.size());
  parallel_for(times.size(), opts.threads,
               [&](std::size_t i) { levels[i] = level(kind, component, s, times[i], opts); });

  SignalCurve curve;
  curve.engine = "analytic";
  curve.receiver = kind;
  curve.component = component;
  const double tss = s.sampling.sampling_interval;
  for (double t : s.sampling.t_grid) {
    CurvePoint p;
    p.t = t;
    p.level = levels[nearest_record_index(times, t)];
    if (kind == ReceiverKind::FullyAbsorbing && component == Component::All) {
      p.net = e_all_fa_net(s, t, tss);
    } else {
      p.net = levels[nearest_record_index(times, t + tss)] - p.level;
    }
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace molcomm::expectation
