#include "molcomm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace molcomm::channel {

namespace {

// erfc(30) ~ 2.6e-393: beyond double range, every response is exactly 0.
constexpr double kFarArgument = 30.0;

void require_outside(const ChannelQuery& q) {
  if (!(q.receiver.radius > 0.0)) throw DomainError("receiver radius must be positive");
  if (!(q.env.diffusion_coefficient >= 0.0) || !std::isfinite(q.env.diffusion_coefficient)) {
    throw DomainError("diffusion coefficient must be finite and nonnegative");
  }
  if (!(q.distance >= q.receiver.radius)) {
    throw DomainError("transmitter distance " + std::to_string(q.distance) +
                      " lies inside the receiver (radius " +
                      std::to_string(q.receiver.radius) + ")");
  }
  if (q.time < 0.0) throw DomainError("time must be nonnegative");
}

}  // namespace

double fa_fraction_raw(double x, double t, double diffusion, double rr) noexcept {
  if (t <= 0.0) return 0.0;
  if (diffusion == 0.0) return x <= rr ? 1.0 : 0.0;  // frozen molecule on the surface
  const double arg = (x - rr) / std::sqrt(4.0 * diffusion * t);
  if (arg > kFarArgument) return 0.0;
  return rr / x * std::erfc(arg);
}

double ps_fraction_raw(double x, double t, double diffusion, double rr) noexcept {
  if (t <= 0.0) return 0.0;
  if (diffusion == 0.0) return x < rr ? 1.0 : (x == rr ? 0.5 : 0.0);  // limit D -> 0
  const double dt = diffusion * t;
  const double root = std::sqrt(dt);
  const double near_arg = (x - rr) / (2.0 * root);
  if (near_arg > kFarArgument) return 0.0;
  const double far_arg = (x + rr) / (2.0 * root);
  // 0.5 [erf((rr - x)/2s) + erf((rr + x)/2s)] rewritten with erfc so that the
  // x > rr case does not cancel -1 against +1.
  const double volume_term = 0.5 * (std::erfc(near_arg) - std::erfc(far_arg));
  // exp(-(x+rr)^2/4Dt) - exp(-(x-rr)^2/4Dt) = exp(-(x-rr)^2/4Dt) expm1(-rr x / Dt)
  const double gaussian_diff = std::exp(-near_arg * near_arg) * std::expm1(-rr * x / dt);
  const double surface_term = root / (std::sqrt(std::numbers::pi) * x) * gaussian_diff;
  return std::max(0.0, volume_term + surface_term);
}

double fa_fraction(const ChannelQuery& q) {
  require_outside(q);
  return fa_fraction_raw(q.distance, q.time, q.env.diffusion_coefficient, q.receiver.radius);
}

double ps_point_concentration(const ChannelQuery& q) {
  if (!(q.time > 0.0)) throw DomainError("point concentration requires time > 0");
  if (q.distance < 0.0) throw DomainError("distance must be nonnegative");
  const double four_dt = 4.0 * q.env.diffusion_coefficient * q.time;
  return std::pow(std::numbers::pi * four_dt, -1.5) *
         std::exp(-q.distance * q.distance / four_dt);
}

double ps_fraction_exact(const ChannelQuery& q) {
  if (q.distance == 0.0) throw DomainError("distance must be nonzero");
  require_outside(q);
  return ps_fraction_raw(q.distance, q.time, q.env.diffusion_coefficient, q.receiver.radius);
}

double ps_fraction_by_quadrature(const ChannelQuery& q, const numerics::QuadratureOptions& opts) {
  if (q.distance == 0.0) throw DomainError("distance must be nonzero");
  require_outside(q);
  if (q.time == 0.0) return 0.0;
  const double x = q.distance;
  const double four_dt = 4.0 * q.env.diffusion_coefficient * q.time;
  // Averaging the Gaussian over a sphere of radius rho about the origin gives
  //   2 pi rho^2 * (2 D t / (rho x)) [exp(-(x-rho)^2/4Dt) - exp(-(x+rho)^2/4Dt)],
  // so the volume integral collapses onto rho in [0, r_r].
  auto shell = [x, four_dt](double rho) {
    const double near = std::exp(-(x - rho) * (x - rho) / four_dt);
    const double far = std::exp(-(x + rho) * (x + rho) / four_dt);
    return rho / x * (near - far);
  };
  const auto r = numerics::integrate_finite(shell, 0.0, q.receiver.radius, opts);
  return r.value / std::sqrt(std::numbers::pi * four_dt);
}

double ps_fraction_uca(const ChannelQuery& q) {
  const double rr = q.receiver.radius;
  return ps_point_concentration(q) * (4.0 / 3.0) * std::numbers::pi * rr * rr * rr;
}

double fraction(const ChannelQuery& q) {
  return q.receiver.kind == ReceiverKind::FullyAbsorbing ? fa_fraction(q) : ps_fraction_exact(q);
}

}  // namespace molcomm::channel
