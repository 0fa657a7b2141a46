#include "molcomm/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "molcomm/channel.hpp"

namespace molcomm::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_density(double lambda_a) {
  if (!(lambda_a > 0.0)) {
    throw channel::DomainError("nearest-distance law requires lambda_a > 0");
  }
}

double ball_volume(double r) { return (4.0 / 3.0) * kPi * r * r * r; }

}  // namespace

double nearest_pdf_3d(double x, double lambda_a, double rr) {
  require_positive_density(lambda_a);
  if (x < rr) return 0.0;
  return 4.0 * lambda_a * kPi * x * x * std::exp(-lambda_a * (ball_volume(x) - ball_volume(rr)));
}

double nearest_cdf_3d(double x, double lambda_a, double rr) {
  require_positive_density(lambda_a);
  if (x <= rr) return 0.0;
  if (std::isinf(x)) return 1.0;
  // x^3 - rr^3 factored to keep precision near the surface.
  const double shell = (4.0 / 3.0) * kPi * (x - rr) * (x * x + x * rr + rr * rr);
  return -std::expm1(-lambda_a * shell);
}

double nearest_quantile_3d(double p, double lambda_a, double rr) {
  require_positive_density(lambda_a);
  if (!(p >= 0.0 && p < 1.0)) throw channel::DomainError("quantile requires p in [0, 1)");
  const double shell = -std::log1p(-p) / lambda_a;
  return std::cbrt(rr * rr * rr + shell / ((4.0 / 3.0) * kPi));
}

double nearest_pdf_2d(double r, double lambda_a, double rr) {
  require_positive_density(lambda_a);
  if (r < rr) return 0.0;
  return 2.0 * lambda_a * kPi * r * std::exp(-lambda_a * kPi * (r * r - rr * rr));
}

double nearest_cdf_2d(double r, double lambda_a, double rr) {
  require_positive_density(lambda_a);
  if (r <= rr) return 0.0;
  if (std::isinf(r)) return 1.0;
  return -std::expm1(-lambda_a * kPi * (r - rr) * (r + rr));
}

double nearest_quantile_2d(double p, double lambda_a, double rr) {
  require_positive_density(lambda_a);
  if (!(p >= 0.0 && p < 1.0)) throw channel::DomainError("quantile requires p in [0, 1)");
  return std::sqrt(rr * rr - std::log1p(-p) / (lambda_a * kPi));
}

double nearest_mass_beyond(double big_r, double lambda_a, double rr) {
  if (lambda_a <= 0.0) return 1.0;
  if (std::isinf(big_r)) return 0.0;
  return 1.0 - nearest_cdf_3d(big_r, lambda_a, rr);
}

double expected_count(double lambda_a, double rr, double big_r) {
  if (lambda_a == 0.0) return 0.0;
  return lambda_a * (4.0 / 3.0) * kPi * (big_r - rr) * (big_r * big_r + big_r * rr + rr * rr);
}

PPPRealization sample_ppp_shell(double lambda_a, double rr, double big_r, rng::Seed seed) {
  if (!(big_r > rr)) throw channel::DomainError("placement radius R must exceed r_r");
  if (!(lambda_a >= 0.0) || !std::isfinite(big_r)) {
    throw channel::DomainError("sampling requires lambda_a >= 0 and finite R");
  }
  PPPRealization out;
  out.generating_seed = seed;
  out.shell = {rr, big_r};

  rng::Stream stream(rng::derive(seed, static_cast<std::uint64_t>(rng::StreamTag::Placement)));
  const auto count = stream.poisson(expected_count(lambda_a, rr, big_r));
  out.positions.reserve(count);
  const double inner3 = rr * rr * rr;
  const double span3 = big_r * big_r * big_r - inner3;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double radius = std::clamp(std::cbrt(inner3 + stream.uniform() * span3), rr, big_r);
    const double cos_theta = 2.0 * stream.uniform() - 1.0;
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = 2.0 * kPi * stream.uniform();
    out.positions.push_back({radius * sin_theta * std::cos(phi),
                             radius * sin_theta * std::sin(phi), radius * cos_theta});
  }
  out.nearest_index = identify_nearest(out.positions);
  return out;
}

std::optional<std::size_t> identify_nearest(std::span<const Vec3> positions) {
  std::optional<std::size_t> best;
  double best_norm = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double n = positions[i].norm();
    if (!best || n < best_norm) {
      best = i;
      best_norm = n;
    }
  }
  return best;
}

std::optional<std::size_t> identify_nearest(const PPPRealization& realization) {
  return identify_nearest(realization.positions);
}

void write_realizations_csv(std::ostream& out, std::span<const PPPRealization> realizations) {
  out << "realization_id,point_id,x,y,z\n";
  char line[160];
  for (std::size_t r = 0; r < realizations.size(); ++r) {
    const auto& pts = realizations[r].positions;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g\n", r, i, pts[i].x, pts[i].y,
                    pts[i].z);
      out << line;
    }
  }
}

}  // namespace molcomm::geometry
