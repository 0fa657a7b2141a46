#pragma once

// Homogeneous Poisson point process of transmitters outside a spherical
// receiver: nearest-distance law, shell sampling and nearest identification.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "molcomm/rng.hpp"

namespace molcomm::geometry {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct Shell {
  double inner = 0.0;  // receiver radius r_r
  double outer = 0.0;  // placement radius R
};

struct PPPRealization {
  std::vector<Vec3> positions;
  std::optional<std::size_t> nearest_index;
  rng::Seed generating_seed = 0;
  Shell shell;
};

// --- nearest-transmitter distance law (3D) ---------------------------------

/// 4 pi lambda_a x^2 exp(-lambda_a (4/3) pi (x^3 - r_r^3)) for x >= r_r, else 0.
double nearest_pdf_3d(double x, double lambda_a, double rr);
/// 1 - exp(-lambda_a (4/3) pi (x^3 - r_r^3)) for x >= r_r, else 0.
double nearest_cdf_3d(double x, double lambda_a, double rr);
/// Inverse of nearest_cdf_3d for p in [0, 1).
double nearest_quantile_3d(double p, double lambda_a, double rr);

// --- nearest-transmitter distance law (2D, lambda_a in um^-2) --------------

double nearest_pdf_2d(double r, double lambda_a, double rr);
double nearest_cdf_2d(double r, double lambda_a, double rr);
double nearest_quantile_2d(double p, double lambda_a, double rr);

/// Probability that the nearest transmitter lies beyond R, i.e. the mass the
/// truncated sampler cannot represent for the nearest distance.
double nearest_mass_beyond(double big_r, double lambda_a, double rr);

/// Expected point count in the shell r_r <= |p| <= R.
double expected_count(double lambda_a, double rr, double big_r);

// --- sampling ----------------------------------------------------------------

/// One PPP realization in the shell [r_r, R]: Poisson count, radius by
/// inverse CDF of the r^2 density, isotropic direction. Deterministic in seed.
PPPRealization sample_ppp_shell(double lambda_a, double rr, double big_r, rng::Seed seed);

/// Index of the minimum-norm point; ties go to the lowest index.
std::optional<std::size_t> identify_nearest(std::span<const Vec3> positions);
std::optional<std::size_t> identify_nearest(const PPPRealization& realization);

/// CSV dump: realization_id,point_id,x,y,z
void write_realizations_csv(std::ostream& out, std::span<const PPPRealization> realizations);

}  // namespace molcomm::geometry
