#pragma once

// Single-transmitter channel responses for a receiver at the origin and a
// point transmitter at distance `distance` emitting an impulse at t = 0.

#include "molcomm/core.hpp"
#include "molcomm/numerics.hpp"

namespace molcomm::channel {

struct ChannelQuery {
  double distance = 0.0;  // transmitter-to-centre distance, um
  double time = 0.0;      // elapsed since emission, s
  Environment env;
  ReceiverSpec receiver;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fraction of emitted molecules absorbed by a fully absorbing sphere by
/// `time`: (r_r / x) erfc((x - r_r) / sqrt(4 D t)). Zero at t = 0.
double fa_fraction(const ChannelQuery& q);

/// Free-space Green's function (4 pi D t)^(-3/2) exp(-x^2 / (4 D t)), um^-3
/// per emitted molecule. Requires t > 0.
double ps_point_concentration(const ChannelQuery& q);

/// Fraction of molecules inside a transparent sphere at `time`, integrated
/// exactly over the receiver volume (no uniform-concentration assumption).
double ps_fraction_exact(const ChannelQuery& q);

/// Same quantity as ps_fraction_exact, obtained by integrating the Gaussian
/// over the receiver volume numerically. The 3D integral is reduced to a 1D
/// integral over concentric shells of radius rho in [0, r_r].
double ps_fraction_by_quadrature(const ChannelQuery& q,
                                 const numerics::QuadratureOptions& opts = {1e-12, 1e-15, 4000});

/// Uniform-concentration approximation: concentration at the centre times the
/// receiver volume. Accurate only when x >> r_r.
double ps_fraction_uca(const ChannelQuery& q);

/// Dispatches on receiver.kind to fa_fraction or ps_fraction_exact.
double fraction(const ChannelQuery& q);

/// Fast path used inside quadrature loops: same formulas as above without
/// the struct round trip or validation.
double fa_fraction_raw(double x, double t, double diffusion, double rr) noexcept;
double ps_fraction_raw(double x, double t, double diffusion, double rr) noexcept;

}  // namespace molcomm::channel
