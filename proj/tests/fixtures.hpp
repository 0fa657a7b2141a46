#pragma once

#include <cstdint>

#include "molcomm/core.hpp"

namespace fixtures {

/// Small deterministic generator for test inputs, separate from the library RNG.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}
  double uniform01() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

/// First reference parameter set: D = 80, lambda = 1e-4, r_r = 5, N = 1e4.
inline molcomm::Scenario fig2(molcomm::ReceiverKind kind) {
  molcomm::Scenario s;
  s.environment.diffusion_coefficient = 80.0;
  s.receiver = {kind, 5.0};
  s.field.density = 1e-4;
  s.field.activity = 1.0;
  s.field.pulse_amplitude = 1e4;
  s.sampling = molcomm::SamplingScheme::uniform(0.0, 1.0, 0.01, 0.01);
  s.max_placement_radius = 50.0;
  return s;
}

/// Second reference parameter set: D = 120, lambda = 1e-3, T_ss = 0.1.
inline molcomm::Scenario fig3(molcomm::ReceiverKind kind) {
  molcomm::Scenario s = fig2(kind);
  s.environment.diffusion_coefficient = 120.0;
  s.field.density = 1e-3;
  s.sampling = molcomm::SamplingScheme::uniform(0.0, 2.0, 0.1, 0.1);
  s.max_placement_radius = 100.0;
  return s;
}

inline molcomm::Scenario with_grid(molcomm::Scenario s, double t0, double t1, double step,
                                   double tss) {
  s.sampling = molcomm::SamplingScheme::uniform(t0, t1, step, tss);
  return s;
}

}  // namespace fixtures
