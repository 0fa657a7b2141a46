#pragma once

// Particle-based validation: every emitted molecule performs a Gaussian random
// walk from its transmitter; the receiver either absorbs molecules that reach
// it or counts those currently inside.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "molcomm/core.hpp"
#include "molcomm/curve.hpp"
#include "molcomm/geometry.hpp"
#include "molcomm/rng.hpp"

namespace molcomm::particle {

enum class AbsorptionMode {
  /// Absorb only when a step ends inside the receiver.
  StepEndCheck,
  /// Additionally absorb a molecule that ends a step outside with the
  /// Brownian-bridge crossing probability exp(-d0 d1 / (D dt)), where d0, d1
  /// are the distances to the surface before and after the step. The planar
  /// boundary approximation makes this approximate on a sphere.
  IntraStepCorrection,
};

std::string_view to_string(AbsorptionMode m);
AbsorptionMode parse_absorption_mode(std::string_view text);

struct ParticleSimConfig {
  double dt = 0.01;                // s
  double t_end = 0.0;              // s; 0 means "last record time"
  std::uint64_t molecules_per_tx = 10000;
  SamplingScheme record_scheme;
  AbsorptionMode absorption_mode = AbsorptionMode::StepEndCheck;
  unsigned threads = 0;
};

/// Throws std::invalid_argument unless dt > 0, dt <= T_ss, the grid is valid
/// and t_end covers every record time (t + T_ss for each grid t).
void validate_config(const ParticleSimConfig& cfg);

/// Counts at each record time (see record_times()), split by source.
/// Absorbing receiver: cumulative absorbed. Passive: molecules inside.
struct SimOutput {
  ReceiverKind receiver = ReceiverKind::FullyAbsorbing;
  std::vector<double> times;
  std::vector<std::int64_t> nearest;
  std::vector<std::int64_t> interferers;
  rng::Seed seed = 0;
  std::size_t transmitters = 0;
  std::uint64_t molecules_per_tx = 0;

  [[nodiscard]] std::int64_t total(std::size_t k) const { return nearest[k] + interferers[k]; }
};

/// Simulates every molecule of every transmitter in `realization`. Molecule g
/// (g = transmitter * molecules_per_tx + k) draws from its own stream keyed by
/// (seed, g), so the output is independent of the worker count.
SimOutput simulate_realization(const Scenario& s, const ParticleSimConfig& cfg,
                               const geometry::PPPRealization& realization, rng::Seed seed);

struct EnsembleResult {
  std::array<SignalCurve, 3> curves;  // indexed by Component, scaled to N_tx per transmitter
  std::vector<double> times;          // record times
  /// Per-permutation mean level of the All component at each record time,
  /// scaled like the curves: [permutation][record time].
  std::vector<std::vector<double>> permutation_levels;
  std::size_t n_permutations = 0;
  std::size_t reps_per_permutation = 0;
  rng::Seed master_seed = 0;

  [[nodiscard]] const SignalCurve& curve(Component c) const {
    return curves[static_cast<std::size_t>(c)];
  }
};

/// Fresh placement per permutation (seeded by derive(master, p)), repeated
/// molecule simulations per placement. Counts are scaled by
/// N_tx / molecules_per_tx. Standard errors are computed across permutation
/// means, falling back to the spread across repetitions when there is a
/// single permutation.
EnsembleResult simulate_ensemble(const Scenario& s, const ParticleSimConfig& cfg,
                                 std::size_t n_permutations, std::size_t reps_per_permutation,
                                 rng::Seed master_seed);

/// CSV: t,mean,std_error,series,receiver where series is one of
/// nearest/aggregate/all for the net change over [t, t + T_ss].
void write_ensemble_csv(std::ostream& out, const EnsembleResult& result);

}  // namespace molcomm::particle
