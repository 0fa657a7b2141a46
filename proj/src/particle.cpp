#include "molcomm/particle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "molcomm/parallel.hpp"
#include "molcomm/stats.hpp"

namespace molcomm::particle {

std::string_view to_string(AbsorptionMode m) {
  return m == AbsorptionMode::StepEndCheck ? "step_end" : "intra_step";
}

AbsorptionMode parse_absorption_mode(std::string_view text) {
  if (text == "step_end" || text == "StepEndCheck") return AbsorptionMode::StepEndCheck;
  if (text == "intra_step" || text == "IntraStepCorrection") {
    return AbsorptionMode::IntraStepCorrection;
  }
  throw std::invalid_argument("unknown absorption mode '" + std::string(text) + "'");
}

void validate_config(const ParticleSimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw std::invalid_argument("particle time step dt must be positive");
  }
  const auto& rs = cfg.record_scheme;
  if (rs.t_grid.empty() || !(rs.sampling_interval > 0.0)) {
    throw std::invalid_argument("particle record scheme needs a grid and a positive T_ss");
  }
  if (!std::is_sorted(rs.t_grid.begin(), rs.t_grid.end()) || rs.t_grid.front() < 0.0) {
    throw std::invalid_argument("particle record grid must be increasing and nonnegative");
  }
  if (cfg.dt > rs.sampling_interval * (1.0 + 1e-12)) {
    throw std::invalid_argument("particle time step must not exceed the sampling interval");
  }
  const double last = rs.t_grid.back() + rs.sampling_interval;
  if (cfg.t_end != 0.0 && cfg.t_end < last - 1e-12) {
    throw std::invalid_argument("t_end must cover the last record time t + T_ss");
  }
  if (cfg.molecules_per_tx == 0) throw std::invalid_argument("molecules_per_tx must be >= 1");
}

namespace {

// Step index at which each record time is read. Record times that are not
// multiples of dt (within 1e-6 of a step) are read at the next step.
std::vector<std::int64_t> record_steps(const std::vector<double>& times, double dt) {
  std::vector<std::int64_t> steps;
  steps.reserve(times.size());
  for (double t : times) {
    const double ratio = t / dt;
    const double nearest = std::round(ratio);
    steps.push_back(static_cast<std::int64_t>(std::abs(ratio - nearest) < 1e-6 ? nearest
                                                                               : std::ceil(ratio)));
  }
  return steps;
}

constexpr std::size_t kChunk = 512;

struct ChunkCounts {
  std::vector<std::int64_t> nearest;
  std::vector<std::int64_t> interferers;
};

}  // namespace

SimOutput simulate_realization(const Scenario& s, const ParticleSimConfig& cfg,
                               const geometry::PPPRealization& realization, rng::Seed seed) {
  validate_config(cfg);
  const double d = s.environment.diffusion_coefficient;
  if (!(d >= 0.0)) throw std::invalid_argument("diffusion coefficient must be nonnegative");
  const double rr = s.receiver.radius;
  const bool absorbing = s.receiver.kind == ReceiverKind::FullyAbsorbing;
  const bool intra = cfg.absorption_mode == AbsorptionMode::IntraStepCorrection && d > 0.0;
  const double sigma = std::sqrt(2.0 * d * cfg.dt);
  const double bridge_scale = d * cfg.dt;

  SimOutput out;
  out.receiver = s.receiver.kind;
  out.times = record_times(cfg.record_scheme);
  out.seed = seed;
  out.transmitters = realization.positions.size();
  out.molecules_per_tx = cfg.molecules_per_tx;
  const std::size_t m = out.times.size();
  const auto steps = record_steps(out.times, cfg.dt);
  const std::int64_t last_step = steps.back();

  const std::uint64_t per_tx = cfg.molecules_per_tx;
  const std::uint64_t total = per_tx * realization.positions.size();
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<ChunkCounts> partial(chunks);

  parallel_for(chunks, cfg.threads, [&](std::size_t c) {
    ChunkCounts& counts = partial[c];
    counts.nearest.assign(m, 0);
    counts.interferers.assign(m, 0);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min<std::uint64_t>(total, begin + kChunk);
    for (std::uint64_t g = begin; g < end; ++g) {
      const std::size_t tx = static_cast<std::size_t>(g / per_tx);
      auto& tally = (tx == realization.nearest_index) ? counts.nearest : counts.interferers;
      rng::Stream stream(
          rng::derive(seed, {static_cast<std::uint64_t>(rng::StreamTag::Molecules), g}));
      geometry::Vec3 p = realization.positions[tx];
      double radius = p.norm();
      std::size_t next_record = 0;
      // Step 0 is the emission instant.
      while (next_record < m && steps[next_record] == 0) {
        if (!absorbing && radius <= rr) ++tally[next_record];
        ++next_record;
      }
      for (std::int64_t step = 1; step <= last_step; ++step) {
        p.x += sigma * stream.normal();
        p.y += sigma * stream.normal();
        p.z += sigma * stream.normal();
        const double previous = radius;
        radius = p.norm();
        if (absorbing) {
          bool hit = radius <= rr;
          if (!hit && intra) {
            const double exponent = (previous - rr) * (radius - rr) / bridge_scale;
            const double u = stream.uniform();
            hit = exponent < 40.0 && u < std::exp(-exponent);
          }
          if (hit) {
            // Cumulative: every record at or after this step sees the molecule.
            while (next_record < m && steps[next_record] < step) ++next_record;
            for (std::size_t k = next_record; k < m; ++k) ++tally[k];
            break;
          }
        } else {
          while (next_record < m && steps[next_record] == step) {
            if (radius <= rr) ++tally[next_record];
            ++next_record;
          }
        }
      }
    }
  });

  out.nearest.assign(m, 0);
  out.interferers.assign(m, 0);
  for (const auto& part : partial) {
    for (std::size_t k = 0; k < m; ++k) {
      out.nearest[k] += part.nearest[k];
      out.interferers[k] += part.interferers[k];
    }
  }
  return out;
}

EnsembleResult simulate_ensemble(const Scenario& s, const ParticleSimConfig& cfg,
                                 std::size_t n_permutations, std::size_t reps_per_permutation,
                                 rng::Seed master_seed) {
  if (n_permutations < 1 || reps_per_permutation < 1) {
    throw std::invalid_argument("ensemble needs at least one permutation and one repetition");
  }
  if (!std::isfinite(s.max_placement_radius)) {
    throw std::invalid_argument("particle ensemble needs a finite max_placement_radius");
  }
  validate_config(cfg);
  const auto times = record_times(cfg.record_scheme);
  const std::size_t m = times.size();
  const double scale = s.field.pulse_amplitude / static_cast<double>(cfg.molecules_per_tx);
  const double lambda = s.field.active_density();

  // One row per run, [permutation * reps + rep][record time].
  const std::size_t runs = n_permutations * reps_per_permutation;
  std::vector<double> nearest(runs * m);
  std::vector<double> interferers(runs * m);
  for (std::size_t p = 0; p < n_permutations; ++p) {
    const rng::Seed placement_seed = rng::derive(master_seed, p);
    const auto realization = geometry::sample_ppp_shell(lambda, s.receiver.radius,
                                                        s.max_placement_radius, placement_seed);
    for (std::size_t q = 0; q < reps_per_permutation; ++q) {
      const rng::Seed run_seed = rng::derive(
          placement_seed, {static_cast<std::uint64_t>(rng::StreamTag::Molecules), q});
      const auto sim = simulate_realization(s, cfg, realization, run_seed);
      const std::size_t row = p * reps_per_permutation + q;
      for (std::size_t k = 0; k < m; ++k) {
        nearest[row * m + k] = scale * static_cast<double>(sim.nearest[k]);
        interferers[row * m + k] = scale * static_cast<double>(sim.interferers[k]);
      }
    }
  }

  EnsembleResult out;
  out.times = times;
  out.n_permutations = n_permutations;
  out.reps_per_permutation = reps_per_permutation;
  out.master_seed = master_seed;

  // Repetitions of one placement are not independent draws of the collective
  // signal, so errors are taken across permutation means when possible.
  std::vector<double> perm_nearest(n_permutations * m, 0.0);
  std::vector<double> perm_interferers(n_permutations * m, 0.0);
  const double inv = 1.0 / static_cast<double>(reps_per_permutation);
  for (std::size_t p = 0; p < n_permutations; ++p) {
    for (std::size_t q = 0; q < reps_per_permutation; ++q) {
      const std::size_t row = p * reps_per_permutation + q;
      for (std::size_t k = 0; k < m; ++k) {
        perm_nearest[p * m + k] += inv * nearest[row * m + k];
        perm_interferers[p * m + k] += inv * interferers[row * m + k];
      }
    }
  }
  out.permutation_levels.assign(n_permutations, std::vector<double>(m));
  for (std::size_t p = 0; p < n_permutations; ++p) {
    for (std::size_t k = 0; k < m; ++k) {
      out.permutation_levels[p][k] = perm_nearest[p * m + k] + perm_interferers[p * m + k];
    }
  }
  if (n_permutations > 1) {
    out.curves = summarize_rows("particle", s.receiver.kind, cfg.record_scheme, times,
                                n_permutations, perm_nearest, perm_interferers);
  } else {
    out.curves = summarize_rows("particle", s.receiver.kind, cfg.record_scheme, times, runs,
                                nearest, interferers);
  }
  return out;
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& result) {
  out << "t,mean,std_error,series,receiver\n";
  char line[256];
  for (auto c : {Component::Nearest, Component::Interferers, Component::All}) {
    const auto& curve = result.curve(c);
    const char* series = c == Component::Nearest       ? "nearest"
                         : c == Component::Interferers ? "aggregate"
                                                       : "all";
    for (const auto& p : curve.points) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%s,%s\n", p.t, p.net, p.net_std_error,
                    series, std::string(to_string(curve.receiver)).c_str());
      out << line;
    }
  }
}

}  // namespace molcomm::particle
