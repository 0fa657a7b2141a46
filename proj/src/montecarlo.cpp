#include "molcomm/montecarlo.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "molcomm/channel.hpp"
#include "molcomm/expectation.hpp"
#include "molcomm/geometry.hpp"
#include "molcomm/parallel.hpp"

namespace molcomm::montecarlo {

MonteCarloResult mc_signal(const Scenario& s, const MonteCarloOptions& opts) {
  if (opts.n_realizations < 1) throw std::invalid_argument("need at least one realization");
  if (!std::isfinite(s.max_placement_radius)) {
    throw std::invalid_argument("Monte Carlo sampling needs a finite max_placement_radius");
  }
  const auto times = record_times(s.sampling);
  const std::size_t n = opts.n_realizations;
  const std::size_t m = times.size();
  const double lambda = s.field.active_density();
  const double rr = s.receiver.radius;
  const double d = s.environment.diffusion_coefficient;
  const double ntx = s.field.pulse_amplitude;
  const auto frac = s.receiver.kind == ReceiverKind::FullyAbsorbing ? &channel::fa_fraction_raw
                                                                    : &channel::ps_fraction_raw;

  // Row-major [realization][record time].
  std::vector<double> nearest(n * m, 0.0);
  std::vector<double> interferers(n * m, 0.0);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    const auto real =
        geometry::sample_ppp_shell(lambda, rr, s.max_placement_radius, rng::derive(opts.seed, i));
    for (std::size_t p = 0; p < real.positions.size(); ++p) {
      const double x = std::max(real.positions[p].norm(), rr);
      double* row = (p == real.nearest_index) ? &nearest[i * m] : &interferers[i * m];
      for (std::size_t k = 0; k < m; ++k) row[k] += ntx * frac(x, times[k], d, rr);
    }
  });

  MonteCarloResult out;
  out.n_realizations = n;
  out.seed = opts.seed;
  out.curves = summarize_rows("montecarlo", s.receiver.kind, s.sampling, times, n, nearest,
                              interferers);

  std::vector<double> tail(m);
  for (std::size_t k = 0; k < m; ++k) {
    tail[k] = expectation::truncation_tail(s, s.max_placement_radius, times[k]);
  }
  for (double t : s.sampling.t_grid) {
    const std::size_t at = nearest_record_index(times, t);
    const std::size_t after = nearest_record_index(times, t + s.sampling.sampling_interval);
    out.level_truncation.push_back(tail[at]);
    out.net_truncation.push_back(tail[after] - tail[at]);
  }
  return out;
}

std::vector<MCEstimate> mc_curve(const Scenario& s, Component component, std::size_t n_realizations,
                                 rng::Seed seed, unsigned threads) {
  const auto result = mc_signal(s, {n_realizations, seed, threads});
  std::vector<MCEstimate> out;
  for (const auto& p : result.curve(component).points) {
    out.push_back({p.level, p.level_std_error, n_realizations, component});
  }
  return out;
}

void write_mc_csv(std::ostream& out, const Scenario& s, const std::vector<MCEstimate>& estimates,
                  rng::Seed seed) {
  if (estimates.size() != s.sampling.t_grid.size()) {
    throw std::invalid_argument("estimate count does not match the time grid");
  }
  out << "t,mean,std_error,component,receiver,n_realizations,seed\n";
  char line[256];
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& e = estimates[i];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%s,%s,%zu,%llu\n", s.sampling.t_grid[i],
                  e.mean, e.std_error, std::string(to_string(e.component)).c_str(),
                  std::string(to_string(s.receiver.kind)).c_str(), e.n_realizations,
                  static_cast<unsigned long long>(seed));
    out << line;
  }
}

}  // namespace molcomm::montecarlo
