#pragma once

// "Pseudo" simulation: sample transmitter placements, evaluate the analytic
// single-transmitter response for every point, and average over placements.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "molcomm/core.hpp"
#include "molcomm/curve.hpp"
#include "molcomm/rng.hpp"

namespace molcomm::montecarlo {

inline constexpr std::size_t kDefaultRealizations = 10000;

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_realizations = 0;
  Component component = Component::All;
};

struct MonteCarloOptions {
  std::size_t n_realizations = kDefaultRealizations;
  rng::Seed seed = 0;
  unsigned threads = 0;
};

/// Level and net-change curves for all three components, with standard
/// errors across realizations. Realization i is sampled from
/// derive(seed, i), so results do not depend on the thread count.
struct MonteCarloResult {
  std::array<SignalCurve, 3> curves;  // indexed by Component
  /// Truncation bias of the All component for each grid point: the Campbell
  /// mass beyond R for the level and for the net change.
  std::vector<double> level_truncation;
  std::vector<double> net_truncation;
  std::size_t n_realizations = 0;
  rng::Seed seed = 0;

  [[nodiscard]] const SignalCurve& curve(Component c) const {
    return curves[static_cast<std::size_t>(c)];
  }
};

MonteCarloResult mc_signal(const Scenario& s, const MonteCarloOptions& opts);

/// Per-grid-point level estimates for one component.
std::vector<MCEstimate> mc_curve(const Scenario& s, Component component, std::size_t n_realizations,
                                 rng::Seed seed, unsigned threads = 0);

/// CSV: t,mean,std_error,component,receiver,n_realizations,seed
void write_mc_csv(std::ostream& out, const Scenario& s, const std::vector<MCEstimate>& estimates,
                  rng::Seed seed);

}  // namespace molcomm::montecarlo
