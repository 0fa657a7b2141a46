#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molcomm/core.hpp"

namespace molcomm {

/// Which transmitters a signal is attributed to.
enum class Component { Nearest, Interferers, All };

std::string_view to_string(Component c);
Component parse_component(std::string_view text);

/// One sampling instant t: the signal observed at t ("level": cumulative
/// absorbed count, or count currently inside a passive receiver) and the net
/// change over [t, t + T_ss].
struct CurvePoint {
  double t = 0.0;
  double level = 0.0;
  double level_std_error = 0.0;
  double net = 0.0;
  double net_std_error = 0.0;
};

struct SignalCurve {
  std::string engine;
  ReceiverKind receiver = ReceiverKind::FullyAbsorbing;
  Component component = Component::All;
  std::vector<CurvePoint> points;

  /// Largest net change over the grid and the t at which it occurs.
  [[nodiscard]] CurvePoint peak_net() const;
};

/// Record times needed to report both level(t) and level(t + T_ss) for every t
/// in the grid: the sorted union of the two sets, deduplicated within 1e-12 s.
std::vector<double> record_times(const SamplingScheme& sampling);

/// Index into record_times() of the instant closest to t.
std::size_t nearest_record_index(const std::vector<double>& times, double t);

/// Turns per-sample-unit rows of nearest and interferer levels (row-major
/// [row][record time]) into mean curves with standard errors across rows.
/// Index the result by Component.
std::array<SignalCurve, 3> summarize_rows(std::string engine, ReceiverKind receiver,
                                          const SamplingScheme& sampling,
                                          const std::vector<double>& times, std::size_t rows,
                                          std::span<const double> nearest,
                                          std::span<const double> interferers);

}  // namespace molcomm
