#include "molcomm/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "molcomm/stats.hpp"

namespace molcomm {

std::string_view to_string(Component c) {
  switch (c) {
    case Component::Nearest:
      return "nearest";
    case Component::Interferers:
      return "interferers";
    case Component::All:
      return "all";
  }
  return "unknown";
}

Component parse_component(std::string_view text) {
  if (text == "nearest") return Component::Nearest;
  if (text == "interferers" || text == "aggregate") return Component::Interferers;
  if (text == "all") return Component::All;
  throw std::invalid_argument("unknown component '" + std::string(text) + "'");
}

CurvePoint SignalCurve::peak_net() const {
  if (points.empty()) throw std::logic_error("peak_net of an empty curve");
  return *std::max_element(points.begin(), points.end(),
                           [](const CurvePoint& l, const CurvePoint& r) { return l.net < r.net; });
}

std::vector<double> record_times(const SamplingScheme& sampling) {
  std::vector<double> all;
  all.reserve(2 * sampling.t_grid.size());
  for (double t : sampling.t_grid) {
    all.push_back(t);
    all.push_back(t + sampling.sampling_interval);
  }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  out.reserve(all.size());
  for (double t : all) {
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  }
  return out;
}

std::size_t nearest_record_index(const std::vector<double>& times, double t) {
  if (times.empty()) throw std::logic_error("no record times");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  const auto hi = static_cast<std::size_t>(it - times.begin());
  if (hi == 0) return 0;
  return (std::abs(times[hi] - t) <= std::abs(t - times[hi - 1])) ? hi : hi - 1;
}

std::array<SignalCurve, 3> summarize_rows(std::string engine, ReceiverKind receiver,
                                          const SamplingScheme& sampling,
                                          const std::vector<double>& times, std::size_t rows,
                                          std::span<const double> nearest,
                                          std::span<const double> interferers) {
  const std::size_t m = times.size();
  if (rows == 0 || nearest.size() != rows * m || interferers.size() != rows * m) {
    throw std::invalid_argument("summarize_rows: sample matrix has the wrong shape");
  }
  std::array<SignalCurve, 3> out;
  std::vector<double> column(rows);
  for (auto c : {Component::Nearest, Component::Interferers, Component::All}) {
    auto value = [&](std::size_t i, std::size_t k) {
      switch (c) {
        case Component::Nearest:
          return nearest[i * m + k];
        case Component::Interferers:
          return interferers[i * m + k];
        case Component::All:
          break;
      }
      return nearest[i * m + k] + interferers[i * m + k];
    };
    SignalCurve& curve = out[static_cast<std::size_t>(c)];
    curve.engine = engine;
    curve.receiver = receiver;
    curve.component = c;
    for (double t : sampling.t_grid) {
      const std::size_t at = nearest_record_index(times, t);
      const std::size_t after = nearest_record_index(times, t + sampling.sampling_interval);
      for (std::size_t i = 0; i < rows; ++i) column[i] = value(i, at);
      const auto lvl = stats::mean_and_error(column);
      for (std::size_t i = 0; i < rows; ++i) column[i] = value(i, after) - value(i, at);
      const auto net = stats::mean_and_error(column);
      curve.points.push_back({t, lvl.mean, lvl.std_error, net.mean, net.std_error});
    }
  }
  return out;
}

}  // namespace molcomm
