#include "molcomm/core.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace molcomm {

std::string_view to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::FullyAbsorbing:
      return "absorbing";
    case ReceiverKind::Passive:
      return "passive";
  }
  return "unknown";
}

ReceiverKind parse_receiver_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "absorbing" || lower == "fully_absorbing" || lower == "fa" || lower == "active") {
    return ReceiverKind::FullyAbsorbing;
  }
  if (lower == "passive" || lower == "ps") return ReceiverKind::Passive;
  throw std::invalid_argument("unknown receiver kind '" + std::string(text) + "'");
}

SamplingScheme SamplingScheme::uniform(double t0, double t1, double step,
                                       double sampling_interval) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  SamplingScheme s;
  s.sampling_interval = sampling_interval;
  // Index-based so that grid points do not accumulate round-off.
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / step + 1e-9));
  s.t_grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s.t_grid.push_back(t0 + static_cast<double>(i) * step);
  return s;
}

namespace {

std::string join_messages(const std::vector<FieldViolation>& v) {
  std::ostringstream out;
  out << "invalid scenario:";
  for (const auto& f : v) out << "\n  " << f.path << ": " << f.message;
  return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldViolation> violations)
    : std::runtime_error(join_messages(violations)), violations_(std::move(violations)) {}

std::vector<FieldViolation> check_scenario(const Scenario& s) {
  std::vector<FieldViolation> out;
  auto fail = [&](std::string path, std::string msg) {
    out.push_back({std::move(path), std::move(msg)});
  };

  const double d = s.environment.diffusion_coefficient;
  if (!(std::isfinite(d) && d > 0.0)) {
    fail("environment.diffusion_coefficient", "diffusion coefficient must be positive");
  }

  const double rr = s.receiver.radius;
  if (!(std::isfinite(rr) && rr > 0.0)) fail("receiver.radius", "radius must be positive");

  const auto& f = s.field;
  if (!(std::isfinite(f.density) && f.density >= 0.0)) {
    fail("transmitters.density", "density must be nonnegative");
  }
  if (!(f.activity > 0.0 && f.activity <= 1.0)) {
    fail("transmitters.activity", "activity probability must lie in (0, 1]");
  }
  if (!(std::isfinite(f.pulse_amplitude) && f.pulse_amplitude > 0.0)) {
    fail("transmitters.pulse_amplitude", "pulse amplitude must be positive");
  }
  if (f.emission_time != 0.0) {
    fail("transmitters.emission_time", "emission time is fixed at 0");
  }

  const auto& grid = s.sampling.t_grid;
  if (grid.empty()) fail("sampling.t_grid", "time grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::isfinite(grid[i]) && grid[i] >= 0.0)) {
      fail("sampling.t_grid[" + std::to_string(i) + "]", "times must be finite and >= 0");
    } else if (i > 0 && !(grid[i] > grid[i - 1])) {
      fail("sampling.t_grid[" + std::to_string(i) + "]", "time grid must be strictly increasing");
    }
  }
  if (!(std::isfinite(s.sampling.sampling_interval) && s.sampling.sampling_interval > 0.0)) {
    fail("sampling.sampling_interval", "sampling interval must be positive");
  }

  const double big_r = s.max_placement_radius;
  if (std::isnan(big_r) || (std::isfinite(big_r) && std::isfinite(rr) && !(big_r > rr))) {
    fail("transmitters.max_placement_radius",
         "max placement radius must exceed the receiver radius");
  }
  return out;
}

ValidatedScenario validate_scenario(const Scenario& s) {
  auto violations = check_scenario(s);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return ValidatedScenario(s);
}

namespace units {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Conversion factors to canonical units, per dimension.
const std::unordered_map<std::string, double>& unit_table(std::string_view dimension) {
  static const std::unordered_map<std::string, double> length{
      {"um", 1.0}, {"µm", 1.0}, {"micron", 1.0}, {"nm", 1e-3}, {"mm", 1e3}, {"m", 1e6}};
  static const std::unordered_map<std::string, double> time{
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}};
  static const std::unordered_map<std::string, double> diffusion{
      {"um^2/s", 1.0}, {"µm^2/s", 1.0}, {"m^2/s", kSquareMetresPerSecondToMicrons},
      {"nm^2/s", 1e-6}, {"cm^2/s", 1e8}};
  static const std::unordered_map<std::string, double> density{
      {"um^-3", 1.0}, {"µm^-3", 1.0}, {"1/um^3", 1.0}, {"m^-3", 1e-18}, {"1/m^3", 1e-18},
      {"mm^-3", 1e-9}};
  static const std::unordered_map<std::string, double> none{{"", 1.0}};
  if (dimension == "length") return length;
  if (dimension == "time") return time;
  if (dimension == "diffusion") return diffusion;
  if (dimension == "density") return density;
  if (dimension == "dimensionless") return none;
  throw std::invalid_argument("unknown dimension '" + std::string(dimension) + "'");
}

}  // namespace

double parse_quantity(std::string_view text, std::string_view dimension) {
  const auto& table = unit_table(dimension);
  auto body = trim(text);
  if (body == "inf" || body == "infinity") return std::numeric_limits<double>::infinity();

  double value = 0.0;
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    throw std::invalid_argument("cannot parse number in '" + std::string(text) + "'");
  }
  const std::string unit(trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr))));
  if (unit.empty()) return value;  // bare number: canonical units
  const auto it = table.find(unit);
  if (it == table.end()) {
    throw std::invalid_argument("unit '" + unit + "' is not a " + std::string(dimension) +
                                " unit");
  }
  return value * it->second;
}

}  // namespace units

}  // namespace molcomm
