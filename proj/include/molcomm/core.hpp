#pragma once

// Domain types shared by the analytic, Monte Carlo and particle engines.
//
// Canonical units: micrometres (um), seconds (s), um^2/s for diffusion and
// um^-3 for transmitter density. The receiver is always centred at the origin.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace molcomm {

enum class ReceiverKind { FullyAbsorbing, Passive };

std::string_view to_string(ReceiverKind kind);
/// Accepts "absorbing", "fully_absorbing", "fa", "passive", "ps".
ReceiverKind parse_receiver_kind(std::string_view text);

struct Environment {
  double diffusion_coefficient = 0.0;  // um^2/s
};

struct ReceiverSpec {
  ReceiverKind kind = ReceiverKind::FullyAbsorbing;
  double radius = 0.0;  // um
};

struct TransmitterField {
  double density = 0.0;          // lambda, um^-3
  double activity = 1.0;         // rho_a in (0, 1]
  double pulse_amplitude = 0.0;  // molecules emitted per active transmitter
  double emission_time = 0.0;    // global clock; always 0

  /// Density of active transmitters, lambda * rho_a.
  [[nodiscard]] double active_density() const noexcept { return density * activity; }
};

struct SamplingScheme {
  std::vector<double> t_grid;       // s, strictly increasing, >= 0
  double sampling_interval = 0.0;   // T_ss, s

  /// Evenly spaced grid t0, t0+step, ... up to and including t1 (within round-off).
  static SamplingScheme uniform(double t0, double t1, double step, double sampling_interval);
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Scenario {
  Environment environment;
  ReceiverSpec receiver;
  TransmitterField field;
  SamplingScheme sampling;
  double max_placement_radius = kUnbounded;  // R, um; only used by sampled realizations
};

struct FieldViolation {
  std::string path;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldViolation> violations);
  [[nodiscard]] const std::vector<FieldViolation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<FieldViolation> violations_;
};

/// A scenario whose invariants have been checked. Immutable.
class ValidatedScenario {
 public:
  [[nodiscard]] const Scenario& get() const noexcept { return scenario_; }
  const Scenario* operator->() const noexcept { return &scenario_; }
  operator const Scenario&() const noexcept { return scenario_; }

 private:
  friend ValidatedScenario validate_scenario(const Scenario& s);
  explicit ValidatedScenario(Scenario s) : scenario_(std::move(s)) {}
  Scenario scenario_;
};

/// Every violated invariant, in field-path order. Empty when valid.
std::vector<FieldViolation> check_scenario(const Scenario& s);

/// Throws ValidationError listing all violations.
ValidatedScenario validate_scenario(const Scenario& s);

namespace units {

inline constexpr double kSquareMetresPerSecondToMicrons = 1e12;

inline constexpr double diffusion_from_si(double m2_per_s) {
  return m2_per_s * kSquareMetresPerSecondToMicrons;
}
inline constexpr double diffusion_to_si(double um2_per_s) {
  return um2_per_s / kSquareMetresPerSecondToMicrons;
}

/// Parses "<number> <unit>" (or a bare number, read as canonical units) for a
/// quantity of the given dimension. Dimensions: "length", "time",
/// "diffusion", "density", "dimensionless".
double parse_quantity(std::string_view text, std::string_view dimension);

}  // namespace units

}  // namespace molcomm
