#pragma once

// Scenario files.
//
// Two syntaxes are accepted and map to the same dotted keys:
//
//   [environment]
//   diffusion_coefficient = "80 um^2/s"     # or "8e-11 m^2/s"
//
//   {"environment": {"diffusion_coefficient": "80 um^2/s"}}
//
// Dimensional values carry a unit suffix; bare numbers are read in canonical
// units (um, s, um^2/s, um^-3). See scenarios/README.md for every key.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molcomm/core.hpp"
#include "molcomm/particle.hpp"

namespace molcomm::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParticleSettings {
  double dt = 0.01;
  std::uint64_t molecules_per_tx = 0;  // 0: round(N_tx)
  std::size_t permutations = 100;
  std::size_t repetitions = 1;
  particle::AbsorptionMode absorption_mode = particle::AbsorptionMode::StepEndCheck;
};

struct ScenarioConfig {
  Scenario scenario;  // receiver.kind holds receivers.front()
  std::vector<ReceiverKind> receivers{ReceiverKind::FullyAbsorbing};
  std::size_t realizations = 10000;
  ParticleSettings particle;
  std::uint64_t seed = 1;

  /// Copy of the scenario for one receiver kind.
  [[nodiscard]] Scenario for_receiver(ReceiverKind kind) const;
  /// Particle configuration derived from the settings and sampling grid.
  [[nodiscard]] particle::ParticleSimConfig particle_config() const;
};

/// Flat dotted-key view of a document, in key order.
using Settings = std::map<std::string, std::string>;

/// Parses the sectioned key/value syntax.
Settings parse_keyvalue(std::string_view text);
/// Parses a JSON object, flattening nested objects into dotted keys.
Settings parse_json(std::string_view text);

/// Builds a configuration from settings; `overrides` ("key=value", short
/// aliases allowed) are applied after the file. Throws ConfigError on unknown
/// keys or malformed values, ValidationError on invariant violations.
ScenarioConfig build_config(const Settings& settings, const std::vector<std::string>& overrides = {});

/// Reads a file; JSON when the first non-blank character is '{'.
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
ScenarioConfig load_config_text(std::string_view text,
                                const std::vector<std::string>& overrides = {});

/// Resolved configuration as canonical-unit settings; feeding the result back
/// through build_config reproduces the configuration exactly.
Settings to_settings(const ScenarioConfig& cfg);

/// Renders settings in the sectioned key/value syntax.
std::string render_keyvalue(const Settings& settings);

/// Canonical dotted key for an override alias (e.g. "lambda" ->
/// "transmitters.density"). Unknown names are returned unchanged.
std::string canonical_key(std::string_view key);

}  // namespace molcomm::config
