#include <doctest.h>

#include <cmath>
#include <string>

#include "molcomm/config.hpp"

using namespace molcomm;
namespace cf = molcomm::config;

namespace {

const char* kMinimal = R"(
# comment line
[environment]
diffusion_coefficient = "8e-11 m^2/s"   # SI input

[receiver]
kind = passive
radius = "5 um"

[transmitters]
density = 1e-4
pulse_amplitude = 1e4
max_placement_radius = 50

[sampling]
interval = "10 ms"
t_stop = 0.05
)";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("key/value file with units") {
    const auto c = cf::load_config_text(kMinimal);
    CHECK(c.scenario.environment.diffusion_coefficient == doctest::Approx(80.0));
    CHECK(c.scenario.receiver.kind == ReceiverKind::Passive);
    CHECK(c.receivers.size() == 1);
    CHECK(c.scenario.sampling.sampling_interval == doctest::Approx(0.01));
    REQUIRE(c.scenario.sampling.t_grid.size() == 6);
    CHECK(c.scenario.sampling.t_grid[5] == doctest::Approx(0.05));
    CHECK(c.scenario.max_placement_radius == 50.0);
    CHECK(c.realizations == 10000);
  }

  TEST_CASE("JSON gives the same configuration") {
    const auto j = cf::load_config_text(R"({
      "environment": {"diffusion_coefficient": "80 um^2/s"},
      "receiver": {"kind": "passive", "radius": 5},
      "transmitters": {"density": 1e-4, "pulse_amplitude": 1e4, "max_placement_radius": 50},
      "sampling": {"interval": 0.01, "t_grid": [0, 0.01, 0.02, 0.03, 0.04, 0.05]}
    })");
    const auto k = cf::load_config_text(kMinimal);
    CHECK(j.scenario.environment.diffusion_coefficient ==
          doctest::Approx(k.scenario.environment.diffusion_coefficient));
    REQUIRE(j.scenario.sampling.t_grid.size() == k.scenario.sampling.t_grid.size());
    for (std::size_t i = 0; i < j.scenario.sampling.t_grid.size(); ++i) {
      CHECK(j.scenario.sampling.t_grid[i] == doctest::Approx(k.scenario.sampling.t_grid[i]));
    }
  }

  TEST_CASE("overrides accept aliases") {
    const auto c = cf::load_config_text(kMinimal, {"D=120", "lambda=1e-3", "receiver=both",
                                                   "seed=7", "dt=1 ms", "absorption_mode=intra_step"});
    CHECK(c.scenario.environment.diffusion_coefficient == 120.0);
    CHECK(c.scenario.field.density == 1e-3);
    CHECK(c.receivers.size() == 2);
    CHECK(c.seed == 7);
    CHECK(c.particle.dt == doctest::Approx(1e-3));
    CHECK(c.particle_config().absorption_mode == particle::AbsorptionMode::IntraStepCorrection);
    CHECK(c.particle_config().molecules_per_tx == 10000);
    CHECK(c.for_receiver(ReceiverKind::FullyAbsorbing).receiver.kind ==
          ReceiverKind::FullyAbsorbing);
  }

  TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(cf::load_config_text(kMinimal, {"bogus=1"}), cf::ConfigError);
    CHECK_THROWS_AS(cf::load_config_text(kMinimal, {"D"}), cf::ConfigError);
    CHECK_THROWS_AS(cf::load_config_text(kMinimal, {"rr=five"}), cf::ConfigError);
    CHECK_THROWS_AS(cf::parse_keyvalue("[a]\nx = 1\nx = 2\n"), cf::ConfigError);
    CHECK_THROWS_AS(cf::parse_keyvalue("[a\nx = 1\n"), cf::ConfigError);
    CHECK_THROWS_AS(cf::parse_json("{not json"), cf::ConfigError);
    CHECK_THROWS_AS(cf::load_config("/nonexistent/file.toml"), cf::ConfigError);
  }

  TEST_CASE("invariant violations surface as validation errors") {
    try {
      (void)cf::load_config_text(kMinimal, {"rr=0"});
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.violations().front().path == "receiver.radius");
    }
  }

  TEST_CASE("canonical keys") {
    CHECK(cf::canonical_key("R") == "transmitters.max_placement_radius");
    CHECK(cf::canonical_key("tss") == "sampling.interval");
    CHECK(cf::canonical_key("receiver.radius") == "receiver.radius");
  }
}

TEST_CASE("resolved settings round-trip exactly" * doctest::test_suite("config")) {
  const auto a = cf::load_config_text(kMinimal, {"D=123.456789", "R=inf", "receiver=both"});
  const auto text = cf::render_keyvalue(cf::to_settings(a));
  const auto b = cf::load_config_text(text);
  CHECK(cf::to_settings(b) == cf::to_settings(a));
  CHECK(b.scenario.environment.diffusion_coefficient == a.scenario.environment.diffusion_coefficient);
  CHECK(b.scenario.sampling.t_grid == a.scenario.sampling.t_grid);
  CHECK(std::isinf(b.scenario.max_placement_radius));
}
