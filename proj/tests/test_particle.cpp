#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "molcomm/channel.hpp"
#include "molcomm/particle.hpp"

using namespace molcomm;
namespace pt = molcomm::particle;

namespace {

geometry::PPPRealization single(double x) {
  geometry::PPPRealization r;
  r.positions = {{x, 0.0, 0.0}};
  r.nearest_index = 0;
  return r;
}

pt::ParticleSimConfig config(double dt, std::uint64_t molecules, pt::AbsorptionMode mode,
                             SamplingScheme scheme) {
  pt::ParticleSimConfig c;
  c.dt = dt;
  c.molecules_per_tx = molecules;
  c.absorption_mode = mode;
  c.record_scheme = std::move(scheme);
  return c;
}

}  // namespace

TEST_SUITE("particle") {
  TEST_CASE("config validation") {
    auto c = config(0.01, 10, pt::AbsorptionMode::StepEndCheck,
                    SamplingScheme::uniform(0.0, 0.1, 0.05, 0.01));
    CHECK_NOTHROW(pt::validate_config(c));
    c.dt = 0.02;
    CHECK_THROWS(pt::validate_config(c));
    c.dt = 0.0;
    CHECK_THROWS(pt::validate_config(c));
    c.dt = 0.01;
    c.t_end = 0.05;
    CHECK_THROWS(pt::validate_config(c));
    c.t_end = 0.11;
    CHECK_NOTHROW(pt::validate_config(c));
    c.molecules_per_tx = 0;
    CHECK_THROWS(pt::validate_config(c));
  }

  TEST_CASE("absorbing counts are cumulative and bounded") {
    const auto s = fixtures::fig2(ReceiverKind::FullyAbsorbing);
    const auto c = config(1e-3, 2000, pt::AbsorptionMode::IntraStepCorrection,
                          SamplingScheme::uniform(0.0, 0.5, 0.1, 0.01));
    const auto out = pt::simulate_realization(s, c, single(8.0), 17);
    REQUIRE(out.times.size() == c.record_scheme.t_grid.size() * 2);
    for (std::size_t k = 1; k < out.times.size(); ++k) {
      CHECK(out.nearest[k] >= out.nearest[k - 1]);
      CHECK(out.nearest[k] <= 2000);
    }
    CHECK(out.nearest[0] == 0);
    CHECK(out.interferers.back() == 0);
  }

  TEST_CASE("absorbing hit fraction matches the analytic fraction") {
    const auto s = fixtures::fig2(ReceiverKind::FullyAbsorbing);
    const auto c = config(1e-3, 20000, pt::AbsorptionMode::IntraStepCorrection,
                          SamplingScheme::uniform(0.2, 0.2, 0.1, 0.01));
    const auto out = pt::simulate_realization(s, c, single(10.0), 23);
    const double p = channel::fa_fraction_raw(10.0, 0.2, 80.0, 5.0);
    const double est = static_cast<double>(out.nearest[0]) / 20000.0;
    CHECK(std::abs(est - p) < 4.0 * std::sqrt(p * (1 - p) / 20000.0));
  }

  TEST_CASE("passive occupancy matches the analytic fraction") {
    const auto s = fixtures::fig2(ReceiverKind::Passive);
    const auto c = config(0.01, 20000, pt::AbsorptionMode::StepEndCheck,
                          SamplingScheme::uniform(0.1, 0.1, 0.1, 0.01));
    const auto out = pt::simulate_realization(s, c, single(8.0), 29);
    const double p = channel::ps_fraction_raw(8.0, 0.1, 80.0, 5.0);
    const double est = static_cast<double>(out.nearest[0]) / 20000.0;
    CHECK(std::abs(est - p) < 4.0 * std::sqrt(p * (1 - p) / 20000.0));
  }

  TEST_CASE("identical across thread counts") {
    const auto s = fixtures::fig2(ReceiverKind::Passive);
    auto c = config(0.01, 3000, pt::AbsorptionMode::StepEndCheck,
                    SamplingScheme::uniform(0.0, 0.2, 0.1, 0.01));
    auto r = single(9.0);
    r.positions.push_back({0.0, 12.0, 0.0});
    c.threads = 1;
    const auto a = pt::simulate_realization(s, c, r, 5);
    c.threads = 4;
    const auto b = pt::simulate_realization(s, c, r, 5);
    CHECK(a.nearest == b.nearest);
    CHECK(a.interferers == b.interferers);
    CHECK(a.total(2) == a.nearest[2] + a.interferers[2]);
  }

  TEST_CASE("no diffusion keeps molecules in place") {
    auto s = fixtures::fig2(ReceiverKind::Passive);
    s.environment.diffusion_coefficient = 0.0;
    const auto c = config(0.01, 100, pt::AbsorptionMode::StepEndCheck,
                          SamplingScheme::uniform(0.0, 0.1, 0.05, 0.01));
    auto r = single(3.0);  // inside the receiver
    r.positions.push_back({20.0, 0.0, 0.0});
    const auto out = pt::simulate_realization(s, c, r, 1);
    for (std::size_t k = 0; k < out.times.size(); ++k) {
      CHECK(out.nearest[k] == 100);
      CHECK(out.interferers[k] == 0);
    }
  }

  TEST_CASE("ensemble scaling and reproducibility") {
    auto s = fixtures::with_grid(fixtures::fig2(ReceiverKind::Passive), 0.0, 0.04, 0.02, 0.01);
    s.max_placement_radius = 25.0;
    auto c = config(0.01, 20, pt::AbsorptionMode::StepEndCheck, s.sampling);
    const auto a = pt::simulate_ensemble(s, c, 6, 2, 99);
    const auto b = pt::simulate_ensemble(s, c, 6, 2, 99);
    CHECK(a.permutation_levels == b.permutation_levels);
    CHECK(a.n_permutations == 6);
    CHECK(a.permutation_levels.size() == 6);
    // Levels are mean counts over 2 repetitions scaled by N_tx / molecules_per_tx.
    for (const auto& row : a.permutation_levels) {
      for (double v : row) CHECK(std::fmod(v, 1e4 / 20.0 / 2.0) == doctest::Approx(0.0));
    }
    CHECK_THROWS(pt::simulate_ensemble(s, c, 0, 1, 1));
    s.max_placement_radius = kUnbounded;
    CHECK_THROWS(pt::simulate_ensemble(s, c, 1, 1, 1));
  }

  TEST_CASE("ensemble csv header") {
    auto s = fixtures::with_grid(fixtures::fig2(ReceiverKind::FullyAbsorbing), 0.0, 0.02, 0.01, 0.01);
    s.max_placement_radius = 20.0;
    const auto c = config(0.01, 5, pt::AbsorptionMode::StepEndCheck, s.sampling);
    std::ostringstream out;
    pt::write_ensemble_csv(out, pt::simulate_ensemble(s, c, 2, 1, 4));
    CHECK(out.str().rfind("t,mean,std_error,series,receiver\n", 0) == 0);
    CHECK(out.str().find(",aggregate,absorbing\n") != std::string::npos);
  }

  TEST_CASE("absorption mode names") {
    CHECK(pt::parse_absorption_mode("intra_step") == pt::AbsorptionMode::IntraStepCorrection);
    CHECK(pt::to_string(pt::AbsorptionMode::StepEndCheck) == "step_end");
    CHECK_THROWS(pt::parse_absorption_mode("sometimes"));
  }
}
