#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "molcomm/channel.hpp"
#include "molcomm/geometry.hpp"
#include "molcomm/stats.hpp"
#include "oracles.hpp"

using namespace molcomm;

TEST_SUITE("geometry") {
  TEST_CASE("nearest-distance pdf integrates to the cdf") {
    for (double lambda : {1e-4, 1e-3}) {
      auto pdf = [lambda](double x) { return geometry::nearest_pdf_3d(x, lambda, 5.0); };
      for (double x : {6.0, 10.0, 20.0, 40.0}) {
        CHECK(oracle::simpson(pdf, 5.0, x, 20000) ==
              doctest::Approx(geometry::nearest_cdf_3d(x, lambda, 5.0)).epsilon(1e-10));
      }
      CHECK(oracle::simpson(pdf, 5.0, 200.0, 200000) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("cdf is monotone and bounded") {
    double previous = 0.0;
    for (double x = 5.0; x < 100.0; x += 0.37) {
      const double c = geometry::nearest_cdf_3d(x, 1e-4, 5.0);
      CHECK(c >= previous);
      CHECK(c <= 1.0);
      previous = c;
    }
    CHECK(geometry::nearest_cdf_3d(5.0, 1e-4, 5.0) == 0.0);
    CHECK(geometry::nearest_pdf_3d(4.0, 1e-4, 5.0) == 0.0);
  }

  TEST_CASE("median nearest distance frozen value") {
    CHECK(geometry::nearest_quantile_3d(0.5, 1e-4, 5.0) ==
          doctest::Approx(oracle::kMedianNearestRef).epsilon(1e-13));
  }

  TEST_CASE("quantile inverts the cdf in 3D and 2D") {
    fixtures::Lcg gen(2);
    for (int i = 0; i < 200; ++i) {
      const double p = gen.uniform(0.0, 0.999999);
      const double q3 = geometry::nearest_quantile_3d(p, 1e-4, 5.0);
      CHECK(geometry::nearest_cdf_3d(q3, 1e-4, 5.0) == doctest::Approx(p).epsilon(1e-12));
      const double q2 = geometry::nearest_quantile_2d(p, 1e-3, 5.0);
      CHECK(geometry::nearest_cdf_2d(q2, 1e-3, 5.0) == doctest::Approx(p).epsilon(1e-12));
    }
  }

  TEST_CASE("2D pdf integrates to one") {
    auto pdf = [](double r) { return geometry::nearest_pdf_2d(r, 1e-3, 5.0); };
    CHECK(oracle::simpson(pdf, 5.0, 150.0, 100000) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("non-positive density is a domain error") {
    CHECK_THROWS_AS(geometry::nearest_pdf_3d(10.0, 0.0, 5.0), channel::DomainError);
    CHECK_THROWS_AS(geometry::nearest_cdf_2d(10.0, -1.0, 5.0), channel::DomainError);
  }

  TEST_CASE("mass beyond R and expected count") {
    CHECK(geometry::nearest_mass_beyond(40.0, 1e-4, 5.0) ==
          doctest::Approx(1.0 - geometry::nearest_cdf_3d(40.0, 1e-4, 5.0)).epsilon(1e-12));
    CHECK(geometry::nearest_mass_beyond(40.0, 1e-4, 5.0) < 1e-6);
    CHECK(geometry::expected_count(1e-4, 5.0, 50.0) ==
          doctest::Approx(1e-4 * 4.0 / 3.0 * std::numbers::pi * (50.0 * 50.0 * 50.0 - 125.0)));
  }

  TEST_CASE("realizations lie in the shell and nearest is correct") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto r = geometry::sample_ppp_shell(1e-4, 5.0, 50.0, seed);
      CHECK(r.generating_seed == seed);
      double best = INFINITY;
      for (const auto& p : r.positions) {
        CHECK(p.norm() >= 5.0);
        CHECK(p.norm() <= 50.0 * (1.0 + 1e-12));
        best = std::min(best, p.norm());
      }
      if (r.positions.empty()) {
        CHECK_FALSE(r.nearest_index.has_value());
      } else {
        REQUIRE(r.nearest_index.has_value());
        CHECK(r.positions[*r.nearest_index].norm() == best);
      }
    }
  }

  TEST_CASE("same seed gives the same realization") {
    const auto a = geometry::sample_ppp_shell(1e-3, 5.0, 30.0, 77);
    const auto b = geometry::sample_ppp_shell(1e-3, 5.0, 30.0, 77);
    CHECK(a.positions == b.positions);
    const auto c = geometry::sample_ppp_shell(1e-3, 5.0, 30.0, 78);
    CHECK(a.positions != c.positions);
  }

  TEST_CASE("count mean and void probability match the Poisson law") {
    const double lambda = 2e-4;
    const double mean = geometry::expected_count(lambda, 5.0, 15.0);  // about 2.72
    const int n = 20000;
    double total = 0.0;
    int empty = 0;
    for (int i = 0; i < n; ++i) {
      const auto r = geometry::sample_ppp_shell(lambda, 5.0, 15.0, 1000 + i);
      total += static_cast<double>(r.positions.size());
      empty += r.positions.empty();
    }
    const double se = std::sqrt(mean / n);
    CHECK(std::abs(total / n - mean) < 4.0 * se);
    const double p0 = std::exp(-mean);
    CHECK(std::abs(static_cast<double>(empty) / n - p0) < 4.0 * std::sqrt(p0 * (1 - p0) / n));
  }

  TEST_CASE("sampled nearest distances follow the analytic law") {
    std::vector<double> d;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
      const auto r = geometry::sample_ppp_shell(1e-4, 5.0, 40.0, seed);
      if (r.nearest_index) d.push_back(r.positions[*r.nearest_index].norm());
    }
    std::sort(d.begin(), d.end());
    const auto ks = stats::ks_statistic(d, [](double x) {
      return geometry::nearest_cdf_3d(x, 1e-4, 5.0);
    });
    CHECK(ks.p_value > 0.001);
  }

  TEST_CASE("directions are isotropic") {
    double sx = 0.0, sz = 0.0, szz = 0.0;
    std::size_t n = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      for (const auto& p : geometry::sample_ppp_shell(1e-3, 5.0, 20.0, seed).positions) {
        sx += p.x / p.norm();
        sz += p.z / p.norm();
        szz += p.z * p.z / (p.x * p.x + p.y * p.y + p.z * p.z);
        ++n;
      }
    }
    REQUIRE(n > 1000);
    CHECK(std::abs(sx / n) < 4.0 / std::sqrt(3.0 * n));
    CHECK(std::abs(sz / n) < 4.0 / std::sqrt(3.0 * n));
    CHECK(szz / n == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  }

  TEST_CASE("ties go to the lowest index") {
    std::vector<geometry::Vec3> pts{{10, 0, 0}, {0, 6, 0}, {0, 0, -6}, {0, 0, 9}};
    CHECK(geometry::identify_nearest(pts) == std::size_t{1});
    CHECK_FALSE(geometry::identify_nearest(std::vector<geometry::Vec3>{}).has_value());
  }

  TEST_CASE("realization csv") {
    std::vector<geometry::PPPRealization> rs;
    geometry::PPPRealization r;
    r.positions = {{1.5, 0, 0}, {0, 0.1, 2}};
    rs.push_back(r);
    std::ostringstream out;
    geometry::write_realizations_csv(out, rs);
    CHECK(out.str() == "realization_id,point_id,x,y,z\n0,0,1.5,0,0\n0,1,0,0.10000000000000001,2\n");
  }
}
