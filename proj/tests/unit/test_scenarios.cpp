#include <doctest.h>

#include <cmath>

#include "tpmpm/error.hpp"
#include "tpmpm/scenarios.hpp"

using namespace tpmpm;

TEST_CASE("Terzaghi average degree of consolidation") {
  CHECK(terzaghi_average_consolidation(0.197) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(std::abs(terzaghi_average_consolidation(0.197) - 0.5) <= 1e-3);
  CHECK(terzaghi_average_consolidation(0.848) == doctest::Approx(0.9).epsilon(1e-3));
  CHECK(terzaghi_average_consolidation(10.0) == doctest::Approx(1.0));
}

TEST_CASE("Terzaghi pressure series") {
  const auto config = build_consolidation();
  auto oracle = consolidation_oracle(config);
  CHECK(oracle.drainage_height == 1.0);
  CHECK(oracle.initial_pressure == 10.0e3);
  CHECK(oracle.consolidation_coefficient ==
        doctest::Approx(1.0e-3 * (10.0e6 * 0.8 / 0.72) / 9810.0));
  CHECK(oracle.time_of(oracle.time_factor(0.37)) == doctest::Approx(0.37));

  auto fine = oracle;
  fine.terms = 1000;
  for (double tv : {0.05, 0.2, 0.5, 0.9}) {
    const double t = oracle.time_of(tv);
    CHECK(terzaghi_pressure(0.0, t, oracle) == doctest::Approx(0.0));
    for (double z = 0.0; z <= 1.0; z += 0.05)
      CHECK(std::abs(terzaghi_pressure(z, t, oracle) -
                     terzaghi_pressure(z, t, fine)) <= 1e-10 * oracle.initial_pressure);
  }
  // early times: undisturbed at the impervious base
  CHECK(terzaghi_pressure(1.0, oracle.time_of(0.01), fine) ==
        doctest::Approx(10.0e3).epsilon(1e-6));
  // the series value is p0 (1 - U) on average
  const double t = oracle.time_of(0.3);
  double mean = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) mean += terzaghi_pressure((i + 0.5) / n, t, oracle);
  mean /= n;
  CHECK(mean == doctest::Approx(10.0e3 * (1.0 - terzaghi_average_consolidation(0.3)))
                    .epsilon(1e-5));
}

TEST_CASE("built-in scenarios are valid") {
  for (const auto& name : scenario_names()) {
    CAPTURE(name);
    const auto c = build_scenario(name);
    CHECK(c.name == name);
    CHECK_NOTHROW(c.validate());
    CHECK(c.rigid.has_value());
  }
  CHECK_THROWS_AS(build_scenario("dam-break"), ConfigError);
}

TEST_CASE("impact kinematics of the free block") {
  const auto c = build_impact();
  const double force = c.rigid->traction(0.0) * c.rigid->loaded_length;
  CHECK(force == doctest::Approx(600.0));
  const double a = force / c.rigid->mass;
  CHECK(a == doctest::Approx(185.185).epsilon(1e-5));
  // time to close the gap and the velocity on arrival
  const double t = std::sqrt(2.0 * impact::kGap / a);
  CHECK(t == doctest::Approx(0.0147).epsilon(2e-3));
  CHECK(a * t == doctest::Approx(2.72).epsilon(1e-3));
}

TEST_CASE("footing load history") {
  const auto c = build_footing();
  CHECK(footing::peak_traction() == doctest::Approx(51.416e3).epsilon(1e-4));
  CHECK(c.rigid->traction(0.5) == doctest::Approx(0.5 * footing::peak_traction()));
  CHECK(c.rigid->traction(2.0) == doctest::Approx(footing::peak_traction()));
  CHECK(c.end_time == 2.0);
}
