#include <doctest.h>

#include <atomic>
#include <vector>

#include "helpers.hpp"
#include "tpmpm/error.hpp"
#include "tpmpm/grid.hpp"
#include "tpmpm/parallel.hpp"
#include "tpmpm/particles.hpp"

using namespace tpmpm;

TEST_CASE("grid indexing") {
  const auto g = build_grid(Vec2(1.0, -2.0), 0.5, 4, 3);
  CHECK(g.num_nodes() == 20);
  CHECK(g.index(3, 2) == 13);
  CHECK(g.ijk(13) == std::array<int, 2>{3, 2});
  CHECK(g.coordinates(13).isApprox(Vec2(2.5, -1.0)));
  CHECK(g.upper_corner().isApprox(Vec2(3.0, -0.5)));
  CHECK(g.contains(Vec2(2.0, -1.0)));
  CHECK_FALSE(g.contains(Vec2(3.1, -1.0)));
  CHECK_THROWS_AS(build_grid(Vec2::Zero(), 0.0, 2, 2), ConfigError);
  CHECK_THROWS_AS(build_grid(Vec2::Zero(), 1.0, 0, 2), ConfigError);
}

TEST_CASE("reset keeps constraints") {
  auto g = build_grid(Vec2::Zero(), 1.0, 2, 2);
  g.constraints(4).drained = true;
  g.node(4).tb.mass_mix = 3.0;
  g.node(4).contact_detected = true;
  g.reset();
  CHECK(g.node(4).tb.mass_mix == 0.0);
  CHECK_FALSE(g.node(4).contact_detected);
  CHECK(g.constraints(4).drained);
}

TEST_CASE("seeding on the sub-cell lattice") {
  const auto g = build_grid(Vec2::Zero(), 0.02, 4, 4);
  const auto soil = test::sample_soil();
  const auto p4 = seed_particles(g, {Vec2::Zero(), Vec2(0.04, 0.02)}, 4, soil);
  REQUIRE(p4.size() == 8);
  CHECK(p4[0].position.isApprox(Vec2(0.005, 0.005)));
  for (const auto& p : p4) {
    CHECK(p.volume == doctest::Approx(1.0e-4));
    CHECK(p.initial_half_size.isApprox(Vec2(0.005, 0.005)));
    CHECK(p.porosity == soil.porosity);
  }
  const auto p9 = seed_particles(g, {Vec2::Zero(), Vec2(0.02, 0.02)}, 9, soil);
  CHECK(p9.size() == 9);
  double v = 0.0;
  for (const auto& p : p9) v += p.volume;
  CHECK(v == doctest::Approx(4.0e-4));
  const auto r = seed_rigid_particles(g, {Vec2(0.0, 0.06), Vec2(0.04, 0.08)}, 4);
  CHECK(r.size() == 8);
  CHECK_THROWS_AS(seed_particles(g, {Vec2::Zero(), Vec2(0.2, 0.02)}, 4, soil),
                  ConfigError);
  CHECK_THROWS_AS(seed_particles(g, {Vec2::Zero(), Vec2(0.02, 0.02)}, 3, soil),
                  ConfigError);
}

TEST_CASE("material derived quantities and validation") {
  auto m = test::sample_soil();
  CHECK(m.mixture_density() == doctest::Approx(2190.0));
  CHECK(m.constrained_modulus() == doctest::Approx(10.0e6 * 0.8 / 0.72));
  CHECK_NOTHROW(m.validate());
  m.porosity = 1.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("ramp interpolation") {
  const Ramp r{{{0.0, 0.0}, {1.0, 50.0}, {1.0, 60.0}, {2.0, 60.0}}};
  CHECK(r(-1.0) == 0.0);
  CHECK(r(0.25) == doctest::Approx(12.5));
  CHECK(r(1.5) == doctest::Approx(60.0));
  CHECK(r(9.0) == 60.0);
  CHECK(Ramp::constant(3.0)(100.0) == 3.0);
  CHECK_THROWS_AS((Ramp{{{1.0, 0.0}, {0.5, 1.0}}}.validate("t")), ConfigError);
  CHECK_THROWS_AS(Ramp{}.validate("t"), ConfigError);
}

TEST_CASE("rigid body external force") {
  RigidBody b;
  b.mass = 3.24;
  b.load_direction = Vec2(-1.0, 0.0);
  b.traction = Ramp::constant(10.0e3);
  b.loaded_length = 0.06;
  b.fixed = {false, true};
  CHECK(b.external_force(0.0, Vec2::Zero()).isApprox(Vec2(-600.0, 0.0)));
  Vec2 v(1.0, 2.0);
  b.constrain(v);
  CHECK(v == Vec2(1.0, 0.0));
}

TEST_CASE("parallel_for visits every index once") {
  for (int threads : {1, 3, 8}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    std::vector<std::atomic<int>> hits(1003);
    parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  set_thread_count(1);
}
