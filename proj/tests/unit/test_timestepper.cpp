#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tpmpm/error.hpp"
#include "tpmpm/io.hpp"
#include "tpmpm/parallel.hpp"
#include "tpmpm/scenarios.hpp"
#include "tpmpm/timestepper.hpp"

using namespace tpmpm;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

bool bitwise_equal(const std::vector<TwoPhaseParticle>& a,
                   const std::vector<TwoPhaseParticle>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x[] = {a[i].position.x(), a[i].position.y(), a[i].velocity.x(),
                        a[i].velocity.y(), a[i].pore_pressure, a[i].volume,
                        a[i].effective_stress.xx, a[i].effective_stress.yy,
                        a[i].effective_stress.xy};
    const double y[] = {b[i].position.x(), b[i].position.y(), b[i].velocity.x(),
                        b[i].velocity.y(), b[i].pore_pressure, b[i].volume,
                        b[i].effective_stress.xx, b[i].effective_stress.yy,
                        b[i].effective_stress.xy};
    if (std::memcmp(x, y, sizeof x) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("explicit stability estimate and warning") {
  auto c = build_consolidation();
  c.scheme = Scheme::kExplicit;
  c.dt = 1e-4;
  Simulation sim(c);
  const auto& m = c.materials[0];
  const double speed = std::sqrt(
      (m.constrained_modulus() + c.water_bulk_modulus / m.porosity) /
      m.mixture_density());
  CHECK(sim.explicit_stable_dt() == doctest::Approx(0.02 / speed));
  REQUIRE(sim.warnings().size() == 1);
  CHECK(sim.warnings()[0].find("exceeds the explicit stability estimate") !=
        std::string::npos);

  c.dt = 5e-6;
  CHECK(Simulation(c).warnings().empty());
  c.scheme = Scheme::kSemiImplicit;
  c.dt = 1e-4;
  CHECK(Simulation(c).warnings().empty());
}

TEST_CASE("initial state of the consolidation column") {
  const auto c = build_consolidation();
  Simulation sim(c);
  CHECK(sim.particles().size() == 200);
  CHECK(sim.rigid()->particles.size() == 4);
  CHECK(sim.time() == 0.0);
  for (const auto& p : sim.particles()) CHECK(p.pore_pressure == 10.0e3);
}

TEST_CASE("solid mass is conserved per particle") {
  for (const auto& name : {"consolidation", "impact"}) {
    CAPTURE(name);
    auto c = build_scenario(name);
    Simulation sim(c);
    std::vector<double> m0;
    for (const auto& p : sim.particles()) m0.push_back(p.solid_mass());
    const int steps = std::string(name) == "impact" ? 900 : 200;
    for (int s = 0; s < steps; ++s) sim.step();
    for (std::size_t i = 0; i < m0.size(); ++i)
      CHECK(std::abs(sim.particles()[i].solid_mass() - m0[i]) <= 1e-12 * m0[i]);
  }
}

TEST_CASE("free flight and contact of the impact block") {
  auto c = build_impact();
  Simulation sim(c);
  const double a = 600.0 / c.rigid->mass;
  for (int s = 0; s < 100; ++s) sim.step();
  CHECK(sim.rigid()->velocity.x() == doctest::Approx(-a * sim.time()).epsilon(1e-12));
  CHECK(sim.rigid()->velocity.y() == 0.0);
  CHECK_FALSE(sim.first_contact_time().has_value());

  int checked = 0;
  while (sim.time() < 0.02) {
    sim.step();
    const Vec2 vr = sim.rigid()->velocity;
    for (const auto& node : sim.grid().nodes()) {
      if (!node.contact_detected || node.tb.mass_mix <= 0.0) continue;
      const Vec2 v = node.tb.velocity_final;
      // after the final correction no detected node penetrates the block
      CHECK((v - vr).dot(node.normal) <=
            4 * std::numeric_limits<double>::epsilon() * (v.norm() + vr.norm()));
      ++checked;
    }
  }
  REQUIRE(sim.first_contact_time().has_value());
  CHECK(*sim.first_contact_time() == doctest::Approx(0.0147).epsilon(3e-3));
  CHECK(checked > 0);
}

TEST_CASE("semi-implicit step diagnostics") {
  Simulation sim(build_consolidation());
  sim.step();
  const auto& st = sim.last_stats();
  CHECK(st.cg_iterations > 0);
  CHECK(st.cg_residual >= 0.0);
  CHECK(sim.pressure_system().size() > 0);
  // the projection removes most of the intermediate divergence
  CHECK(st.divergence_final < st.divergence_star);
  CHECK(sim.steps_taken() == 1);
  CHECK(sim.time() == doctest::Approx(1e-4));
}

TEST_CASE("pure Neumann pressure system is rejected") {
  auto c = build_impact();
  c.drained.clear();
  c.end_time = 0.03;
  Simulation sim(c);
  bool threw = false;
  try {
    while (sim.time() < c.end_time) sim.step();
  } catch (const SolverError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("single-thread runs are bitwise reproducible") {
  auto c = build_consolidation();
  c.end_time = 0.02;
  c.output.probe_interval = 0.0;
  c.output.snapshot_interval = 0.01;
  const auto base = std::filesystem::temp_directory_path() / "tpmpm_repro";
  std::filesystem::remove_all(base);
  set_thread_count(1);
  const auto r1 = run(c, {(base / "a").string(), {}});
  const auto r2 = run(c, {(base / "b").string(), {}});
  CHECK(r1.steps == 200);
  CHECK(r1.snapshot_files.size() == 3);
  CHECK(slurp(base / "a" / "probes.csv") == slurp(base / "b" / "probes.csv"));
  CHECK(slurp(base / "a" / "snapshot_000200.csv") ==
        slurp(base / "b" / "snapshot_000200.csv"));
  const auto back = read_probe_csv((base / "a" / "probes.csv").string());
  CHECK(back.size() == r1.probes.size());
}

TEST_CASE("threaded runs match the single-thread result") {
  auto c = build_impact();
  c.end_time = 0.017;
  c.probes.clear();
  set_thread_count(1);
  Simulation one(c);
  set_thread_count(4);
  Simulation four(c);
  const int steps = 850;
  for (int s = 0; s < steps; ++s) four.step();
  set_thread_count(1);
  for (int s = 0; s < steps; ++s) one.step();
  double worst = 0.0;
  for (std::size_t i = 0; i < one.particles().size(); ++i) {
    const auto& a = one.particles()[i];
    const auto& b = four.particles()[i];
    worst = std::max(worst, (a.position - b.position).norm() / a.position.norm());
    worst = std::max(worst, std::abs(a.pore_pressure - b.pore_pressure) /
                                std::max(1.0, std::abs(a.pore_pressure)));
  }
  CHECK(worst <= 1e-12);
  CHECK(bitwise_equal(one.particles(), four.particles()));
}

TEST_CASE("probe binding and field names") {
  const auto c = build_footing();
  Simulation sim(c);
  ProbeSampler sampler(c, sim);
  const auto a = sampler.particle_of("A");
  REQUIRE(a.has_value());
  CHECK((sim.particles()[*a].position - Vec2(0.0, 5.5)).norm() < 0.2);
  std::vector<ProbeRecord> out;
  sampler.sample(sim, out);
  CHECK(out.size() == 7);
  CHECK_THROWS_AS(particle_field(sim.particles()[0], "temperature"), ConfigError);
  CHECK_THROWS_AS(rigid_field(*sim.rigid(), 0.0, "spin"), ConfigError);
  CHECK(rigid_field(*sim.rigid(), 1.0, "traction") ==
        doctest::Approx(footing::peak_traction()));
}

TEST_CASE("zero-length run writes the initial state only") {
  auto c = build_consolidation();
  c.end_time = 0.0;
  const auto dir = std::filesystem::temp_directory_path() / "tpmpm_zero";
  std::filesystem::remove_all(dir);
  const auto r = run(c, {dir.string(), {}});
  CHECK(r.steps == 0);
  CHECK(r.snapshot_files.size() == 1);
  CHECK(std::filesystem::exists(dir / "probes.csv"));
}

TEST_CASE("a failing step leaves a diagnostic snapshot") {
  auto c = build_impact();
  c.drained.clear();
  c.end_time = 0.03;
  c.probes.clear();
  const auto dir = std::filesystem::temp_directory_path() / "tpmpm_fail";
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(run(c, {dir.string(), {}}), SolverError);
  bool found = false;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    found |= e.path().filename().string().rfind("failure_", 0) == 0;
  CHECK(found);
}
