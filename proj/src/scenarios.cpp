#include "tpmpm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "tpmpm/error.hpp"

namespace tpmpm {

double TerzaghiOracle::consolidation_coefficient_of(double permeability,
                                                    double constrained_modulus,
                                                    double water_unit_weight) {
  return permeability * constrained_modulus / water_unit_weight;
}

double terzaghi_pressure(double z, double t, const TerzaghiOracle& oracle) {
  const double tv = oracle.time_factor(t);
  const double zh = z / oracle.drainage_height;
  double sum = 0.0;
  for (int m = 0; m < oracle.terms; ++m) {
    const double mm = std::numbers::pi * (2.0 * m + 1.0) / 2.0;
    sum += 2.0 / mm * std::sin(mm * zh) * std::exp(-mm * mm * tv);
  }
  return oracle.initial_pressure * sum;
}

double terzaghi_average_consolidation(double time_factor, int terms) {
  double sum = 0.0;
  for (int m = 0; m < terms; ++m) {
    const double mm = std::numbers::pi * (2.0 * m + 1.0) / 2.0;
    sum += 2.0 / (mm * mm) * std::exp(-mm * mm * time_factor);
  }
  return 1.0 - sum;
}

ProfileError terzaghi_profile_error(std::span<const TwoPhaseParticle> particles,
                                    const TerzaghiOracle& oracle, double time,
                                    double top) {
  ProfileError e;
  e.time = time;
  e.time_factor = oracle.time_factor(time);
  struct Acc {
    double y = 0.0, p = 0.0;
    int n = 0;
  };
  std::map<long long, Acc> bins;
  for (const auto& pt : particles) {
    auto& a = bins[std::llround(pt.initial_position.y() * 1e9)];
    a.y += pt.position.y();
    a.p += pt.pore_pressure;
    ++a.n;
  }
  double num = 0.0, den = 0.0;
  for (const auto& [key, a] : bins) {
    const double z = top - a.y / a.n;
    const double p = a.p / a.n;
    const double exact = terzaghi_pressure(z, time, oracle);
    num += (p - exact) * (p - exact);
    den += exact * exact;
    e.layers.push_back({z, p});
  }
  std::sort(e.layers.begin(), e.layers.end());
  e.relative_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);

  const double zm = 0.5 * oracle.drainage_height;
  e.midpoint_exact = terzaghi_pressure(zm, time, oracle);
  for (std::size_t i = 1; i < e.layers.size(); ++i) {
    const auto& a = e.layers[i - 1];
    const auto& b = e.layers[i];
    if (zm >= a[0] && zm <= b[0]) {
      const double w = b[0] > a[0] ? (zm - a[0]) / (b[0] - a[0]) : 0.0;
      e.midpoint_numeric = (1.0 - w) * a[1] + w * b[1];
      break;
    }
  }
  e.midpoint_relative =
      std::abs(e.midpoint_numeric - e.midpoint_exact) / std::abs(e.midpoint_exact);
  return e;
}

namespace {

constexpr double kBig = 1e3;

Box row(double y) { return {Vec2(-kBig, y), Vec2(kBig, y)}; }
Box column(double x) { return {Vec2(x, -kBig), Vec2(x, kBig)}; }
Box everywhere() { return {Vec2(-kBig, -kBig), Vec2(kBig, kBig)}; }

VelocityConstraint fix(const Box& b, int component) {
  return {b, component, true, true};
}

}  // namespace

ScenarioConfig build_consolidation() {
  using namespace consolidation;
  ScenarioConfig c;
  c.name = "consolidation";
  c.grid = {Vec2::Zero(), 0.02, 1, 52};

  SoilMaterial soil;
  soil.name = "column";
  soil.youngs_modulus = 10.0e6;
  soil.poisson_ratio = 0.2;
  soil.solid_density = 2700.0;
  soil.water_density = 1000.0;
  soil.porosity = 0.3;
  soil.permeability = 1.0e-3;
  c.materials = {soil};

  ParticleRegion region;
  region.name = "column";
  region.box = {Vec2::Zero(), Vec2(kColumnWidth, kColumnHeight)};
  region.particles_per_cell = 4;
  region.material = "column";
  region.initial_pore_pressure = kLoad;
  c.regions = {region};

  RigidBodySpec cap;
  cap.box = {Vec2(0.0, kColumnHeight), Vec2(kColumnWidth, kColumnHeight + 0.02)};
  cap.particles_per_cell = 4;
  cap.mass = 1.0;
  cap.load_direction = Vec2(0.0, -1.0);
  cap.traction = Ramp::constant(kLoad);
  cap.loaded_length = kColumnWidth;
  cap.fixed = {true, false};
  c.rigid = cap;

  c.velocity_constraints = {fix(everywhere(), 0), fix(row(0.0), 1)};
  c.drained = {row(kColumnHeight)};

  c.dt = 1.0e-4;
  c.end_time = 2.0;
  c.probes = {
      {"A", ProbeTarget::kParticle, Vec2(0.01, 0.0),
       {"pore_pressure", "effective_stress_yy", "total_stress_yy"}},
      {"cap", ProbeTarget::kRigid, Vec2::Zero(),
       {"displacement_y", "velocity_y"}}};
  c.output.probe_interval = 1.0e-3;
  c.output.snapshot_interval = 0.5;
  return c;
}

ScenarioConfig build_impact() {
  using namespace impact;
  ScenarioConfig c;
  c.name = "impact";
  c.grid = {Vec2::Zero(), 0.02, 60, 3};

  SoilMaterial bar;
  bar.name = "bar";
  bar.youngs_modulus = 2.0e6;
  bar.poisson_ratio = 0.2;
  bar.solid_density = 2700.0;
  bar.water_density = 1000.0;
  bar.porosity = 0.3;
  bar.permeability = 1.0e-3;
  c.materials = {bar};

  ParticleRegion region;
  region.name = "bar";
  region.box = {Vec2::Zero(), Vec2(kBarLength, kBarHeight)};
  region.particles_per_cell = 4;
  region.material = "bar";
  c.regions = {region};

  RigidBodySpec block;
  block.box = {Vec2(kBarLength + kGap, 0.0),
               Vec2(kBarLength + kGap + 0.04, kBarHeight)};
  block.particles_per_cell = 4;
  block.mass = kBlockMass;
  block.load_direction = Vec2(-1.0, 0.0);
  block.traction = Ramp::constant(kLoad);
  block.loaded_length = kBarHeight;
  block.fixed = {false, true};
  c.rigid = block;

  c.velocity_constraints = {fix(column(0.0), 0), fix(row(0.0), 1),
                            fix(row(kBarHeight), 1)};
  c.drained = {{Vec2(kBarLength, -kBig), Vec2(kBarLength, kBig)}};

  c.dt = 2.0e-5;
  c.end_time = 0.04;
  c.probes = {
      {"interface", ProbeTarget::kParticle, Vec2(kBarLength, 0.5 * kBarHeight),
       {"total_stress_xx", "pore_pressure", "effective_stress_xx"}},
      {"center", ProbeTarget::kParticle,
       Vec2(0.5 * kBarLength, 0.5 * kBarHeight),
       {"pore_pressure", "total_stress_xx"}},
      {"block", ProbeTarget::kRigid, Vec2::Zero(),
       {"velocity_x", "displacement_x"}}};
  c.output.probe_interval = 0.0;
  c.output.snapshot_interval = 0.01;
  return c;
}

double footing::peak_traction() {
  return (2.0 + std::numbers::pi) * kUndrainedStrength;
}

ScenarioConfig build_footing() {
  using namespace footing;
  ScenarioConfig c;
  c.name = "footing";
  c.grid = {Vec2::Zero(), 0.2, 40, 32};

  SoilMaterial clay;
  clay.name = "clay";
  clay.youngs_modulus = 1.0e6;
  clay.poisson_ratio = 0.2;
  clay.undrained_strength = kUndrainedStrength;
  clay.solid_density = 2150.0;
  clay.water_density = 1000.0;
  clay.porosity = 0.2;
  clay.permeability = 5.0e-3;
  c.materials = {clay};

  ParticleRegion region;
  region.name = "soil";
  region.box = {Vec2::Zero(), Vec2(kSoilWidth, kSoilDepth)};
  region.particles_per_cell = 9;
  region.material = "clay";
  c.regions = {region};

  RigidBodySpec foundation;
  foundation.box = {Vec2(0.0, kSoilDepth), Vec2(kHalfWidth, kSoilDepth + 0.2)};
  foundation.particles_per_cell = 4;
  foundation.mass = 240.0;
  foundation.load_direction = Vec2(0.0, -1.0);
  foundation.traction = Ramp{{{0.0, 0.0}, {1.0, peak_traction()}}};
  foundation.loaded_length = kHalfWidth;
  foundation.fixed = {true, false};
  c.rigid = foundation;

  c.velocity_constraints = {fix(row(0.0), 0), fix(row(0.0), 1),
                            fix(column(0.0), 0), fix(column(kSoilWidth), 0)};
  c.drained = {{Vec2(kHalfWidth + 0.02, kSoilDepth), Vec2(kBig, kSoilDepth)}};
  c.impervious_contact = true;
  //! linear shape functions lose the run to cell crossing under the footing
  c.basis = BasisKind::kGimp;

  c.dt = 1.0e-4;
  c.end_time = 2.0;
  c.probes = {
      {"A", ProbeTarget::kParticle, Vec2(0.0, kSoilDepth - 0.5),
       {"pore_pressure", "effective_stress_yy"}},
      {"B", ProbeTarget::kParticle, Vec2(kHalfWidth, kSoilDepth),
       {"pore_pressure", "effective_stress_yy", "plastic_strain"}},
      {"foundation", ProbeTarget::kRigid, Vec2::Zero(),
       {"traction", "displacement_y"}}};
  c.output.probe_interval = 1.0e-2;
  c.output.snapshot_interval = 0.1;
  return c;
}

std::vector<std::string> scenario_names() {
  return {"consolidation", "impact", "footing"};
}

ScenarioConfig build_scenario(const std::string& name) {
  if (name == "consolidation") return build_consolidation();
  if (name == "impact") return build_impact();
  if (name == "footing") return build_footing();
  throw ConfigError("unknown scenario '" + name +
                    "' (expected consolidation, impact or footing)");
}

TerzaghiOracle consolidation_oracle(const ScenarioConfig& config) {
  const auto& m = config.materials.at(0);
  TerzaghiOracle o;
  o.drainage_height = config.regions.at(0).box.hi.y() -
                      config.regions.at(0).box.lo.y();
  o.consolidation_coefficient = TerzaghiOracle::consolidation_coefficient_of(
      m.permeability, m.constrained_modulus(),
      m.water_density * kStandardGravity);
  o.initial_pressure = config.regions.at(0).initial_pore_pressure;
  return o;
}

}  // namespace tpmpm
