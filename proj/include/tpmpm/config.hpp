#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpmpm/basis.hpp"
#include "tpmpm/particles.hpp"
#include "tpmpm/types.hpp"

namespace tpmpm {

enum class Scheme { kSemiImplicit, kExplicit };

struct GridSpec {
  Vec2 origin = Vec2::Zero();
  double cell_size = 0.0;
  int nx = 0;
  int ny = 0;
  bool operator==(const GridSpec&) const = default;
};

//! Soil region seeded with two-phase particles
struct ParticleRegion {
  std::string name;
  Box box;
  int particles_per_cell = 4;
  std::string material;
  double initial_pore_pressure = 0.0;
  Stress initial_stress;
  bool operator==(const ParticleRegion&) const = default;
};

struct RigidBodySpec {
  Box box;
  int particles_per_cell = 4;
  double mass = 0.0;
  Vec2 initial_velocity = Vec2::Zero();
  Vec2 load_direction = Vec2::Zero();
  Ramp traction = Ramp::constant(0.0);
  double loaded_length = 0.0;
  std::array<bool, 2> fixed{false, false};
  bool operator==(const RigidBodySpec&) const = default;
};

//! Velocity fixity on grid nodes inside box
struct VelocityConstraint {
  Box box;
  int component = 0;  // 0 = x, 1 = y
  bool solid = true;
  bool water = true;
  bool operator==(const VelocityConstraint&) const = default;
};

//! Traction on soil particles inside box; force per particle is
//! traction * ramp(t) * particle edge length across face_normal
struct TractionLoad {
  Box box;
  Vec2 traction = Vec2::Zero();
  Vec2 face_normal = Vec2::UnitY();
  Ramp ramp = Ramp::constant(1.0);
  bool operator==(const TractionLoad&) const = default;
};

enum class ProbeTarget { kParticle, kRigid };

//! Time series sampled at the particle nearest to point (fixed at start) or
//! on the rigid body
struct ProbeSpec {
  std::string id;
  ProbeTarget target = ProbeTarget::kParticle;
  Vec2 point = Vec2::Zero();
  std::vector<std::string> fields;
  bool operator==(const ProbeSpec&) const = default;
};

struct OutputSpec {
  //! 0 = every step
  double probe_interval = 0.0;
  //! 0 = initial and final snapshot only
  double snapshot_interval = 0.0;
  //! "particles-csv" and/or "legacy-vtk-points"
  std::vector<std::string> snapshot_formats{"particles-csv"};
  bool operator==(const OutputSpec&) const = default;
};

struct SolverSpec {
  double tolerance = 1e-8;
  //! 0 = 10 x number of DOFs
  int max_iterations = 0;
  //! detection tolerance as a fraction of the cell size
  double contact_tolerance = 1e-6;
  bool operator==(const SolverSpec&) const = default;
};

//! Complete declarative description of a run
struct ScenarioConfig {
  std::string name;
  GridSpec grid;
  std::vector<SoilMaterial> materials;
  std::vector<ParticleRegion> regions;
  std::optional<RigidBodySpec> rigid;
  std::vector<VelocityConstraint> velocity_constraints;
  //! drained (p = 0) nodes
  std::vector<Box> drained;
  //! true: no relative water flow normal to the rigid interface
  bool impervious_contact = false;
  std::vector<TractionLoad> tractions;
  Vec2 gravity = Vec2::Zero();
  double dt = 0.0;
  double end_time = 0.0;
  Scheme scheme = Scheme::kSemiImplicit;
  BasisKind basis = BasisKind::kLinear;
  double pic_fraction = 0.0;
  //! water bulk modulus of the explicit baseline
  double water_bulk_modulus = 2.2e9;
  std::vector<ProbeSpec> probes;
  OutputSpec output;
  SolverSpec solver;
  std::uint64_t seed = 0;
  //! random perturbation of seeded positions as a fraction of the spacing
  double particle_jitter = 0.0;

  //! Throws ConfigError naming the offending field
  void validate() const;
  const SoilMaterial& material(const std::string& name) const;

  bool operator==(const ScenarioConfig&) const = default;
};

//! Parse the JSON scenario format. Errors carry the field path or the
//! line/column of the syntax error.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& s);
std::string to_string(BasisKind kind);
BasisKind basis_from_string(const std::string& s);

}  // namespace tpmpm
