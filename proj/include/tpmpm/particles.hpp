#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tpmpm/grid.hpp"
#include "tpmpm/types.hpp"

namespace tpmpm {

//! Axis-aligned rectangle [lo, hi]
struct Box {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();

  bool contains(const Vec2& x, double tol = 0.0) const {
    return x.x() >= lo.x() - tol && x.x() <= hi.x() + tol &&
           x.y() >= lo.y() - tol && x.y() <= hi.y() + tol;
  }
  double area() const {
    return std::max(0.0, hi.x() - lo.x()) * std::max(0.0, hi.y() - lo.y());
  }
  bool operator==(const Box&) const = default;
};

//! Saturated soil: skeleton stiffness, optional Tresca strength and the
//! properties of both constituents
struct SoilMaterial {
  std::string name;
  double youngs_modulus = 0.0;
  double poisson_ratio = 0.0;
  //! Tresca undrained shear strength; empty means linear poroelastic
  std::optional<double> undrained_strength;
  double solid_density = 0.0;   // rho_sR
  double water_density = 1000.0;  // rho_wR
  double porosity = 0.0;
  //! hydraulic conductivity [m/s]
  double permeability = 0.0;

  //! Throws ConfigError when a value is out of range
  void validate() const;
  double mixture_density() const {
    return (1.0 - porosity) * solid_density + porosity * water_density;
  }
  double shear_modulus() const {
    return youngs_modulus / (2.0 * (1.0 + poisson_ratio));
  }
  double lame_lambda() const {
    return youngs_modulus * poisson_ratio /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
  double constrained_modulus() const {
    return youngs_modulus * (1.0 - poisson_ratio) /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }

  bool operator==(const SoilMaterial&) const = default;
};

//! Single-point material point carrying both solid skeleton and pore water
struct TwoPhaseParticle {
  std::size_t id = 0;
  Vec2 position = Vec2::Zero();
  Vec2 initial_position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();  // solid velocity
  double volume = 0.0;
  double initial_volume = 0.0;
  double porosity = 0.0;
  double initial_porosity = 0.0;
  double solid_density = 0.0;
  double water_density = 0.0;
  double permeability = 0.0;
  double pore_pressure = 0.0;
  Stress effective_stress;
  Strain strain;
  Strain plastic_strain;
  Mat2 deformation_gradient = Mat2::Identity();
  //! half particle spacing per axis in the reference configuration
  Vec2 initial_half_size = Vec2::Zero();
  int material = 0;
  int body = 0;
  //! external traction force assigned to this particle (per unit depth)
  Vec2 traction_force = Vec2::Zero();

  double solid_mass() const {
    return (1.0 - porosity) * solid_density * volume;
  }
  double water_mass() const { return porosity * water_density * volume; }
  double mixture_mass() const { return solid_mass() + water_mass(); }
  double mixture_density() const {
    return (1.0 - porosity) * solid_density + porosity * water_density;
  }
  //! Total stress T_E - p I (in-plane), tension positive
  Stress total_stress() const {
    Stress s = effective_stress;
    s.xx -= pore_pressure;
    s.yy -= pore_pressure;
    s.zz -= pore_pressure;
    return s;
  }
  Vec2 displacement() const { return position - initial_position; }
};

//! Member point of a rigid body; only geometry is carried
struct RigidParticle {
  Vec2 position = Vec2::Zero();
  Vec2 initial_position = Vec2::Zero();
  Vec2 half_size = Vec2::Zero();
  int body = 1;
};

//! Piecewise-linear time function with nondecreasing knots; constant
//! beyond the ends
struct Ramp {
  std::vector<std::array<double, 2>> knots;  // (time, value)

  double operator()(double t) const;
  static Ramp constant(double value) { return Ramp{{{0.0, value}}}; }
  //! Throws ConfigError if knots are empty or decreasing
  void validate(const std::string& what) const;

  bool operator==(const Ramp&) const = default;
};

//! Rigid body with one global acceleration and velocity
struct RigidBody {
  double mass = 0.0;
  Vec2 velocity = Vec2::Zero();
  Vec2 acceleration = Vec2::Zero();
  Vec2 displacement = Vec2::Zero();
  //! unit direction of the applied load
  Vec2 load_direction = Vec2::Zero();
  //! applied traction [Pa] over time
  Ramp traction = Ramp::constant(0.0);
  //! loaded edge length [m per unit depth]
  double loaded_length = 0.0;
  //! velocity components held at zero
  std::array<bool, 2> fixed{false, false};
  std::vector<RigidParticle> particles;

  //! External force resultant (traction plus gravity) at time t
  Vec2 external_force(double t, const Vec2& gravity) const {
    return traction(t) * loaded_length * load_direction + mass * gravity;
  }
  void constrain(Vec2& v) const {
    for (int d = 0; d < 2; ++d)
      if (fixed[d]) v[d] = 0.0;
  }
};

//! Fill region with particles at regular sub-cell offsets. Supports 4 and 9
//! particles per cell. Each particle gets V = h^2 / ppc and half-spacing
//! domain radii. Throws ConfigError when the region leaves the grid.
std::vector<TwoPhaseParticle> seed_particles(const BackgroundGrid& grid,
                                             const Box& region,
                                             int particles_per_cell,
                                             const SoilMaterial& material,
                                             int material_index = 0);

//! Same lattice as seed_particles, geometry only
std::vector<RigidParticle> seed_rigid_particles(const BackgroundGrid& grid,
                                                const Box& region,
                                                int particles_per_cell);

}  // namespace tpmpm
