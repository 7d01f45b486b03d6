#pragma once

#include <random>
#include <vector>

#include "tpmpm/grid.hpp"
#include "tpmpm/particles.hpp"

namespace tpmpm::test {

inline SoilMaterial sample_soil() {
  SoilMaterial m;
  m.name = "soil";
  m.youngs_modulus = 10.0e6;
  m.poisson_ratio = 0.2;
  m.solid_density = 2700.0;
  m.water_density = 1000.0;
  m.porosity = 0.3;
  m.permeability = 1.0e-3;
  return m;
}

//! Particles at random interior positions with random velocity and pressure
inline std::vector<TwoPhaseParticle> random_particles(const BackgroundGrid& g,
                                                      std::size_t count,
                                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.05, 0.95), uv(-1.0, 1.0);
  const auto soil = sample_soil();
  const Vec2 extent = g.upper_corner() - g.origin();
  std::vector<TwoPhaseParticle> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& p = out[i];
    p.id = i;
    p.position = g.origin() + Vec2(ux(rng) * extent.x(), ux(rng) * extent.y());
    p.initial_position = p.position;
    p.velocity = Vec2(uv(rng), uv(rng));
    p.volume = p.initial_volume = 0.25 * g.cell_size() * g.cell_size() *
                                  (1.0 + 0.5 * uv(rng));
    p.porosity = p.initial_porosity = soil.porosity;
    p.solid_density = soil.solid_density;
    p.water_density = soil.water_density;
    p.permeability = soil.permeability;
    p.pore_pressure = 1.0e4 * uv(rng);
    p.initial_half_size = Vec2::Constant(0.25 * g.cell_size());
  }
  return out;
}

}  // namespace tpmpm::test
