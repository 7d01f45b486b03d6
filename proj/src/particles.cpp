#include "tpmpm/particles.hpp"

#include <cmath>
#include <string>

#include "tpmpm/error.hpp"

namespace tpmpm {

void SoilMaterial::validate() const {
  const std::string where = "material '" + name + "': ";
  if (!(youngs_modulus > 0.0))
    throw ConfigError(where + "youngs_modulus must be positive");
  if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
    throw ConfigError(where + "poisson_ratio must lie in (-1, 0.5)");
  if (undrained_strength && !(*undrained_strength > 0.0))
    throw ConfigError(where + "undrained_strength must be positive");
  if (!(solid_density > 0.0))
    throw ConfigError(where + "solid_density must be positive");
  if (!(water_density > 0.0))
    throw ConfigError(where + "water_density must be positive");
  if (!(porosity > 0.0 && porosity < 1.0))
    throw ConfigError(where + "porosity must lie in (0, 1)");
  if (!(permeability > 0.0))
    throw ConfigError(where + "permeability must be positive");
}

double Ramp::operator()(double t) const {
  if (knots.empty()) return 0.0;
  if (t <= knots.front()[0]) return knots.front()[1];
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const auto& a = knots[i - 1];
    const auto& b = knots[i];
    if (t <= b[0]) {
      const double span = b[0] - a[0];
      if (span <= 0.0) return b[1];
      return a[1] + (b[1] - a[1]) * (t - a[0]) / span;
    }
  }
  return knots.back()[1];
}

void Ramp::validate(const std::string& what) const {
  if (knots.empty()) throw ConfigError(what + ": ramp needs at least one knot");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (knots[i][0] < knots[i - 1][0])
      throw ConfigError(what + ": ramp knot times must be nondecreasing");
}

namespace {

int per_axis(int particles_per_cell) {
  if (particles_per_cell == 4) return 2;
  if (particles_per_cell == 9) return 3;
  if (particles_per_cell == 1) return 1;
  throw ConfigError("particles_per_cell must be 1, 4 or 9, got " +
                    std::to_string(particles_per_cell));
}

// Visit every lattice point of region on the grid-aligned sub-cell lattice
template <typename Fn>
void for_each_lattice_point(const BackgroundGrid& grid, const Box& region,
                            int particles_per_cell, Fn&& fn) {
  const int n = per_axis(particles_per_cell);
  const double h = grid.cell_size();
  const double tol = 1e-9 * h;
  if (region.hi.x() - region.lo.x() <= tol ||
      region.hi.y() - region.lo.y() <= tol)
    return;
  const Vec2 lo = grid.origin();
  const Vec2 hi = grid.upper_corner();
  if (region.lo.x() < lo.x() - tol || region.lo.y() < lo.y() - tol ||
      region.hi.x() > hi.x() + tol || region.hi.y() > hi.y() + tol)
    throw ConfigError("particle region lies outside the grid");

  const double spacing = h / n;
  const auto first = [&](double a, double origin) {
    return static_cast<long>(std::floor((a - origin) / spacing + 1e-9));
  };
  const long i0 = first(region.lo.x(), lo.x());
  const long j0 = first(region.lo.y(), lo.y());
  const long i1 = static_cast<long>(std::ceil((region.hi.x() - lo.x()) / spacing - 1e-9));
  const long j1 = static_cast<long>(std::ceil((region.hi.y() - lo.y()) / spacing - 1e-9));
  for (long j = j0; j < j1; ++j) {
    for (long i = i0; i < i1; ++i) {
      const Vec2 x = lo + spacing * Vec2(i + 0.5, j + 0.5);
      // half-open region [lo, hi)
      if (x.x() < region.lo.x() - tol || x.x() >= region.hi.x() - tol ||
          x.y() < region.lo.y() - tol || x.y() >= region.hi.y() - tol)
        continue;
      fn(x, spacing);
    }
  }
}

}  // namespace

std::vector<TwoPhaseParticle> seed_particles(const BackgroundGrid& grid,
                                             const Box& region,
                                             int particles_per_cell,
                                             const SoilMaterial& material,
                                             int material_index) {
  std::vector<TwoPhaseParticle> out;
  for_each_lattice_point(
      grid, region, particles_per_cell, [&](const Vec2& x, double spacing) {
        TwoPhaseParticle p;
        p.id = out.size();
        p.position = x;
        p.initial_position = x;
        p.volume = spacing * spacing;
        p.initial_volume = p.volume;
        p.porosity = material.porosity;
        p.initial_porosity = material.porosity;
        p.solid_density = material.solid_density;
        p.water_density = material.water_density;
        p.permeability = material.permeability;
        p.initial_half_size = Vec2::Constant(0.5 * spacing);
        p.material = material_index;
        out.push_back(p);
      });
  return out;
}

std::vector<RigidParticle> seed_rigid_particles(const BackgroundGrid& grid,
                                                const Box& region,
                                                int particles_per_cell) {
  std::vector<RigidParticle> out;
  for_each_lattice_point(grid, region, particles_per_cell,
                         [&](const Vec2& x, double spacing) {
                           RigidParticle p;
                           p.position = x;
                           p.initial_position = x;
                           p.half_size = Vec2::Constant(0.5 * spacing);
                           out.push_back(p);
                         });
  return out;
}

}  // namespace tpmpm
