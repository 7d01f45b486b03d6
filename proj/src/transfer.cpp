#include "tpmpm/transfer.hpp"

#include <cmath>
#include <sstream>

#include "tpmpm/constitutive.hpp"
#include "tpmpm/error.hpp"
#include "tpmpm/parallel.hpp"

namespace tpmpm {

std::vector<BasisEvaluation> compute_basis(
    BasisKind kind, const BackgroundGrid& grid,
    std::span<const TwoPhaseParticle> particles) {
  std::vector<BasisEvaluation> out(particles.size());
  parallel_for(particles.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto& pt = particles[p];
      if (kind == BasisKind::kLinear) {
        out[p] = linear_basis(grid, pt.position);
      } else {
        const auto domain =
            update_domain(pt.deformation_gradient, pt.initial_half_size);
        out[p] = gimp_basis(grid, pt.position, domain.half_widths());
      }
    }
  });
  return out;
}

std::vector<BasisEvaluation> compute_basis(
    BasisKind kind, const BackgroundGrid& grid,
    std::span<const RigidParticle> particles) {
  std::vector<BasisEvaluation> out(particles.size());
  for (std::size_t p = 0; p < particles.size(); ++p) {
    const auto& pt = particles[p];
    out[p] = kind == BasisKind::kLinear
                 ? linear_basis(grid, pt.position)
                 : gimp_basis(grid, pt.position, pt.half_size);
  }
  return out;
}

double mass_cutoff(std::span<const TwoPhaseParticle> particles) {
  if (particles.empty()) return 0.0;
  double total = 0.0;
  for (const auto& p : particles) total += p.mixture_mass();
  return 1e-12 * total / static_cast<double>(particles.size());
}

void apply_solid_constraints(const NodeConstraints& c, Vec2& v) {
  for (int d = 0; d < 2; ++d)
    if (c.solid_fixed[d]) v[d] = 0.0;
}

void p2g_mass_momentum(std::span<const TwoPhaseParticle> particles,
                       std::span<const BasisEvaluation> basis,
                       BackgroundGrid& grid, double cutoff) {
  for (std::size_t p = 0; p < particles.size(); ++p) {
    const auto& pt = particles[p];
    const auto& b = basis[p];
    const double m = pt.mixture_mass();
    const double mw = pt.water_mass();
    const double v = pt.volume;
    for (int k = 0; k < b.count; ++k) {
      auto& node = grid.node(b.nodes[k]).tb;
      const double w = b.weights[k];
      node.mass_mix += w * m;
      node.mass_water += w * mw;
      node.volume += w * v;
      node.permeability_volume += w * v * pt.permeability;
      node.porosity_volume += w * v * pt.porosity;
      node.pressure_mass += w * m * pt.pore_pressure;
      node.momentum += (w * m) * pt.velocity;
      node.mass_gradient += m * b.gradients[k];
    }
  }
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    auto& node = grid.node(i).tb;
    if (node.mass_mix <= cutoff) continue;
    node.velocity_initial = node.momentum / node.mass_mix;
    apply_solid_constraints(grid.constraints(i), node.velocity_initial);
    node.particle_pressure = node.pressure_mass / node.mass_mix;
    node.pressure = grid.constraints(i).drained ? 0.0 : node.particle_pressure;
  }
}

void p2g_rigid_mass(const RigidBody& body,
                    std::span<const BasisEvaluation> basis,
                    BackgroundGrid& grid) {
  if (body.particles.empty()) return;
  const double m = body.mass / static_cast<double>(body.particles.size());
  for (const auto& b : basis)
    for (int k = 0; k < b.count; ++k)
      grid.node(b.nodes[k]).rb.mass += b.weights[k] * m;
}

double smoothed_pressure(const BackgroundGrid& grid,
                         const BasisEvaluation& b) {
  double p = 0.0;
  for (int k = 0; k < b.count; ++k)
    p += b.weights[k] * grid.node(b.nodes[k]).tb.pressure;
  return p;
}

void p2g_forces(std::span<const TwoPhaseParticle> particles,
                std::span<const BasisEvaluation> basis, BackgroundGrid& grid,
                const Vec2& gravity) {
  for (std::size_t p = 0; p < particles.size(); ++p) {
    const auto& pt = particles[p];
    const auto& b = basis[p];
    const double pressure = smoothed_pressure(grid, b);
    Mat2 total = pt.effective_stress.in_plane();
    total.diagonal().array() -= pressure;
    const double v = pt.volume;
    const Vec2 body_mix = pt.mixture_mass() * gravity;
    const Vec2 body_water = pt.water_mass() * gravity;
    const double water_pressure = pt.porosity * pressure;
    for (int k = 0; k < b.count; ++k) {
      auto& node = grid.node(b.nodes[k]).tb;
      const double w = b.weights[k];
      const Vec2& g = b.gradients[k];
      node.internal_mix -= v * (total * g);
      node.internal_water += (v * water_pressure) * g;
      node.external_mix += w * (body_mix + pt.traction_force);
      node.external_water += w * body_water;
    }
  }
}

void nodal_normals(BackgroundGrid& grid, double cutoff) {
  const double h = grid.cell_size();
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    auto& node = grid.node(i);
    node.has_normal = false;
    node.normal = Vec2::Zero();
    if (node.tb.mass_mix <= cutoff || node.rb.mass <= 0.0) continue;
    Vec2 g = node.tb.mass_gradient;
    apply_solid_constraints(grid.constraints(i), g);
    const double scale = node.tb.mass_mix / h;
    const double norm = g.norm();
    if (!(norm > 1e-8 * scale)) continue;
    node.normal = g / norm;
    node.has_normal = true;
  }
}

Mat2 velocity_gradient(const BackgroundGrid& grid, const BasisEvaluation& b,
                       Vec2 TwoPhaseNodeFields::*field) {
  Mat2 l = Mat2::Zero();
  for (int k = 0; k < b.count; ++k)
    l += (grid.node(b.nodes[k]).tb.*field) * b.gradients[k].transpose();
  return l;
}

void g2p_update(const BackgroundGrid& grid,
                std::span<TwoPhaseParticle> particles,
                std::span<const BasisEvaluation> basis,
                std::span<const SoilMaterial> materials,
                const G2POptions& options) {
  const double dt = options.dt;
  const double pic = options.pic_fraction;
  parallel_for(particles.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      auto& pt = particles[p];
      const auto& b = basis[p];
      Vec2 acc = Vec2::Zero();
      Vec2 vel = Vec2::Zero();
      Mat2 l = Mat2::Zero();
      double dp = 0.0;
      for (int k = 0; k < b.count; ++k) {
        const auto& node = grid.node(b.nodes[k]).tb;
        const double w = b.weights[k];
        acc += w * node.acceleration_final;
        vel += w * node.velocity_final;
        l += node.velocity_final * b.gradients[k].transpose();
        dp += w * (node.pressure + node.pressure_increment -
                   node.particle_pressure);
      }
      pt.velocity = (1.0 - pic) * (pt.velocity + dt * acc) + pic * vel;
      pt.position += dt * vel;
      if (!grid.contains(pt.position)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "particle " << pt.id << " moved to (" << pt.position.x()
            << ", " << pt.position.y() << ")";
        throw ParticleEscapedError(msg.str());
      }

      pt.deformation_gradient = (Mat2::Identity() + dt * l) *
                                pt.deformation_gradient;
      const double det = pt.deformation_gradient.determinant();
      if (!(det > 0.0)) {
        std::ostringstream msg;
        msg << "particle " << pt.id << " det F = " << det;
        throw InvertedParticleError(msg.str());
      }

      Strain de;
      de.xx = dt * l(0, 0);
      de.yy = dt * l(1, 1);
      de.xy = 0.5 * dt * (l(0, 1) + l(1, 0));
      pt.strain += de;

      const auto& mat = materials[pt.material];
      const PoroElastic elastic{mat.youngs_modulus, mat.poisson_ratio};
      Stress trial = elastic_update(pt.effective_stress, de, elastic);
      if (mat.undrained_strength) {
        const auto r = tresca_return(trial, Tresca{elastic, *mat.undrained_strength});
        pt.effective_stress = r.stress;
        pt.plastic_strain += r.plastic_strain_increment;
      } else {
        pt.effective_stress = trial;
      }

      pt.porosity = 1.0 - (1.0 - pt.initial_porosity) / det;
      pt.volume = pt.initial_volume * det;
      pt.pore_pressure += dp;
    }
  });
}

}  // namespace tpmpm
