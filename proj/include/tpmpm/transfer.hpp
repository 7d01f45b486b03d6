#pragma once

#include <span>
#include <vector>

#include "tpmpm/basis.hpp"
#include "tpmpm/grid.hpp"
#include "tpmpm/particles.hpp"

namespace tpmpm {

//! Basis evaluations of every particle for the current grid position
std::vector<BasisEvaluation> compute_basis(
    BasisKind kind, const BackgroundGrid& grid,
    std::span<const TwoPhaseParticle> particles);

std::vector<BasisEvaluation> compute_basis(
    BasisKind kind, const BackgroundGrid& grid,
    std::span<const RigidParticle> particles);

//! Mass threshold below which a node is ignored
double mass_cutoff(std::span<const TwoPhaseParticle> particles);

//! Scatter mixture and water mass, volume, permeability, momentum, the mass
//! gradient and the pore pressure; then set the initial nodal velocity and
//! the smoothed nodal pressure. The grid must be reset.
void p2g_mass_momentum(std::span<const TwoPhaseParticle> particles,
                       std::span<const BasisEvaluation> basis,
                       BackgroundGrid& grid, double cutoff);

//! Scatter the rigid particle masses (body mass split evenly)
void p2g_rigid_mass(const RigidBody& body,
                    std::span<const BasisEvaluation> basis,
                    BackgroundGrid& grid);

//! Pore pressure interpolated back from the smoothed nodal field
double smoothed_pressure(const BackgroundGrid& grid,
                         const BasisEvaluation& basis);

//! Internal, body and traction forces of mixture and water. Pore pressure is
//! taken from the smoothed nodal field.
void p2g_forces(std::span<const TwoPhaseParticle> particles,
                std::span<const BasisEvaluation> basis, BackgroundGrid& grid,
                const Vec2& gravity);

//! Outward unit normals of the two-phase body at nodes that also carry rigid
//! mass. Components held by solid constraints are removed before
//! normalization; nodes with a vanishing gradient get no normal.
void nodal_normals(BackgroundGrid& grid, double cutoff);

//! Zero the constrained components of a nodal solid vector
void apply_solid_constraints(const NodeConstraints& c, Vec2& v);

struct G2POptions {
  double dt = 0.0;
  //! 0 = pure FLIP, 1 = pure PIC
  double pic_fraction = 0.0;
};

//! Gather final nodal kinematics: FLIP/PIC velocity, position, F, strain,
//! effective stress, porosity and volume. Pore pressure receives the change
//! of the nodal field p + dp relative to the particle smoothing. Throws
//! ParticleEscapedError when a particle leaves the grid.
void g2p_update(const BackgroundGrid& grid,
                std::span<TwoPhaseParticle> particles,
                std::span<const BasisEvaluation> basis,
                std::span<const SoilMaterial> materials,
                const G2POptions& options);

//! Velocity gradient L = sum v_i (x) grad N_i of a nodal field
Mat2 velocity_gradient(const BackgroundGrid& grid, const BasisEvaluation& b,
                       Vec2 TwoPhaseNodeFields::*field);

}  // namespace tpmpm
