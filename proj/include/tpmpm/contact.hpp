#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tpmpm/basis.hpp"
#include "tpmpm/grid.hpp"
#include "tpmpm/particles.hpp"

namespace tpmpm {

//! Which particle edge is measured relative to the node.
//! kToward: d = proj - R, the particle sits on the +direction side and its
//! -direction edge faces the node.
//! kAway: d = proj + R, the particle sits on the -direction side and its
//! +direction edge faces the node.
enum class EdgeSide { kToward, kAway };

struct EdgeDistances {
  double normal = 0.0;
  double tangential = 0.0;
};

//! Signed particle-edge to node distances along n and t. Throws
//! DetectionError for a zero normal.
EdgeDistances edge_distances(const Vec2& particle, const Vec2& node,
                             const Vec2& normal, const Vec2& tangent,
                             double size_normal, double size_tangent,
                             EdgeSide side);

struct ContactNodeState {
  std::size_t node = 0;
  Vec2 normal = Vec2::Zero();
  //! smallest normal edge gap among pairs with overlapping tangential extent
  double gap = 0.0;
  bool detected = false;
};

//! Edge-to-edge detection at nodes carrying both bodies. A node is in contact
//! when some soil/rigid particle pair near it has overlapping tangential
//! extents and a normal edge gap <= tolerance. Sets GridNode::contact_detected.
std::vector<ContactNodeState> detect_contact_nodes(
    BackgroundGrid& grid, std::span<const TwoPhaseParticle> soil,
    std::span<const BasisEvaluation> soil_basis, const RigidBody& rigid,
    std::span<const BasisEvaluation> rigid_basis, double tolerance);

//! Body a approaches when (v_com - v_a) . n_a > 0, n_a pointing into body a
bool approaching(const Vec2& v_com, const Vec2& v_a, const Vec2& n_a);

//! Soil node moving into the rigid body along the soil outward normal
inline bool soil_approaching(const Vec2& v_soil, const Vec2& v_rigid,
                             const Vec2& soil_normal) {
  // the rigid body is the centre of mass at contact nodes; the soil inward
  // normal is -n
  return approaching(v_rigid, v_soil, -soil_normal);
}

//! Mark detected nodes whose trial soil velocity would penetrate the rigid
//! body moving with rigid_trial. Returns the number of active nodes.
std::size_t activate_contacts(BackgroundGrid& grid, const Vec2& rigid_trial,
                              double dt);

//! Lumped rigid acceleration: external rigid force plus soil external and
//! internal forces at active contact nodes, over the rigid mass plus the soil
//! mass at those nodes. Optionally adds the pressure increment force. Fixed
//! rigid components are zeroed.
Vec2 rigid_acceleration(const BackgroundGrid& grid, const RigidBody& rigid,
                        const Vec2& external_force,
                        bool include_pressure_increment);

inline Vec2 rigid_intermediate_acceleration(const BackgroundGrid& grid,
                                            const RigidBody& rigid,
                                            const Vec2& external_force) {
  return rigid_acceleration(grid, rigid, external_force, false);
}

inline Vec2 rigid_final_acceleration(const BackgroundGrid& grid,
                                     const RigidBody& rigid,
                                     const Vec2& external_force) {
  return rigid_acceleration(grid, rigid, external_force, true);
}

//! Replace the normal component of the intermediate soil acceleration by the
//! rigid one at active nodes, then refresh v* = v_initial + dt a*.
void contact_correct_acceleration(BackgroundGrid& grid,
                                  const Vec2& rigid_acceleration, double dt);

//! Clamp the normal soil velocity to the rigid velocity at detected nodes
//! where the soil approaches. Tangential components are untouched.
//! Returns the number of corrected nodes.
std::size_t contact_correct_velocity(BackgroundGrid& grid,
                                     Vec2 TwoPhaseNodeFields::*velocity,
                                     const Vec2& rigid_velocity);

//! Single-vector form of the normal correction
inline Vec2 correct_normal_component(const Vec2& v, const Vec2& target,
                                     const Vec2& n) {
  // tangential part of v plus the normal part of target; exact for
  // axis-aligned normals
  return v - v.dot(n) * n + target.dot(n) * n;
}

}  // namespace tpmpm
