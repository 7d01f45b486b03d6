#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tpmpm/types.hpp"

namespace tpmpm {

//! Velocity and pressure boundary constraints attached to a grid node.
//! They survive reset_grid().
struct NodeConstraints {
  std::array<bool, 2> solid_fixed{false, false};
  std::array<bool, 2> water_fixed{false, false};
  //! Free-drainage node: p^{t+1} = 0
  bool drained = false;

  bool any() const {
    return solid_fixed[0] || solid_fixed[1] || water_fixed[0] ||
           water_fixed[1] || drained;
  }
};

//! Nodal fields of the two-phase (soil) body
struct TwoPhaseNodeFields {
  double mass_mix = 0.0;
  double mass_water = 0.0;
  //! sum N_i V_p
  double volume = 0.0;
  //! sum N_i V_p k_p
  double permeability_volume = 0.0;
  //! sum N_i V_p n_p
  double porosity_volume = 0.0;
  //! sum N_i m_p p_p (smoothed pressure numerator)
  double pressure_mass = 0.0;
  Vec2 momentum = Vec2::Zero();
  //! sum m_p grad N_i, outward surface direction
  Vec2 mass_gradient = Vec2::Zero();

  Vec2 external_mix = Vec2::Zero();  // b^mix + t^mix
  Vec2 internal_mix = Vec2::Zero();  // f^mix
  Vec2 external_water = Vec2::Zero();
  Vec2 internal_water = Vec2::Zero();
  //! nodal force from the pressure increment (weak form of -grad dp)
  Vec2 pressure_increment_force = Vec2::Zero();

  Vec2 velocity_initial = Vec2::Zero();
  Vec2 acceleration_star = Vec2::Zero();
  Vec2 velocity_star = Vec2::Zero();
  Vec2 seepage_star = Vec2::Zero();
  Vec2 acceleration_final = Vec2::Zero();
  Vec2 velocity_final = Vec2::Zero();
  Vec2 seepage_final = Vec2::Zero();

  //! smoothed pore pressure of the particles
  double particle_pressure = 0.0;
  //! nodal pore pressure p^t: the smoothed value, zero at drained nodes
  double pressure = 0.0;
  //! p^{t+1} - p^t
  double pressure_increment = 0.0;
  int pressure_dof = -1;

  double porosity() const;
  double permeability() const;
  Vec2 force_mix() const { return external_mix + internal_mix; }
  Vec2 force_water() const { return external_water + internal_water; }
};

//! Nodal fields of the rigid body
struct RigidNodeFields {
  double mass = 0.0;
};

struct GridNode {
  TwoPhaseNodeFields tb;
  RigidNodeFields rb;
  //! two-phase outward unit normal; the rigid normal is its negation
  Vec2 normal = Vec2::Zero();
  bool has_normal = false;
  //! geometric detection passed
  bool contact_detected = false;
  //! detected and approaching in the current sub-step
  bool contact_active = false;
};

//! Uniform square-cell Eulerian grid. Nodes are addressed as
//! index = iy * (nx + 1) + ix with 0 <= ix <= nx and 0 <= iy <= ny.
class BackgroundGrid {
 public:
  BackgroundGrid() = default;
  BackgroundGrid(Vec2 origin, double cell_size, int nx, int ny);

  const Vec2& origin() const noexcept { return origin_; }
  double cell_size() const noexcept { return h_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  int nodes_x() const noexcept { return nx_ + 1; }
  int nodes_y() const noexcept { return ny_ + 1; }

  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_ + 1) +
           static_cast<std::size_t>(ix);
  }
  std::array<int, 2> ijk(std::size_t index) const noexcept {
    const int w = nx_ + 1;
    return {static_cast<int>(index % w), static_cast<int>(index / w)};
  }
  Vec2 coordinates(std::size_t index) const noexcept {
    const auto [ix, iy] = ijk(index);
    return origin_ + h_ * Vec2(ix, iy);
  }
  Vec2 upper_corner() const noexcept {
    return origin_ + h_ * Vec2(nx_, ny_);
  }
  bool contains(const Vec2& x) const noexcept;

  GridNode& node(std::size_t i) { return nodes_[i]; }
  const GridNode& node(std::size_t i) const { return nodes_[i]; }
  std::vector<GridNode>& nodes() { return nodes_; }
  const std::vector<GridNode>& nodes() const { return nodes_; }

  NodeConstraints& constraints(std::size_t i) { return constraints_[i]; }
  const NodeConstraints& constraints(std::size_t i) const {
    return constraints_[i];
  }

  //! Zero every nodal accumulator; constraints are retained
  void reset();

 private:
  Vec2 origin_ = Vec2::Zero();
  double h_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<GridNode> nodes_;
  std::vector<NodeConstraints> constraints_;
};

//! Throws ConfigError on non-positive dimensions
BackgroundGrid build_grid(Vec2 origin, double cell_size, int nx, int ny);

//! Free-function form of BackgroundGrid::reset
inline void reset_grid(BackgroundGrid& grid) { grid.reset(); }

}  // namespace tpmpm
