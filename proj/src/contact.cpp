#include "tpmpm/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tpmpm/error.hpp"

namespace tpmpm {

EdgeDistances edge_distances(const Vec2& particle, const Vec2& node,
                             const Vec2& normal, const Vec2& tangent,
                             double size_normal, double size_tangent,
                             EdgeSide side) {
  if (!(normal.norm() > 0.0))
    throw DetectionError("zero surface normal");
  const Vec2 r = particle - node;
  const double sign = side == EdgeSide::kToward ? -1.0 : 1.0;
  return {r.dot(normal) + sign * size_normal,
          r.dot(tangent) + sign * size_tangent};
}

bool approaching(const Vec2& v_com, const Vec2& v_a, const Vec2& n_a) {
  return (v_com - v_a).dot(n_a) > 0.0;
}

namespace {

// Edge extent of one particle along the node frame
struct Extent {
  double edge;      // facing edge position along n
  double t_center;  // centre along t
  double t_half;    // half extent along t
};

}  // namespace

std::vector<ContactNodeState> detect_contact_nodes(
    BackgroundGrid& grid, std::span<const TwoPhaseParticle> soil,
    std::span<const BasisEvaluation> soil_basis, const RigidBody& rigid,
    std::span<const BasisEvaluation> rigid_basis, double tolerance) {
  const std::size_t nn = grid.num_nodes();
  std::vector<int> slot(nn, -1);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < nn; ++i) {
    auto& node = grid.node(i);
    node.contact_detected = false;
    if (node.has_normal) {
      slot[i] = static_cast<int>(candidates.size());
      candidates.push_back(i);
    }
  }
  std::vector<ContactNodeState> out;
  if (candidates.empty()) return out;

  std::vector<std::vector<std::size_t>> soil_near(candidates.size());
  std::vector<std::vector<std::size_t>> rigid_near(candidates.size());
  for (std::size_t p = 0; p < soil_basis.size(); ++p) {
    const auto& b = soil_basis[p];
    for (int k = 0; k < b.count; ++k)
      if (b.weights[k] > 0.0 && slot[b.nodes[k]] >= 0)
        soil_near[slot[b.nodes[k]]].push_back(p);
  }
  for (std::size_t p = 0; p < rigid_basis.size(); ++p) {
    const auto& b = rigid_basis[p];
    for (int k = 0; k < b.count; ++k)
      if (b.weights[k] > 0.0 && slot[b.nodes[k]] >= 0)
        rigid_near[slot[b.nodes[k]]].push_back(p);
  }

  const double overlap_tol = tolerance;
  std::vector<Extent> soil_ext, rigid_ext;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::size_t i = candidates[c];
    auto& node = grid.node(i);
    const Vec2 xi = grid.coordinates(i);
    const Vec2 n = node.normal;
    const Vec2 t(-n.y(), n.x());

    soil_ext.clear();
    for (const auto p : soil_near[c]) {
      const auto& pt = soil[p];
      const auto dom = update_domain(pt.deformation_gradient,
                                     pt.initial_half_size);
      const double rn = dom.projected_size(n);
      const double rt = dom.projected_size(t);
      const auto d = edge_distances(pt.position, xi, n, t, rn, rt,
                                    EdgeSide::kAway);
      soil_ext.push_back({d.normal, d.tangential - rt, rt});
    }
    rigid_ext.clear();
    for (const auto p : rigid_near[c]) {
      const auto& rp = rigid.particles[p];
      const ParticleDomain dom{Vec2(rp.half_size.x(), 0.0),
                               Vec2(0.0, rp.half_size.y())};
      const double rn = dom.projected_size(n);
      const double rt = dom.projected_size(t);
      const auto d = edge_distances(rp.position, xi, n, t, rn, rt,
                                    EdgeSide::kToward);
      rigid_ext.push_back({d.normal, d.tangential + rt, rt});
    }

    double gap = std::numeric_limits<double>::infinity();
    for (const auto& s : soil_ext) {
      for (const auto& r : rigid_ext) {
        const double lo = std::max(s.t_center - s.t_half, r.t_center - r.t_half);
        const double hi = std::min(s.t_center + s.t_half, r.t_center + r.t_half);
        if (lo > hi + overlap_tol) continue;
        gap = std::min(gap, r.edge - s.edge);
      }
    }
    ContactNodeState st;
    st.node = i;
    st.normal = n;
    st.gap = gap;
    st.detected = gap <= tolerance;
    node.contact_detected = st.detected;
    out.push_back(st);
  }
  return out;
}

std::size_t activate_contacts(BackgroundGrid& grid, const Vec2& rigid_trial,
                              double dt) {
  std::size_t count = 0;
  for (auto& node : grid.nodes()) {
    node.contact_active = false;
    if (!node.contact_detected) continue;
    const Vec2 trial =
        node.tb.velocity_initial + dt * node.tb.acceleration_star;
    if (soil_approaching(trial, rigid_trial, node.normal)) {
      node.contact_active = true;
      ++count;
    }
  }
  return count;
}

Vec2 rigid_acceleration(const BackgroundGrid& grid, const RigidBody& rigid,
                        const Vec2& external_force,
                        bool include_pressure_increment) {
  Vec2 force = external_force;
  double mass = rigid.mass;
  for (const auto& node : grid.nodes()) {
    if (!node.contact_active) continue;
    force += node.tb.force_mix();
    if (include_pressure_increment) force += node.tb.pressure_increment_force;
    mass += node.tb.mass_mix;
  }
  Vec2 a = force / mass;
  rigid.constrain(a);
  return a;
}

void contact_correct_acceleration(BackgroundGrid& grid,
                                  const Vec2& rigid_acceleration, double dt) {
  for (auto& node : grid.nodes()) {
    if (!node.contact_active) continue;
    auto& tb = node.tb;
    tb.acceleration_star =
        correct_normal_component(tb.acceleration_star, rigid_acceleration,
                                 node.normal);
    tb.velocity_star = tb.velocity_initial + dt * tb.acceleration_star;
  }
}

std::size_t contact_correct_velocity(BackgroundGrid& grid,
                                     Vec2 TwoPhaseNodeFields::*velocity,
                                     const Vec2& rigid_velocity) {
  std::size_t count = 0;
  for (auto& node : grid.nodes()) {
    if (!node.contact_detected) continue;
    Vec2& v = node.tb.*velocity;
    if (!soil_approaching(v, rigid_velocity, node.normal)) continue;
    v = correct_normal_component(v, rigid_velocity, node.normal);
    ++count;
  }
  return count;
}

}  // namespace tpmpm
