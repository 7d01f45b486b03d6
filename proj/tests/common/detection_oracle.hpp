#pragma once

//! Rasterization oracle for edge-to-edge contact detection. Random soil and
//! rigid particle clouds are placed on either side of one grid node with a
//! random surface normal; the oracle rasterizes their footprints along the
//! tangent and reports the smallest normal gap over raster cells covered by
//! both bodies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "tpmpm/contact.hpp"
#include "tpmpm/transfer.hpp"

namespace tpmpm::test {

struct Footprint {
  double n_lo, n_hi, t_lo, t_hi;
};

//! Bounding rectangle in the (n, t) frame of an ellipse with the given
//! semi-axis columns
inline Footprint footprint(const Vec2& x, const Vec2& node,
                           const Mat2& semi_axes, const Vec2& n,
                           const Vec2& t) {
  auto support = [&](const Vec2& u) {
    return std::hypot(semi_axes.col(0).dot(u), semi_axes.col(1).dot(u));
  };
  const double cn = (x - node).dot(n), ct = (x - node).dot(t);
  const double rn = support(n), rt = support(t);
  return {cn - rn, cn + rn, ct - rt, ct + rt};
}

struct RasterResult {
  double gap = std::numeric_limits<double>::infinity();
  //! distance of the closest pair's tangential separation from the threshold
  double ambiguity = std::numeric_limits<double>::infinity();
};

//! Each rectangle is widened by half the overlap allowance on both sides; the
//! gap at a raster cell is the lowest rigid edge minus the highest soil edge
inline RasterResult raster_gap(const std::vector<Footprint>& soil,
                               const std::vector<Footprint>& rigid,
                               double overlap, double t_min, double t_max,
                               int cells) {
  RasterResult r;
  const double dt = (t_max - t_min) / cells;
  for (int c = 0; c < cells; ++c) {
    const double tc = t_min + (c + 0.5) * dt;
    double top = -std::numeric_limits<double>::infinity();
    double bottom = std::numeric_limits<double>::infinity();
    for (const auto& s : soil)
      if (tc >= s.t_lo - 0.5 * overlap && tc <= s.t_hi + 0.5 * overlap)
        top = std::max(top, s.n_hi);
    for (const auto& g : rigid)
      if (tc >= g.t_lo - 0.5 * overlap && tc <= g.t_hi + 0.5 * overlap)
        bottom = std::min(bottom, g.n_lo);
    if (std::isfinite(top) && std::isfinite(bottom))
      r.gap = std::min(r.gap, bottom - top);
  }
  for (const auto& s : soil)
    for (const auto& g : rigid) {
      const double sep = std::max(s.t_lo, g.t_lo) - std::min(s.t_hi, g.t_hi);
      r.ambiguity = std::min(r.ambiguity, std::abs(sep - overlap));
    }
  return r;
}

struct DetectionTally {
  int compared = 0;
  int in_contact = 0;
  int skipped = 0;
  int mismatches = 0;
  //! largest |gap_detector - gap_oracle| over finite gaps
  double max_gap_error = 0.0;
};

//! Compare detect_contact_nodes against the raster oracle on random
//! geometries until `wanted` unambiguous cases have been compared
inline DetectionTally run_detection_oracle(std::uint64_t seed, int wanted) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 0.1, tol = 0.05 * h;
  const int cells = 20000;
  const double t_min = -0.2, t_max = 0.2;
  const double resolution = (t_max - t_min) / cells;
  DetectionTally tally;

  for (int trial = 0; trial < 4 * wanted && tally.compared < wanted; ++trial) {
    auto grid = build_grid(Vec2::Zero(), h, 6, 6);
    const std::size_t node = grid.index(3, 3);
    const Vec2 xi = grid.coordinates(node);
    const double th = 2.0 * std::numbers::pi * u(rng);
    const Vec2 n(std::cos(th), std::sin(th));
    const Vec2 t(-n.y(), n.x());
    grid.node(node).normal = n;
    grid.node(node).has_normal = true;
    const double offset = -0.02 + 0.05 * u(rng);

    auto random_f = [&] {
      const double a = 0.6 * (u(rng) - 0.5);
      Mat2 rot;
      rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      Mat2 stretch;
      stretch << 0.8 + 0.4 * u(rng), 0.2 * (u(rng) - 0.5), 0.0,
          0.8 + 0.4 * u(rng);
      return Mat2(rot * stretch);
    };
    // centres stay strictly inside the four cells around the node
    auto inside = [&](const Vec2& x) {
      return (x - xi).cwiseAbs().maxCoeff() < 0.095;
    };

    std::vector<TwoPhaseParticle> soil;
    RigidBody rigid;
    std::vector<Footprint> sf, rf;
    const int ns = 1 + static_cast<int>(u(rng) * 6);
    const int nr = 1 + static_cast<int>(u(rng) * 6);
    for (int k = 0; k < 40 && static_cast<int>(soil.size()) < ns; ++k) {
      const Vec2 x = xi + (-0.01 - 0.05 * u(rng)) * n + 0.12 * (u(rng) - 0.5) * t;
      if (!inside(x)) continue;
      TwoPhaseParticle p;
      p.id = soil.size();
      p.position = x;
      p.initial_half_size = Vec2(0.005 + 0.015 * u(rng), 0.005 + 0.015 * u(rng));
      p.deformation_gradient = random_f();
      Mat2 axes = p.deformation_gradient;
      axes.col(0) *= p.initial_half_size.x();
      axes.col(1) *= p.initial_half_size.y();
      sf.push_back(footprint(x, xi, axes, n, t));
      soil.push_back(p);
    }
    for (int k = 0; k < 40 && static_cast<int>(rigid.particles.size()) < nr; ++k) {
      const Vec2 x = xi + (offset + 0.01 + 0.05 * u(rng)) * n +
                     0.12 * (u(rng) - 0.5) * t;
      if (!inside(x)) continue;
      RigidParticle r;
      r.position = x;
      r.half_size = Vec2(0.005 + 0.015 * u(rng), 0.005 + 0.015 * u(rng));
      Mat2 axes = Mat2::Zero();
      axes(0, 0) = r.half_size.x();
      axes(1, 1) = r.half_size.y();
      rf.push_back(footprint(x, xi, axes, n, t));
      rigid.particles.push_back(r);
    }
    if (sf.empty() || rf.empty()) continue;

    const auto oracle = raster_gap(sf, rf, tol, t_min, t_max, cells);
    if (oracle.ambiguity < 4.0 * resolution ||
        (std::isfinite(oracle.gap) && std::abs(oracle.gap - tol) < 1e-9)) {
      ++tally.skipped;
      continue;
    }
    const auto sb = compute_basis(BasisKind::kLinear, grid,
                                  std::span<const TwoPhaseParticle>(soil));
    const auto rb = compute_basis(BasisKind::kLinear, grid,
                                  std::span<const RigidParticle>(rigid.particles));
    const auto states = detect_contact_nodes(grid, soil, sb, rigid, rb, tol);
    const bool expected = oracle.gap <= tol;
    const bool got = states.size() == 1 && states[0].detected;
    ++tally.compared;
    tally.in_contact += expected ? 1 : 0;
    if (got != expected) ++tally.mismatches;
    if (states.size() == 1) {
      if (std::isfinite(oracle.gap) && std::isfinite(states[0].gap))
        tally.max_gap_error = std::max(tally.max_gap_error,
                                       std::abs(states[0].gap - oracle.gap));
      else if (std::isfinite(oracle.gap) != std::isfinite(states[0].gap))
        ++tally.mismatches;
    }
  }
  return tally;
}

}  // namespace tpmpm::test
