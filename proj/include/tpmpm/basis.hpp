#pragma once

#include <array>
#include <cstddef>

#include "tpmpm/grid.hpp"
#include "tpmpm/types.hpp"

namespace tpmpm {

enum class BasisKind { kLinear, kGimp };

//! Weights and gradients of the grid functions supporting one point
struct BasisEvaluation {
  static constexpr int kMaxNodes = 16;

  int count = 0;
  std::array<std::size_t, kMaxNodes> nodes{};
  std::array<double, kMaxNodes> weights{};
  std::array<Vec2, kMaxNodes> gradients{};

  double weight_sum() const;
  Vec2 gradient_sum() const;
  //! Weight of a given node, 0 if it is not in the support
  double weight_of(std::size_t node) const;
  Vec2 gradient_of(std::size_t node) const;
};

//! Elliptical particle domain: semi-axis vectors are the columns of F applied
//! to the reference half spacings
struct ParticleDomain {
  Vec2 r1 = Vec2::Zero();
  Vec2 r2 = Vec2::Zero();

  //! Half extent of the ellipse along unit direction u (support function)
  double projected_size(const Vec2& u) const {
    const double a = r1.dot(u);
    const double b = r2.dot(u);
    return std::sqrt(a * a + b * b);
  }
  //! Axis-aligned half widths of the bounding box
  Vec2 half_widths() const {
    return {projected_size(Vec2::UnitX()), projected_size(Vec2::UnitY())};
  }
};

//! Throws InvertedParticleError when det F <= 0
ParticleDomain update_domain(const Mat2& deformation_gradient,
                             const Vec2& initial_half_size);

//! Bilinear basis over the 4 nodes of the containing cell. Throws
//! ParticleEscapedError outside the grid.
BasisEvaluation linear_basis(const BackgroundGrid& grid, const Vec2& x);

//! Contiguous-particle GIMP with axis-aligned half widths. Throws
//! UnsupportedDomainError if a half width exceeds h/2 or is not positive.
BasisEvaluation gimp_basis(const BackgroundGrid& grid, const Vec2& x,
                           const Vec2& half_widths);

//! Dispatch on kind; the domain is only used by GIMP
BasisEvaluation evaluate_basis(BasisKind kind, const BackgroundGrid& grid,
                               const Vec2& x, const ParticleDomain& domain);

namespace detail {
//! 1D contiguous GIMP weight and derivative, xi = x_p - x_i
void gimp_1d(double xi, double h, double l, double& w, double& dw);
}  // namespace detail

}  // namespace tpmpm
