#include "tpmpm/basis.hpp"

#include <cmath>
#include <sstream>

#include "tpmpm/error.hpp"

namespace tpmpm {

double BasisEvaluation::weight_sum() const {
  double s = 0.0;
  for (int k = 0; k < count; ++k) s += weights[k];
  return s;
}

Vec2 BasisEvaluation::gradient_sum() const {
  Vec2 s = Vec2::Zero();
  for (int k = 0; k < count; ++k) s += gradients[k];
  return s;
}

double BasisEvaluation::weight_of(std::size_t node) const {
  for (int k = 0; k < count; ++k)
    if (nodes[k] == node) return weights[k];
  return 0.0;
}

Vec2 BasisEvaluation::gradient_of(std::size_t node) const {
  for (int k = 0; k < count; ++k)
    if (nodes[k] == node) return gradients[k];
  return Vec2::Zero();
}

ParticleDomain update_domain(const Mat2& deformation_gradient,
                             const Vec2& initial_half_size) {
  const double det = deformation_gradient.determinant();
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "det F = " << det;
    throw InvertedParticleError(msg.str());
  }
  return {deformation_gradient.col(0) * initial_half_size.x(),
          deformation_gradient.col(1) * initial_half_size.y()};
}

namespace {

std::string describe(const Vec2& x) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << x.x() << ", " << x.y() << ")";
  return s.str();
}

}  // namespace

BasisEvaluation linear_basis(const BackgroundGrid& grid, const Vec2& x) {
  if (!grid.contains(x) || !std::isfinite(x.x()) || !std::isfinite(x.y()))
    throw ParticleEscapedError("position " + describe(x) +
                               " is outside the grid");
  const double h = grid.cell_size();
  const Vec2 local = (x - grid.origin()) / h;
  int ix = static_cast<int>(std::floor(local.x()));
  int iy = static_cast<int>(std::floor(local.y()));
  if (ix >= grid.nx()) ix = grid.nx() - 1;
  if (iy >= grid.ny()) iy = grid.ny() - 1;
  const double xi = local.x() - ix;
  const double eta = local.y() - iy;

  BasisEvaluation b;
  b.count = 4;
  b.nodes = {grid.index(ix, iy), grid.index(ix + 1, iy),
             grid.index(ix, iy + 1), grid.index(ix + 1, iy + 1)};
  b.weights[0] = (1.0 - xi) * (1.0 - eta);
  b.weights[1] = xi * (1.0 - eta);
  b.weights[2] = (1.0 - xi) * eta;
  b.weights[3] = xi * eta;
  b.gradients[0] = Vec2(-(1.0 - eta), -(1.0 - xi)) / h;
  b.gradients[1] = Vec2(1.0 - eta, -xi) / h;
  b.gradients[2] = Vec2(-eta, 1.0 - xi) / h;
  b.gradients[3] = Vec2(eta, xi) / h;
  return b;
}

namespace detail {

void gimp_1d(double xi, double h, double l, double& w, double& dw) {
  const double a = std::abs(xi);
  const double sign = xi < 0.0 ? -1.0 : 1.0;
  if (a < l) {
    w = 1.0 - (xi * xi + l * l) / (2.0 * h * l);
    dw = -xi / (h * l);
  } else if (a < h - l) {
    w = 1.0 - a / h;
    dw = -sign / h;
  } else if (a < h + l) {
    const double d = h + l - a;
    w = d * d / (4.0 * h * l);
    dw = -sign * d / (2.0 * h * l);
  } else {
    w = 0.0;
    dw = 0.0;
  }
}

}  // namespace detail

BasisEvaluation gimp_basis(const BackgroundGrid& grid, const Vec2& x,
                           const Vec2& half_widths) {
  if (!grid.contains(x) || !std::isfinite(x.x()) || !std::isfinite(x.y()))
    throw ParticleEscapedError("position " + describe(x) +
                               " is outside the grid");
  const double h = grid.cell_size();
  for (int d = 0; d < 2; ++d) {
    if (!(half_widths[d] > 0.0) || half_widths[d] > 0.5 * h * (1.0 + 1e-12))
      throw UnsupportedDomainError("half width " + describe(half_widths) +
                                   " outside (0, h/2] for h = " +
                                   std::to_string(h));
  }

  const Vec2 local = (x - grid.origin()) / h;
  std::array<int, 4> ix{}, iy{};
  std::array<double, 4> wx{}, wy{}, dx{}, dy{};
  int nx = 0, ny = 0;
  const auto collect = [&](int axis, int max_index, std::array<int, 4>& idx,
                           std::array<double, 4>& w, std::array<double, 4>& dw,
                           int& n) {
    const double l = half_widths[axis] / h;
    const int lo = static_cast<int>(std::ceil(local[axis] - 1.0 - l));
    const int hi = static_cast<int>(std::floor(local[axis] + 1.0 + l));
    for (int i = std::max(lo, 0); i <= std::min(hi, max_index); ++i) {
      double wi = 0.0, dwi = 0.0;
      detail::gimp_1d((local[axis] - i) * h, h, half_widths[axis], wi, dwi);
      if (wi <= 0.0 && dwi == 0.0) continue;
      if (n == 4) break;
      idx[n] = i;
      w[n] = wi;
      dw[n] = dwi;
      ++n;
    }
  };
  collect(0, grid.nx(), ix, wx, dx, nx);
  collect(1, grid.ny(), iy, wy, dy, ny);

  BasisEvaluation b;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = b.count++;
      b.nodes[k] = grid.index(ix[i], iy[j]);
      b.weights[k] = wx[i] * wy[j];
      b.gradients[k] = Vec2(dx[i] * wy[j], wx[i] * dy[j]);
    }
  }
  return b;
}

BasisEvaluation evaluate_basis(BasisKind kind, const BackgroundGrid& grid,
                               const Vec2& x, const ParticleDomain& domain) {
  if (kind == BasisKind::kLinear) return linear_basis(grid, x);
  return gimp_basis(grid, x, domain.half_widths());
}

}  // namespace tpmpm
