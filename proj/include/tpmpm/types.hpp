#pragma once

#include <Eigen/Dense>

namespace tpmpm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

//! Standard gravity used in the permeability conversion k / (rho_w g)
inline constexpr double kStandardGravity = 9.81;

//! Plane-strain stress: in-plane components plus the out-of-plane normal
//! stress. Tension positive.
struct Stress {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
  double zz = 0.0;

  Mat2 in_plane() const {
    Mat2 s;
    s << xx, xy, xy, yy;
    return s;
  }
  double mean_in_plane() const { return 0.5 * (xx + yy); }
  //! Maximum in-plane shear stress
  double max_shear() const;
  //! von Mises equivalent of the full plane-strain tensor
  double von_mises() const;

  bool operator==(const Stress&) const = default;
};

//! Symmetric in-plane strain (tensor shear component)
struct Strain {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  Strain& operator+=(const Strain& o) {
    xx += o.xx;
    yy += o.yy;
    xy += o.xy;
    return *this;
  }
  double volumetric() const { return xx + yy; }
  //! Equivalent (deviatoric) strain measure
  double equivalent() const;

  bool operator==(const Strain&) const = default;
};

}  // namespace tpmpm
