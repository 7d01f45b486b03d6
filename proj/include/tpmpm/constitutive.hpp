#pragma once

#include "tpmpm/types.hpp"

namespace tpmpm {

//! Isotropic linear skeleton
struct PoroElastic {
  double youngs_modulus = 0.0;
  double poisson_ratio = 0.0;

  double shear_modulus() const {
    return youngs_modulus / (2.0 * (1.0 + poisson_ratio));
  }
  double lame_lambda() const {
    return youngs_modulus * poisson_ratio /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
  double constrained_modulus() const {
    return lame_lambda() + 2.0 * shear_modulus();
  }
};

//! Tresca (phi = 0) elastoplastic skeleton, plane strain
struct Tresca {
  PoroElastic elastic;
  double undrained_strength = 0.0;
};

struct ReturnResult {
  Stress stress;
  Strain plastic_strain_increment;
  bool yielded = false;
};

//! Plane-strain Hooke update T' = T + lambda tr(de) I + 2 mu de; the
//! out-of-plane normal stress is carried along.
Stress elastic_update(const Stress& stress, const Strain& strain_increment,
                      const PoroElastic& model);

//! Radial return onto tau_max = s_u about the in-plane mean stress. The
//! out-of-plane stress and the in-plane mean are left unchanged.
ReturnResult tresca_return(const Stress& trial, const Tresca& model);

}  // namespace tpmpm
