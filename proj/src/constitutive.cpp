#include "tpmpm/constitutive.hpp"

#include <cmath>

namespace tpmpm {

double Stress::max_shear() const {
  const double d = 0.5 * (xx - yy);
  return std::sqrt(d * d + xy * xy);
}

double Stress::von_mises() const {
  const double a = xx - yy, b = yy - zz, c = zz - xx;
  return std::sqrt(0.5 * (a * a + b * b + c * c) + 3.0 * xy * xy);
}

double Strain::equivalent() const {
  const double m = (xx + yy) / 3.0;
  const double exx = xx - m, eyy = yy - m, ezz = -m;
  return std::sqrt(2.0 / 3.0 *
                   (exx * exx + eyy * eyy + ezz * ezz + 2.0 * xy * xy));
}

Stress elastic_update(const Stress& stress, const Strain& de,
                      const PoroElastic& model) {
  const double lambda = model.lame_lambda();
  const double mu = model.shear_modulus();
  const double vol = lambda * de.volumetric();
  Stress out = stress;
  out.xx += vol + 2.0 * mu * de.xx;
  out.yy += vol + 2.0 * mu * de.yy;
  out.xy += 2.0 * mu * de.xy;
  out.zz += vol;
  return out;
}

ReturnResult tresca_return(const Stress& trial, const Tresca& model) {
  ReturnResult r;
  r.stress = trial;
  const double tau = trial.max_shear();
  const double su = model.undrained_strength;
  if (tau <= su) return r;

  const double scale = su / tau;
  const double mean = trial.mean_in_plane();
  const double sxx = trial.xx - mean;
  const double syy = trial.yy - mean;
  r.stress.xx = mean + scale * sxx;
  r.stress.yy = mean + scale * syy;
  r.stress.xy = scale * trial.xy;

  // the removed stress is purely in-plane deviatoric: de_p = ds / (2 mu)
  const double inv2mu = 1.0 / (2.0 * model.elastic.shear_modulus());
  r.plastic_strain_increment.xx = (1.0 - scale) * sxx * inv2mu;
  r.plastic_strain_increment.yy = (1.0 - scale) * syy * inv2mu;
  r.plastic_strain_increment.xy = (1.0 - scale) * trial.xy * inv2mu;
  r.yielded = true;
  return r;
}

}  // namespace tpmpm
