#include <doctest.h>

#include <cmath>
#include <random>

#include "tpmpm/constitutive.hpp"

using namespace tpmpm;

namespace {
const PoroElastic kSkeleton{10.0e6, 0.2};
}

TEST_CASE("moduli of the skeleton") {
  CHECK(kSkeleton.shear_modulus() == doctest::Approx(10.0e6 / 2.4));
  CHECK(kSkeleton.lame_lambda() == doctest::Approx(2.0e6 / (1.2 * 0.6)));
  CHECK(kSkeleton.constrained_modulus() ==
        doctest::Approx(10.0e6 * 0.8 / (1.2 * 0.6)));
}

TEST_CASE("uniaxial strain loads with the constrained modulus") {
  const double eps = -1.0e-3;
  const auto s = elastic_update({}, {0.0, eps, 0.0}, kSkeleton);
  CHECK(s.yy == doctest::Approx(kSkeleton.constrained_modulus() * eps));
  CHECK(s.xx == doctest::Approx(kSkeleton.lame_lambda() * eps));
  CHECK(s.zz == doctest::Approx(kSkeleton.lame_lambda() * eps));
  CHECK(s.xy == 0.0);
}

TEST_CASE("pure shear and zero increment") {
  const Stress start{-100.0, -50.0, 5.0, -70.0};
  CHECK(elastic_update(start, {}, kSkeleton) == start);
  const auto s = elastic_update({}, {0.0, 0.0, 1e-4}, kSkeleton);
  CHECK(s.xy == doctest::Approx(2.0 * kSkeleton.shear_modulus() * 1e-4));
  CHECK(s.xx == 0.0);
}

TEST_CASE("Tresca leaves admissible states untouched") {
  const Tresca model{kSkeleton, 10.0e3};
  const Stress trial{-20e3, -30e3, 2e3, -25e3};
  const auto r = tresca_return(trial, model);
  CHECK_FALSE(r.yielded);
  CHECK(r.stress == trial);
  CHECK(r.plastic_strain_increment == Strain{});
}

TEST_CASE("Tresca return lands on the yield surface") {
  const Tresca model{kSkeleton, 10.0e3};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-60e3, 60e3);
  int yielded = 0;
  for (int k = 0; k < 500; ++k) {
    const Stress trial{u(rng), u(rng), 0.5 * u(rng), u(rng)};
    const auto r = tresca_return(trial, model);
    if (!r.yielded) {
      CHECK(trial.max_shear() <= model.undrained_strength);
      continue;
    }
    ++yielded;
    CHECK(r.stress.max_shear() == doctest::Approx(model.undrained_strength));
    CHECK(r.stress.mean_in_plane() == doctest::Approx(trial.mean_in_plane()));
    CHECK(r.stress.zz == trial.zz);
    CHECK(std::abs(r.plastic_strain_increment.volumetric()) <= 1e-18);
    // trial = returned + 2 mu de_p
    const double two_mu = 2.0 * kSkeleton.shear_modulus();
    CHECK(r.stress.xy + two_mu * r.plastic_strain_increment.xy ==
          doctest::Approx(trial.xy));
    CHECK(r.stress.xx + two_mu * r.plastic_strain_increment.xx ==
          doctest::Approx(trial.xx));
  }
  CHECK(yielded > 100);
}

TEST_CASE("stress and strain invariants") {
  const Stress s{-30.0, -10.0, 0.0, -20.0};
  CHECK(s.max_shear() == doctest::Approx(10.0));
  CHECK(s.mean_in_plane() == doctest::Approx(-20.0));
  CHECK(s.von_mises() == doctest::Approx(std::sqrt(300.0)));
  CHECK(Strain{}.equivalent() == 0.0);
  CHECK(Strain{1e-3, -1e-3, 0.0}.equivalent() ==
        doctest::Approx(std::sqrt(2.0 / 3.0 * 2e-6)));
}
