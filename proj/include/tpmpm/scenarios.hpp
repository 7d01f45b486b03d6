#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tpmpm/config.hpp"
#include "tpmpm/particles.hpp"

namespace tpmpm {

//! Terzaghi single-drainage consolidation. Depth z is measured from the
//! drained boundary (z = 0) to the impervious one (z = H).
struct TerzaghiOracle {
  double drainage_height = 1.0;          // H
  double consolidation_coefficient = 0;  // c_v
  double initial_pressure = 0.0;         // p0
  int terms = 100;

  //! c_v = k M / gamma_w
  static double consolidation_coefficient_of(double permeability,
                                             double constrained_modulus,
                                             double water_unit_weight);
  double time_factor(double t) const {
    return consolidation_coefficient * t /
           (drainage_height * drainage_height);
  }
  double time_of(double time_factor) const {
    return time_factor * drainage_height * drainage_height /
           consolidation_coefficient;
  }
};

double terzaghi_pressure(double z, double t, const TerzaghiOracle& oracle);

//! Average degree of consolidation U(T_v)
double terzaghi_average_consolidation(double time_factor, int terms = 100);

//! Particle pore pressure profile against the series at time t. The drained
//! boundary sits at y = top; particles are binned by layer.
struct ProfileError {
  double time = 0.0;
  double time_factor = 0.0;
  //! ||p_mpm - p_exact||_2 / ||p_exact||_2 over layers
  double relative_l2 = 0.0;
  //! pressure at z = H/2, linearly interpolated between layers
  double midpoint_numeric = 0.0;
  double midpoint_exact = 0.0;
  double midpoint_relative = 0.0;
  //! (z, layer-mean p) sorted by z
  std::vector<std::array<double, 2>> layers;
};

ProfileError terzaghi_profile_error(std::span<const TwoPhaseParticle> particles,
                                    const TerzaghiOracle& oracle, double time,
                                    double top);

//! Built-in verification problems
ScenarioConfig build_consolidation();
ScenarioConfig build_impact();
ScenarioConfig build_footing();

//! "consolidation", "impact" or "footing"; throws ConfigError otherwise
ScenarioConfig build_scenario(const std::string& name);
std::vector<std::string> scenario_names();

//! Oracle matching the consolidation scenario's material and geometry
TerzaghiOracle consolidation_oracle(const ScenarioConfig& config);

//! Geometry constants of the built-in scenarios
namespace consolidation {
inline constexpr double kColumnHeight = 1.0;
inline constexpr double kColumnWidth = 0.02;
inline constexpr double kLoad = 10.0e3;
}  // namespace consolidation

namespace impact {
inline constexpr double kBarLength = 1.0;
inline constexpr double kBarHeight = 0.06;
inline constexpr double kGap = 0.02;
inline constexpr double kBlockMass = 3.24;
inline constexpr double kLoad = 10.0e3;
}  // namespace impact

namespace footing {
inline constexpr double kSoilWidth = 8.0;
inline constexpr double kSoilDepth = 6.0;
inline constexpr double kHalfWidth = 0.5;
inline constexpr double kUndrainedStrength = 10.0e3;
//! Prandtl (2 + pi) s_u
double peak_traction();
}  // namespace footing

}  // namespace tpmpm
