#pragma once

// Sando unit-cell scaling factors: the linear factors (♣, ♥, ◇ᴸ in the
// source notation -> club, heart, diamond_L), the resonator-loaded
// frequency-dependent club(ω), and the mode-dependent nonlinear factor.

#include <cmath>

#include "sando/errors.hpp"
#include "sando/units.hpp"

namespace sando {

struct ScalingFactors {
  double club;      // c_G0 + 2 c_G1 (bare line)
  double heart;     // x0² + 2 x1²
  double diamond_L; // equals heart for identical junctions
};

inline ScalingFactors linear_factors(const NormalizedModel& model) {
  const auto& g = model.geometry;
  const double h = g.x0 * g.x0 + 2.0 * g.x1 * g.x1;
  return ScalingFactors{model.c_G0 + 2.0 * model.c_G1, h, h};
}

inline constexpr double k_pole_guard = 1e-12;

/// Effective resonator capacitance c_LC(ω) = c_c (l_r c_r ω² - 1) /
/// (l_r (c_c + c_r) ω² - 1). Throws pole_error inside the guard band of the
/// denominator zero; the caller marks that point as stopband.
inline double resonator_capacitance(const ResonatorNorm& res, double omega) {
  const double denom = res.l_r * (res.c_c + res.c_r) * omega * omega - 1.0;
  if (std::fabs(denom) < k_pole_guard)
    throw pole_error("omega at resonator pole");
  return res.c_c * (res.l_r * res.c_r * omega * omega - 1.0) / denom;
}

inline double club_with_resonator(const NormalizedModel& model, double omega) {
  if (!model.resonator)
    throw invalid_parameter_error("model has no resonator parameters");
  return model.c_G0 + resonator_capacitance(*model.resonator, omega) +
         2.0 * model.c_G1;
}

/// club at a given mode frequency, resonator-loaded or bare.
inline double club_at(const NormalizedModel& model, double omega,
                      bool use_resonator) {
  if (use_resonator) return club_with_resonator(model, std::fabs(omega));
  return model.c_G0 + 2.0 * model.c_G1;
}

struct NonlinearFactor {
  double value;    // x0⁴ + 2 x1⁴ cos(mismatch a)
  double mismatch; // k_{m1} + k_{m2} + k_{m3} - k_n
};

inline NonlinearFactor nonlinear_factor(const Geometry& g, double mismatch) {
  const double x0_4 = g.x0 * g.x0 * g.x0 * g.x0;
  const double x1_4 = g.x1 * g.x1 * g.x1 * g.x1;
  return NonlinearFactor{x0_4 + 2.0 * x1_4 * std::cos(mismatch * g.a), mismatch};
}

} // namespace sando
