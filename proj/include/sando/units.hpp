#pragma once

// Conversions between fabrication-level (SI) device parameters and the
// dimensionless transmission-line model, plus current/amplitude/dBm maps.
// All internal computation elsewhere in the library is dimensionless; this
// header is the only place SI units appear.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "sando/errors.hpp"

namespace sando {

/// Magnetic flux quantum, Wb (CODATA).
inline constexpr double k_flux_quantum = 2.067833848e-15;

inline constexpr double k_default_impedance = 50.0; // ohm

struct ResonatorParams {
  double C_c; // coupling capacitance, F
  double C_r; // resonator capacitance, F
  double L_r; // resonator inductance, H
};

/// Fabrication-level device description (SI units).
struct PhysicalDeviceParams {
  double I_c;  // junction critical current, A
  double C_J;  // junction capacitance, F
  double C_G0; // central sub-cell ground capacitance, F
  double C_G1; // outer sub-cell ground capacitance, F
  long N_JJ;   // total junction count
  double Z0 = k_default_impedance;
  std::optional<ResonatorParams> resonator;

  /// Validates positivity and the junction-count divisibility rule.
  /// Single-junction comparison devices (x0 = 1, c_G1 = 0) are exempt from
  /// the divisible-by-3 requirement.
  void validate(bool sando_cells = true) const {
    if (I_c <= 0.0) throw invalid_parameter_error("device.I_c must be > 0");
    if (C_J <= 0.0) throw invalid_parameter_error("device.C_J must be > 0");
    if (C_G0 <= 0.0) throw invalid_parameter_error("device.C_G0 must be > 0");
    if (C_G1 < 0.0) throw invalid_parameter_error("device.C_G1 must be >= 0");
    if (Z0 <= 0.0) throw invalid_parameter_error("device.Z0 must be > 0");
    if (N_JJ < (sando_cells ? 3 : 1))
      throw invalid_parameter_error("device.N_JJ too small");
    if (sando_cells && N_JJ % 3 != 0)
      throw invalid_parameter_error("device.N_JJ must be divisible by 3 for Sando cells");
    if (resonator) {
      if (resonator->C_c <= 0.0 || resonator->C_r <= 0.0 || resonator->L_r <= 0.0)
        throw invalid_parameter_error("device.resonator values must be > 0");
    }
  }
};

/// Sub-unit-cell geometry. x0 is the single degree of freedom:
/// x1 = (1 - x0)/2 and a = (1 + x0)/4 = (x0 + x1)/2.
struct Geometry {
  double x0;
  double x1;
  double a;

  static Geometry from_x0(double x0) {
    if (!(x0 > 0.0) || x0 > 1.0)
      throw invalid_parameter_error("x0 must lie in (0, 1]");
    return Geometry{x0, (1.0 - x0) / 2.0, (1.0 + x0) / 4.0};
  }
};

struct ResonatorNorm {
  double c_c; // C_c / C_J
  double c_r; // C_r / C_J
  double l_r; // L_r / L_J
};

/// Dimensionless model. omega_J and E_J are retained only for unit
/// conversions and reporting.
struct NormalizedModel {
  double c_G0;
  double c_G1;
  Geometry geometry;
  double omega_J; // Josephson plasma angular frequency, rad/s
  double E_J;     // Josephson energy, J
  std::optional<ResonatorNorm> resonator;
};

inline NormalizedModel normalize(const PhysicalDeviceParams& params, double x0) {
  params.validate(/*sando_cells=*/x0 < 1.0);
  const double L_J = k_flux_quantum / (2.0 * std::numbers::pi * params.I_c);
  NormalizedModel model{
      params.C_G0 / params.C_J,
      params.C_G1 / params.C_J,
      Geometry::from_x0(x0),
      1.0 / std::sqrt(L_J * params.C_J),
      params.I_c * k_flux_quantum / (2.0 * std::numbers::pi),
      std::nullopt};
  if (params.resonator) {
    model.resonator = ResonatorNorm{params.resonator->C_c / params.C_J,
                                    params.resonator->C_r / params.C_J,
                                    params.resonator->L_r / L_J};
  }
  return model;
}

/// Hz -> dimensionless angular frequency ω = 2πf / Ω_J.
inline double freq_to_normalized(double f_hz, const NormalizedModel& model) {
  if (f_hz <= 0.0) throw invalid_parameter_error("frequency must be > 0");
  return 2.0 * std::numbers::pi * f_hz / model.omega_J;
}

inline double normalized_to_freq(double omega, const NormalizedModel& model) {
  return omega * model.omega_J / (2.0 * std::numbers::pi);
}

/// How a stated mode current I_n/I_c maps onto the dimensionless flux
/// amplitude ξ_n used by the coupled-mode equations.
enum class AmplitudeConvention {
  UnitCell,       // ξ = (I/I_c) / k
  CentralJunction,// ξ = (I/I_c) / (x0 k)
  ReferenceLine,  // ξ = λ (I/I_c) sqrt(1-ω²) / (ω sqrt(♣)); x0-independent
};

/// Calibrated scale of the ReferenceLine convention (shipped default).
inline constexpr double k_reference_scale = 1.8;

inline double current_to_amplitude(double I_over_Ic, double k,
                                   AmplitudeConvention convention,
                                   double x0 = 1.0) {
  if (I_over_Ic < 0.0) throw invalid_parameter_error("I/I_c must be >= 0");
  if (k == 0.0) throw invalid_parameter_error("k must be nonzero");
  switch (convention) {
    case AmplitudeConvention::CentralJunction:
      return I_over_Ic / (x0 * k);
    case AmplitudeConvention::UnitCell:
    default:
      return I_over_Ic / k;
  }
}

/// ReferenceLine amplitude: (I/I_c)/k evaluated on the x0 = 1 dispersion of
/// the same line, so the amplitude is independent of the cell geometry.
inline double reference_line_amplitude(double I_over_Ic, double omega,
                                       double club,
                                       double scale = k_reference_scale) {
  if (omega <= 0.0 || omega >= 1.0)
    throw above_cutoff_error("reference amplitude needs 0 < omega < 1");
  const double k_ref = omega * std::sqrt(club) / std::sqrt(1.0 - omega * omega);
  return scale * I_over_Ic / k_ref;
}

/// dBm of a current on a Z0 line, P = I² Z0 (convention fixed by the
/// -65.05 dBm anchor for 2.5 uA on 50 ohm).
inline double current_to_dbm(double current_a, double Z0 = k_default_impedance) {
  if (current_a <= 0.0) throw invalid_parameter_error("current must be > 0");
  return 10.0 * std::log10(current_a * current_a * Z0 * 1e3);
}

inline double dbm_to_current(double p_dbm, double Z0 = k_default_impedance) {
  return std::sqrt(std::pow(10.0, (p_dbm - 30.0) / 10.0) / Z0);
}

} // namespace sando
