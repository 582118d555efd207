#pragma once

// Linear dispersion k(ω) of the Sando line and assembly of the
// pump/signal/idler mode triple under the degenerate-pump four-wave-mixing
// constraint ω_s + ω_i = 2 ω_p.

#include <cmath>
#include <string>

#include "sando/cell.hpp"
#include "sando/errors.hpp"
#include "sando/units.hpp"

namespace sando {

/// k(ω) = ω sqrt(♣/◇ᴸ) / sqrt(1 - (♥/◇ᴸ) ω²), positive square-root branch,
/// odd in ω. With ♥ = ◇ᴸ the cutoff is |ω| = 1.
inline double wavenumber(double omega, const NormalizedModel& model,
                         bool use_resonator = false) {
  if (omega == 0.0) return 0.0;
  const ScalingFactors lf = linear_factors(model);
  const double under = 1.0 - (lf.heart / lf.diamond_L) * omega * omega;
  if (under <= 0.0)
    throw above_cutoff_error("omega at or above plasma cutoff");
  const double club = club_at(model, omega, use_resonator);
  if (club < 0.0)
    throw stopband_error("negative club(omega): inside resonator stopband");
  const double mag = std::fabs(omega) * std::sqrt(club / lf.diamond_L) /
                     std::sqrt(under);
  return omega > 0.0 ? mag : -mag;
}

/// Pump/signal/idler frequencies and wavenumbers, with the linear mismatch
/// delta_k_L = 2 k_p - k_s - k_i.
struct ModeTriple {
  double omega_p, omega_s, omega_i;
  double k_p, k_s, k_i;
  double delta_k_L;
};

inline constexpr double k_default_guard_hz = 1e6;

inline ModeTriple mode_triple(double f_s, double f_p,
                              const NormalizedModel& model,
                              bool use_resonator = false,
                              double guard_hz = k_default_guard_hz) {
  if (f_s <= 0.0 || f_s >= 2.0 * f_p)
    throw invalid_parameter_error("signal frequency must lie in (0, 2 f_p)");
  if (std::fabs(f_s - f_p) < guard_hz)
    throw degenerate_signal_error("signal inside degeneracy guard around pump");
  ModeTriple t{};
  t.omega_p = freq_to_normalized(f_p, model);
  t.omega_s = freq_to_normalized(f_s, model);
  t.omega_i = 2.0 * t.omega_p - t.omega_s;
  auto wn = [&](double w, const char* mode) {
    try {
      return wavenumber(w, model, use_resonator);
    } catch (const above_cutoff_error&) {
      throw above_cutoff_error(std::string(mode) + " mode above cutoff");
    } catch (const stopband_error&) {
      throw stopband_error(std::string(mode) + " mode inside stopband");
    } catch (const pole_error&) {
      throw pole_error(std::string(mode) + " mode at resonator pole");
    }
  };
  t.k_p = wn(t.omega_p, "pump");
  t.k_s = wn(t.omega_s, "signal");
  t.k_i = wn(t.omega_i, "idler");
  t.delta_k_L = 2.0 * t.k_p - t.k_s - t.k_i;
  return t;
}

} // namespace sando
