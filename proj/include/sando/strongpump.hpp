#pragma once

// Closed-form strong-pump (undepleted pump) solution: SPM/XPM phase rates,
// parametric coupling rates, total mismatch, gain coefficient, and the
// signal gain formula with its zero-detuning limit.

#include <cmath>
#include <complex>

#include "sando/cell.hpp"
#include "sando/dispersion.hpp"
#include "sando/units.hpp"

namespace sando {

struct StrongPumpSolution {
  double alpha_p, alpha_s, alpha_i; // phase-rotation rates
  double beta_s, beta_i;            // coupling rates
  double delta_k;                   // total mismatch incl. SPM/XPM
  double g_squared;                 // beta_s beta_i - (delta_k/2)^2, signed
  double g_abs;                     // sqrt(|g_squared|)
  bool g_real;                      // false: oscillatory (imaginary g) branch
  double a_p;                       // pump amplitude
};

inline StrongPumpSolution solve_strong_pump(const ModeTriple& t,
                                            const NormalizedModel& model,
                                            double a_p,
                                            bool use_resonator = false) {
  if (a_p < 0.0) throw invalid_parameter_error("pump amplitude must be >= 0");
  const double d_self = nonlinear_factor(model.geometry, 0.0).value;
  const double d_cross = nonlinear_factor(model.geometry, t.delta_k_L).value;
  const double cp = club_at(model, t.omega_p, use_resonator);
  const double cs = club_at(model, t.omega_s, use_resonator);
  const double ci = club_at(model, t.omega_i, use_resonator);
  const double ap2 = a_p * a_p;
  const double kp2 = t.k_p * t.k_p;
  const double wp2 = t.omega_p * t.omega_p;
  const double ws2 = t.omega_s * t.omega_s;
  const double wi2 = t.omega_i * t.omega_i;

  StrongPumpSolution sol{};
  sol.a_p = a_p;
  sol.alpha_p = std::pow(t.k_p, 5) * d_self * ap2 / (16.0 * wp2 * cp);
  sol.alpha_s = std::pow(t.k_s, 3) * kp2 * d_self * ap2 / (8.0 * ws2 * cs);
  sol.alpha_i = std::pow(t.k_i, 3) * kp2 * d_self * ap2 / (8.0 * wi2 * ci);
  sol.beta_s = kp2 * t.k_i * t.k_s * (2.0 * t.k_p - t.k_i) * d_cross * ap2 /
               (16.0 * ws2 * cs);
  sol.beta_i = kp2 * t.k_i * t.k_s * (2.0 * t.k_p - t.k_s) * d_cross * ap2 /
               (16.0 * wi2 * ci);
  sol.delta_k = t.delta_k_L + 2.0 * sol.alpha_p - sol.alpha_s - sol.alpha_i;
  sol.g_squared = sol.beta_s * sol.beta_i - 0.25 * sol.delta_k * sol.delta_k;
  sol.g_abs = std::sqrt(std::fabs(sol.g_squared));
  sol.g_real = sol.g_squared >= 0.0;
  return sol;
}

inline constexpr double k_small_gx = 1e-8;

/// Power gain ratio (linear). Real g: cosh² + (Δk/2g)² sinh²; imaginary g:
/// the analytic continuation cos² + (Δk/2|g|)² sin²; |g|x below k_small_gx:
/// the g->0 limit 1 + (Δk x / 2)².
inline double gain_ratio(const StrongPumpSolution& sol, double x) {
  const double gx = sol.g_abs * x;
  if (gx < k_small_gx) {
    const double u = 0.5 * sol.delta_k * x;
    return 1.0 + u * u;
  }
  const double r = 0.5 * sol.delta_k / sol.g_abs;
  if (sol.g_real) {
    const double ch = std::cosh(gx), sh = std::sinh(gx);
    return ch * ch + r * r * sh * sh;
  }
  const double co = std::cos(gx), si = std::sin(gx);
  return co * co + r * r * si * si;
}

inline double gain_db(const StrongPumpSolution& sol, double x) {
  return 10.0 * std::log10(gain_ratio(sol, x));
}

/// Signal amplitude at position x given the two seeds (idler seed enters
/// conjugated). Same branch handling as gain_db.
inline std::complex<double> signal_amplitude(const StrongPumpSolution& sol,
                                             double x,
                                             std::complex<double> a_s0,
                                             std::complex<double> a_i0) {
  using namespace std::complex_literals;
  const double gx = sol.g_abs * x;
  std::complex<double> ch, sh_over_g; // cosh(gx), sinh(gx)/g
  if (gx < k_small_gx) {
    ch = 1.0;
    sh_over_g = x;
  } else if (sol.g_real) {
    ch = std::cosh(gx);
    sh_over_g = std::sinh(gx) / sol.g_abs;
  } else {
    ch = std::cos(gx);
    sh_over_g = std::sin(gx) / sol.g_abs;
  }
  const std::complex<double> phase =
      std::exp(0.5i * (sol.delta_k * x));
  return ((ch - 0.5i * (sol.delta_k * sh_over_g)) * a_s0 -
          1.0i * (sol.beta_s * sh_over_g) * std::conj(a_i0)) *
         phase;
}

} // namespace sando
