#pragma once

// Three-mode coupled-mode equations of the Sando line: real amplitudes
// (ξ_p, ξ_s, ξ_i) and total phase Θ = Δk_L x + 2θ_p - θ_s - θ_i, integrated
// along the device with an embedded Dormand-Prince RK5(4) pair.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "sando/cell.hpp"
#include "sando/dispersion.hpp"
#include "sando/errors.hpp"
#include "sando/units.hpp"

namespace sando {

struct FieldState {
  double xi_p, xi_s, xi_i;
  double theta; // Θ, radians
};

struct InitialCurrents {
  double pump_over_Ic = 0.5;
  double signal_over_pump = 1e-5;
  double idler_over_pump = 1e-8;
  double theta_p = 0.0, theta_s = 0.0, theta_i = 0.0;
};

struct IntegratorSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double max_step = 0.5;  // unit cells
  long sample_stride = 1; // record every N unit cells
};

struct Trajectory {
  std::vector<double> x; // position, unit cells, strictly increasing
  std::vector<FieldState> states;
  ModeTriple triple{};
  Geometry geometry{};
  ScalingFactors factors{};
  double diamond_cross = 0.0; // nonlinear factor at mismatch Δk_L
  double diamond_self = 0.0;  // nonlinear factor at mismatch 0
};

/// One Sando cell holds 3 junctions; the single-junction comparison mode
/// (x0 = 1, c_G1 = 0) counts one junction per cell.
inline double device_length_cells(long n_jj, bool single_junction_mode = false) {
  return single_junction_mode ? static_cast<double>(n_jj)
                              : static_cast<double>(n_jj) / 3.0;
}

/// Precomputed right-hand side of the coupled-mode equations. Immutable
/// after construction; independent integrations may run concurrently.
class CoupledModeSystem {
public:
  CoupledModeSystem(const ModeTriple& triple, const NormalizedModel& model,
                    bool use_resonator = false)
      : triple_(triple) {
    diamond_cross_ = nonlinear_factor(model.geometry, triple.delta_k_L).value;
    diamond_self_ = nonlinear_factor(model.geometry, 0.0).value;
    club_p_ = club_at(model, triple.omega_p, use_resonator);
    club_s_ = club_at(model, triple.omega_s, use_resonator);
    club_i_ = club_at(model, triple.omega_i, use_resonator);
  }

  /// State vector layout: {ξ_p, ξ_s, ξ_i, Θ}.
  std::array<double, 4> rhs(const std::array<double, 4>& y) const {
    const double xp = y[0], xs = y[1], xi = y[2];
    const double sin_th = std::sin(y[3]);
    const double cos_th = std::cos(y[3]);
    const auto& t = triple_;
    const double kk = t.k_p * t.k_p * t.k_s * t.k_i;
    const double wp2 = t.omega_p * t.omega_p;
    const double ws2 = t.omega_s * t.omega_s;
    const double wi2 = t.omega_i * t.omega_i;

    const double dxp = diamond_cross_ / (8.0 * wp2 * club_p_) * kk *
                       (t.k_s + t.k_i - t.k_p) * xs * xi * xp * sin_th;
    const double dxs = diamond_cross_ / (16.0 * ws2 * club_s_) * kk *
                       (t.k_i - 2.0 * t.k_p) * xp * xp * xi * sin_th;
    const double dxi = diamond_cross_ / (16.0 * wi2 * club_i_) * kk *
                       (t.k_s - 2.0 * t.k_p) * xp * xp * xs * sin_th;

    // Cross-phase cosΘ group and the three SPM/XPM groups.
    const double cross =
        diamond_cross_ * kk * xp * xp * xs * xi / 16.0 *
        (4.0 * (t.k_s + t.k_i - t.k_p) / (xp * xp * wp2 * club_p_) -
         (2.0 * t.k_p - t.k_i) / (xs * xs * ws2 * club_s_) -
         (2.0 * t.k_p - t.k_s) / (xi * xi * wi2 * club_i_)) *
        cos_th;
    const double kp2 = t.k_p * t.k_p, ks2 = t.k_s * t.k_s, ki2 = t.k_i * t.k_i;
    const double spm =
        t.k_p * kp2 * diamond_self_ / (8.0 * wp2 * club_p_) *
            (kp2 * xp * xp + 2.0 * ks2 * xs * xs + 2.0 * ki2 * xi * xi) -
        t.k_s * ks2 * diamond_self_ / (16.0 * ws2 * club_s_) *
            (ks2 * xs * xs + 2.0 * kp2 * xp * xp + 2.0 * ki2 * xi * xi) -
        t.k_i * ki2 * diamond_self_ / (16.0 * wi2 * club_i_) *
            (ki2 * xi * xi + 2.0 * kp2 * xp * xp + 2.0 * ks2 * xs * xs);

    return {dxp, dxs, dxi, t.delta_k_L + cross + spm};
  }

  const ModeTriple& triple() const { return triple_; }
  double diamond_cross() const { return diamond_cross_; }
  double diamond_self() const { return diamond_self_; }
  double club_p() const { return club_p_; }
  double club_s() const { return club_s_; }
  double club_i() const { return club_i_; }

private:
  ModeTriple triple_;
  double diamond_cross_, diamond_self_;
  double club_p_, club_s_, club_i_;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

using State4 = std::array<double, 4>;

inline State4 axpy(const State4& y, double h, const State4& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

/// Advances y from x to x_end with adaptive steps; k1 is the FSAL derivative
/// at (x, y) and is updated to the derivative at the returned point.
inline void advance_to(const CoupledModeSystem& sys, double& x, State4& y,
                       State4& k1, double x_end,
                       const IntegratorSettings& is, double& h) {
  using T = Dopri5;
  while (x < x_end) {
    double step = std::min(h, x_end - x);
    const State4 k2 = sys.rhs(axpy(y, step * T::a21, k1));
    State4 yt = y;
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + step * (T::a31 * k1[i] + T::a32 * k2[i]);
    const State4 k3 = sys.rhs(yt);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + step * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    const State4 k4 = sys.rhs(yt);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + step * (T::a51 * k1[i] + T::a52 * k2[i] +
                             T::a53 * k3[i] + T::a54 * k4[i]);
    const State4 k5 = sys.rhs(yt);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + step * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] +
                             T::a64 * k4[i] + T::a65 * k5[i]);
    const State4 k6 = sys.rhs(yt);
    State4 y5;
    for (int i = 0; i < 4; ++i)
      y5[i] = y[i] + step * (T::b1 * k1[i] + T::b3 * k3[i] + T::b4 * k4[i] +
                             T::b5 * k5[i] + T::b6 * k6[i]);
    const State4 k7 = sys.rhs(y5); // FSAL

    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double ei = step * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] +
                                T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
      const double sc =
          is.abs_tol + is.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      err = std::max(err, std::fabs(ei) / sc);
    }
    if (!std::isfinite(err) ||
        !std::isfinite(y5[0] + y5[1] + y5[2] + y5[3])) {
      throw numerical_failure_error("non-finite state in coupled-mode RHS", x);
    }
    if (err <= 1.0) {
      x += step;
      y = y5;
      k1 = k7;
      const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h = std::min(step * std::min(grow, 5.0), is.max_step);
    } else {
      h = step * std::max(0.9 * std::pow(err, -0.2), 0.1);
    }
    if (h < 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, x))
      throw stiffness_error("step size underflow", x);
  }
}

} // namespace detail

struct ModeAmplitudes {
  double xi_p0, xi_s0, xi_i0;
};

/// Initial amplitudes from the configured currents under the chosen
/// convention. The idler seed is floored at 1e-16 ξ_p so Θ stays defined.
inline ModeAmplitudes initial_amplitudes(
    const ModeTriple& t, const NormalizedModel& model,
    const InitialCurrents& ic, AmplitudeConvention convention,
    bool use_resonator = false, double reference_scale = k_reference_scale) {
  const double ip = ic.pump_over_Ic;
  const double is = ip * ic.signal_over_pump;
  const double ii = ip * ic.idler_over_pump;
  ModeAmplitudes a{};
  if (convention == AmplitudeConvention::ReferenceLine) {
    a.xi_p0 = reference_line_amplitude(
        ip, t.omega_p, club_at(model, t.omega_p, use_resonator), reference_scale);
    a.xi_s0 = is > 0.0
                  ? reference_line_amplitude(
                        is, t.omega_s, club_at(model, t.omega_s, use_resonator),
                        reference_scale)
                  : 0.0;
    a.xi_i0 = ii > 0.0
                  ? reference_line_amplitude(
                        ii, t.omega_i, club_at(model, t.omega_i, use_resonator),
                        reference_scale)
                  : 0.0;
  } else {
    const double x0 = model.geometry.x0;
    a.xi_p0 = current_to_amplitude(ip, t.k_p, convention, x0);
    a.xi_s0 = current_to_amplitude(is, t.k_s, convention, x0);
    a.xi_i0 = current_to_amplitude(ii, t.k_i, convention, x0);
  }
  a.xi_i0 = std::max(a.xi_i0, 1e-16 * a.xi_p0);
  return a;
}

inline Trajectory integrate(const ModeTriple& triple,
                            const NormalizedModel& model,
                            const InitialCurrents& ic, double length_cells,
                            const IntegratorSettings& settings = {},
                            AmplitudeConvention convention =
                                AmplitudeConvention::ReferenceLine,
                            bool use_resonator = false,
                            double reference_scale = k_reference_scale) {
  if (length_cells <= 0.0)
    throw invalid_parameter_error("device length must be > 0");
  if (ic.pump_over_Ic <= 0.0 || ic.signal_over_pump <= 0.0)
    throw invalid_parameter_error("pump and signal currents must be > 0");

  const CoupledModeSystem sys(triple, model, use_resonator);
  const ModeAmplitudes amp =
      initial_amplitudes(triple, model, ic, convention, use_resonator,
                         reference_scale);

  Trajectory traj;
  traj.triple = triple;
  traj.geometry = model.geometry;
  traj.factors = linear_factors(model);
  traj.diamond_cross = sys.diamond_cross();
  traj.diamond_self = sys.diamond_self();

  detail::State4 y{amp.xi_p0, amp.xi_s0, amp.xi_i0,
                   2.0 * ic.theta_p - ic.theta_s - ic.theta_i};
  double x = 0.0;
  double h = std::min(settings.max_step, length_cells);
  detail::State4 k1 = sys.rhs(y);

  const double stride = static_cast<double>(std::max(settings.sample_stride, 1L));
  traj.x.push_back(0.0);
  traj.states.push_back({y[0], y[1], y[2], y[3]});
  double next = stride;
  while (next < length_cells - 1e-9) {
    detail::advance_to(sys, x, y, k1, next, settings, h);
    traj.x.push_back(x);
    traj.states.push_back({y[0], y[1], y[2], y[3]});
    next += stride;
  }
  detail::advance_to(sys, x, y, k1, length_cells, settings, h);
  traj.x.push_back(x);
  traj.states.push_back({y[0], y[1], y[2], y[3]});
  return traj;
}

/// 20 log10(ξ_s(x)/ξ_s(0)) per sample (amplitude ratio; equals 10 log10 of
/// the power ratio).
inline std::vector<double> gain_db_from_trajectory(const Trajectory& traj) {
  std::vector<double> g;
  g.reserve(traj.states.size());
  const double xs0 = traj.states.front().xi_s;
  for (const auto& s : traj.states) g.push_back(20.0 * std::log10(s.xi_s / xs0));
  return g;
}

/// Constants of motion of the amplitude equations, used by the conservation
/// tests. Obtained by eliminating the shared ξ_p²ξ_sξ_i sinΘ factor between
/// the three amplitude equations (with the per-mode club factored in).
struct ConservedPair {
  double c1; // signal-idler
  double c2; // pump-signal
};

inline ConservedPair conserved_quantities(const CoupledModeSystem& sys,
                                          const FieldState& s) {
  const auto& t = sys.triple();
  // The per-mode club enters the elimination when the resonator makes club
  // frequency dependent; for the bare line the three values coincide.
  const double ts = sys.club_s() * t.omega_s * t.omega_s * s.xi_s * s.xi_s /
                    (t.k_i - 2.0 * t.k_p);
  const double ti = sys.club_i() * t.omega_i * t.omega_i * s.xi_i * s.xi_i /
                    (t.k_s - 2.0 * t.k_p);
  const double tp = sys.club_p() * t.omega_p * t.omega_p * s.xi_p * s.xi_p /
                    (2.0 * (t.k_s + t.k_i - t.k_p));
  return ConservedPair{ts - ti, tp - ts};
}

} // namespace sando
