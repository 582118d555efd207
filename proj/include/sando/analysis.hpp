#pragma once

// Experiment-level analyses: gain spectra, junction-count scans, 2-D
// parameter sweeps, 1-dB compression search, bandwidth extraction, and the
// scaling-trend decomposition of the mismatch/coupling terms.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sando/cme.hpp"
#include "sando/dispersion.hpp"
#include "sando/strongpump.hpp"
#include "sando/units.hpp"

namespace sando {

enum class Engine { Analytic, Ode };

enum class CellFlag { None, Stopband, AboveCutoff, DegenerateGuard, Failed };

inline const char* to_string(CellFlag f) {
  switch (f) {
    case CellFlag::Stopband: return "stopband";
    case CellFlag::AboveCutoff: return "above_cutoff";
    case CellFlag::DegenerateGuard: return "degenerate_guard";
    case CellFlag::Failed: return "failed";
    default: return "";
  }
}

struct GridCell {
  double gain_db = 0.0;
  double k_s = 0.0, k_p = 0.0, k_i = 0.0;
  double delta_k = 0.0;     // total mismatch (strong-pump) or delta_k_L
  double theta_final = 0.0; // ODE engine only
  CellFlag flag = CellFlag::None;
};

struct SweepGrid {
  std::string axis1_name;
  std::vector<double> axis1;
  std::string axis2_name; // empty when 1-D
  std::vector<double> axis2;
  std::vector<GridCell> cells; // row-major: axis2 index * axis1.size() + axis1 index

  const GridCell& at(std::size_t i1, std::size_t i2 = 0) const {
    return cells[i2 * axis1.size() + i1];
  }
};

/// Everything a single gain evaluation needs besides the signal frequency.
struct RunSetup {
  NormalizedModel model;
  double f_p_hz = 10e9;
  InitialCurrents currents{};
  long n_jj = 1998;
  bool single_junction_mode = false;
  bool use_resonator = false;
  Engine engine = Engine::Analytic;
  AmplitudeConvention convention = AmplitudeConvention::ReferenceLine;
  double reference_scale = k_reference_scale;
  double guard_hz = k_default_guard_hz;
  IntegratorSettings integrator{};

  double length_cells() const {
    return device_length_cells(n_jj, single_junction_mode);
  }
};

namespace detail {

inline unsigned worker_count() {
  if (const char* env = std::getenv("SANDO_WORKERS")) {
    const long n = std::atol(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

/// Runs fn(i) for i in [0, n) on several threads. Each index writes only
/// its own output slot, so results are deterministic.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace detail

/// Single-point gain under the chosen engine; throws the dispersion/cme
/// errors for out-of-band points.
inline GridCell evaluate_gain(const RunSetup& setup, double f_s_hz) {
  GridCell cell;
  const ModeTriple t = mode_triple(f_s_hz, setup.f_p_hz, setup.model,
                                   setup.use_resonator, setup.guard_hz);
  cell.k_p = t.k_p;
  cell.k_s = t.k_s;
  cell.k_i = t.k_i;
  const double length = setup.length_cells();
  if (setup.engine == Engine::Analytic) {
    const ModeAmplitudes amp =
        initial_amplitudes(t, setup.model, setup.currents, setup.convention,
                           setup.use_resonator, setup.reference_scale);
    const StrongPumpSolution sol =
        solve_strong_pump(t, setup.model, amp.xi_p0, setup.use_resonator);
    cell.gain_db = length > 0.0 ? gain_db(sol, length) : 0.0;
    cell.delta_k = sol.delta_k;
    cell.theta_final = 0.0;
  } else {
    if (length <= 0.0) {
      cell.gain_db = 0.0;
      cell.delta_k = t.delta_k_L;
      return cell;
    }
    IntegratorSettings is = setup.integrator;
    is.sample_stride = std::max(1L, static_cast<long>(length)); // endpoint only
    const Trajectory traj =
        integrate(t, setup.model, setup.currents, length, is, setup.convention,
                  setup.use_resonator, setup.reference_scale);
    cell.gain_db = gain_db_from_trajectory(traj).back();
    cell.delta_k = t.delta_k_L;
    cell.theta_final = traj.states.back().theta;
  }
  return cell;
}

/// Same, but converts out-of-band errors to per-cell flags so sweeps never
/// abort.
inline GridCell evaluate_gain_flagged(const RunSetup& setup, double f_s_hz) {
  try {
    return evaluate_gain(setup, f_s_hz);
  } catch (const degenerate_signal_error&) {
    return GridCell{.flag = CellFlag::DegenerateGuard};
  } catch (const above_cutoff_error&) {
    return GridCell{.flag = CellFlag::AboveCutoff};
  } catch (const stopband_error&) {
    return GridCell{.flag = CellFlag::Stopband};
  } catch (const pole_error&) {
    return GridCell{.flag = CellFlag::Stopband};
  } catch (const invalid_parameter_error&) {
    return GridCell{.flag = CellFlag::Failed};
  } catch (const std::runtime_error&) {
    return GridCell{.flag = CellFlag::Failed};
  }
}

inline constexpr double k_default_freq_step_hz = 50e6;

inline std::vector<double> linear_axis(double lo, double hi, double step) {
  std::vector<double> v;
  for (long i = 0;; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    if (x > hi + 0.5 * step) break;
    v.push_back(x);
  }
  return v;
}

inline SweepGrid gain_spectrum(double f_lo_hz, double f_hi_hz,
                               const RunSetup& setup,
                               double step_hz = k_default_freq_step_hz) {
  SweepGrid grid;
  grid.axis1_name = "f_ghz";
  grid.axis1 = linear_axis(f_lo_hz, f_hi_hz, step_hz);
  grid.cells.resize(grid.axis1.size());
  detail::parallel_for(grid.axis1.size(), [&](std::size_t i) {
    grid.cells[i] = evaluate_gain_flagged(setup, grid.axis1[i]);
  });
  return grid;
}

/// Per-unit-cell trajectory summary of a long device (Fig 2(a)-(c) style).
struct NjjScan {
  std::vector<double> n_jj;        // junction count at each sample
  std::vector<double> gain_db;     // signal gain
  std::vector<double> xi_p, xi_s, xi_i, theta;
  double first_max_n_jj = 0.0;     // first interior gain maximum, 0 if none
  double first_max_gain_db = 0.0;
  double pump_max_rel_dev = 0.0;   // max |xi_p - xi_p0| / xi_p0
};

inline NjjScan njj_scan(double f_s_hz, const RunSetup& setup, long n_max,
                        long stride_cells = 1) {
  const RunSetup& s = setup;
  const ModeTriple t =
      mode_triple(f_s_hz, s.f_p_hz, s.model, s.use_resonator, s.guard_hz);
  IntegratorSettings is = s.integrator;
  is.sample_stride = std::max(stride_cells, 1L);
  const double length = device_length_cells(n_max, s.single_junction_mode);
  const Trajectory traj = integrate(t, s.model, s.currents, length, is,
                                    s.convention, s.use_resonator,
                                    s.reference_scale);
  NjjScan scan;
  const double per_cell = s.single_junction_mode ? 1.0 : 3.0;
  const double xs0 = traj.states.front().xi_s;
  const double xp0 = traj.states.front().xi_p;
  scan.n_jj.reserve(traj.x.size());
  for (std::size_t i = 0; i < traj.x.size(); ++i) {
    const auto& st = traj.states[i];
    scan.n_jj.push_back(traj.x[i] * per_cell);
    scan.gain_db.push_back(20.0 * std::log10(st.xi_s / xs0));
    scan.xi_p.push_back(st.xi_p);
    scan.xi_s.push_back(st.xi_s);
    scan.xi_i.push_back(st.xi_i);
    scan.theta.push_back(st.theta);
    scan.pump_max_rel_dev =
        std::max(scan.pump_max_rel_dev, std::fabs(st.xi_p - xp0) / xp0);
  }
  for (std::size_t i = 1; i + 1 < scan.gain_db.size(); ++i) {
    if (scan.gain_db[i] > scan.gain_db[i - 1] &&
        scan.gain_db[i] > scan.gain_db[i + 1]) {
      scan.first_max_n_jj = scan.n_jj[i];
      scan.first_max_gain_db = scan.gain_db[i];
      break;
    }
  }
  return scan;
}

enum class Axis2Kind { X0, PumpCurrent, PumpFreq };

inline const char* to_string(Axis2Kind k) {
  switch (k) {
    case Axis2Kind::X0: return "x0";
    case Axis2Kind::PumpCurrent: return "ip_over_ic";
    default: return "f_p_ghz";
  }
}

/// 2-D sweep: signal frequency (axis1) against x0, pump current or pump
/// frequency (axis2). Geometry is rebuilt per point for x0 sweeps.
inline SweepGrid sweep_2d(double f_lo_hz, double f_hi_hz, double f_step_hz,
                          Axis2Kind kind, const std::vector<double>& axis2,
                          const RunSetup& base) {
  SweepGrid grid;
  grid.axis1_name = "f_ghz";
  grid.axis1 = linear_axis(f_lo_hz, f_hi_hz, f_step_hz);
  grid.axis2_name = to_string(kind);
  grid.axis2 = axis2;
  grid.cells.resize(grid.axis1.size() * axis2.size());
  detail::parallel_for(grid.cells.size(), [&](std::size_t idx) {
    const std::size_t i1 = idx % grid.axis1.size();
    const std::size_t i2 = idx / grid.axis1.size();
    RunSetup setup = base;
    switch (kind) {
      case Axis2Kind::X0:
        setup.model.geometry = Geometry::from_x0(axis2[i2]);
        break;
      case Axis2Kind::PumpCurrent:
        setup.currents.pump_over_Ic = axis2[i2];
        break;
      case Axis2Kind::PumpFreq:
        setup.f_p_hz = axis2[i2];
        break;
    }
    grid.cells[idx] = evaluate_gain_flagged(setup, grid.axis1[i1]);
  });
  return grid;
}

/// Maximum gain over a frequency scan, skipping flagged points.
inline double max_gain_over_band(const RunSetup& setup, double f_lo_hz,
                                 double f_hi_hz, double step_hz) {
  const SweepGrid g = gain_spectrum(f_lo_hz, f_hi_hz, setup, step_hz);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : g.cells)
    if (c.flag == CellFlag::None) best = std::max(best, c.gain_db);
  return best;
}

struct CompressionResult {
  double p1db_in_dbm = 0.0;
  double g_small_signal_db = 0.0;
  std::vector<std::pair<double, double>> search_trace; // (P_in dBm, max gain dB)
};

inline constexpr double k_compression_tol_db = 0.02;

/// Bisection on input signal power against the max-over-frequency ODE gain;
/// the small-signal reference comes from the strong-pump formula.
inline CompressionResult compression_point(const RunSetup& base,
                                           double p_lo_dbm, double p_hi_dbm,
                                           double I_c_amp,
                                           double f_lo_hz = 1e9,
                                           double f_hi_hz = 19e9,
                                           double step_hz = k_default_freq_step_hz) {
  CompressionResult result;
  RunSetup analytic = base;
  analytic.engine = Engine::Analytic;
  result.g_small_signal_db =
      max_gain_over_band(analytic, f_lo_hz, f_hi_hz, step_hz);

  RunSetup ode = base;
  ode.engine = Engine::Ode;
  const double pump_amps = base.currents.pump_over_Ic * I_c_amp;
  auto gain_at = [&](double p_dbm) {
    RunSetup s = ode;
    s.currents.signal_over_pump = dbm_to_current(p_dbm) / pump_amps;
    const double g = max_gain_over_band(s, f_lo_hz, f_hi_hz, step_hz);
    result.search_trace.emplace_back(p_dbm, g);
    return g;
  };

  const double target = result.g_small_signal_db - 1.0;
  double lo = p_lo_dbm, hi = p_hi_dbm;
  const double g_lo = gain_at(lo);
  const double g_hi = gain_at(hi);
  if (!(g_lo > target && g_hi < target))
    throw bracket_not_found_error("power range does not bracket the 1 dB drop");
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g = gain_at(mid);
    if (std::fabs(g - target) < k_compression_tol_db) {
      lo = hi = mid;
      break;
    }
    (g > target ? lo : hi) = mid;
    if (hi - lo < 1e-3) break;
  }
  result.p1db_in_dbm = 0.5 * (lo + hi);
  return result;
}

struct BandwidthResult {
  double total_ghz = 0.0;
  double largest_contiguous_ghz = 0.0;
  std::vector<std::pair<double, double>> bands; // GHz edges
};

/// Measure of the spectrum above a gain threshold, with linear interpolation
/// at the crossings. Flagged cells terminate bands.
inline BandwidthResult bandwidth_above(const SweepGrid& spectrum,
                                       double threshold_db) {
  if (spectrum.axis1.empty() || spectrum.cells.empty())
    throw invalid_parameter_error("empty spectrum");
  BandwidthResult res;
  const auto& f = spectrum.axis1;
  const auto& c = spectrum.cells;
  std::optional<double> open; // Hz
  auto close_band = [&](double edge_hz) {
    if (!open) return;
    res.bands.emplace_back(*open / 1e9, edge_hz / 1e9);
    open.reset();
  };
  for (std::size_t i = 0; i < f.size(); ++i) {
    const bool ok = c[i].flag == CellFlag::None;
    const bool above = ok && c[i].gain_db > threshold_db;
    if (above && !open) {
      double edge = f[i];
      if (i > 0 && c[i - 1].flag == CellFlag::None &&
          c[i - 1].gain_db <= threshold_db) {
        const double g0 = c[i - 1].gain_db, g1 = c[i].gain_db;
        edge = f[i - 1] + (f[i] - f[i - 1]) * (threshold_db - g0) / (g1 - g0);
      }
      open = edge;
    } else if (!above && open) {
      double edge = f[i > 0 ? i - 1 : 0];
      if (ok && i > 0 && c[i - 1].flag == CellFlag::None) {
        const double g0 = c[i - 1].gain_db, g1 = c[i].gain_db;
        edge = f[i - 1] + (f[i] - f[i - 1]) * (threshold_db - g0) / (g1 - g0);
      }
      close_band(edge);
    }
  }
  close_band(f.back());
  for (const auto& [a, b] : res.bands) {
    const double w = b - a;
    res.total_ghz += w;
    res.largest_contiguous_ghz = std::max(res.largest_contiguous_ghz, w);
  }
  return res;
}

struct TrendTerms {
  std::vector<double> x0;
  std::vector<double> delta_k_linear;    // heart^(-1/2), normalized
  std::vector<double> delta_k_nonlinear; // heart^(-5/2) * d_self, normalized
  std::vector<double> beta_product;      // heart^(-5) * d_self^2, normalized
};

/// The x0-dependent parts of the mismatch and coupling terms, each divided
/// by its own maximum over the range.
inline TrendTerms trend_terms(const std::vector<double>& x0_values) {
  TrendTerms t;
  t.x0 = x0_values;
  for (double x0 : x0_values) {
    const Geometry g = Geometry::from_x0(x0);
    const double heart = g.x0 * g.x0 + 2.0 * g.x1 * g.x1;
    const double d_self = nonlinear_factor(g, 0.0).value;
    t.delta_k_linear.push_back(std::pow(heart, -0.5));
    t.delta_k_nonlinear.push_back(std::pow(heart, -2.5) * d_self);
    t.beta_product.push_back(std::pow(heart, -5.0) * d_self * d_self);
  }
  auto normalize_by_max = [](std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    for (double& x : v) x /= m;
  };
  normalize_by_max(t.delta_k_linear);
  normalize_by_max(t.delta_k_nonlinear);
  normalize_by_max(t.beta_product);
  return t;
}

} // namespace sando
