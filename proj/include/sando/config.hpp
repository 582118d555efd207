#pragma once

// JSON run-configuration parsing. The CLI speaks GHz, µA, fF, pF, pH and
// dBm; everything behind this file is dimensionless.

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "sando/analysis.hpp"
#include "sando/errors.hpp"
#include "sando/units.hpp"

namespace sando {

struct SweepSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;

  std::vector<double> values() const { return linear_axis(lo, hi, step); }
};

struct RunConfig {
  PhysicalDeviceParams device{};
  double x0 = 1.0 / 3.0;
  std::optional<SweepSpec> x0_sweep;
  double f_p_ghz = 10.0;
  double ip_over_ic = 0.5;
  std::optional<SweepSpec> pump_current_sweep;
  std::optional<SweepSpec> pump_freq_sweep_ghz;
  InitialCurrents seeds{};
  Engine engine = Engine::Analytic;
  AmplitudeConvention convention = AmplitudeConvention::ReferenceLine;
  double reference_scale = k_reference_scale;
  bool single_junction_mode = false;
  bool use_resonator = false;
  IntegratorSettings integrator{};
  // signal-frequency grid / single point
  double f_lo_ghz = 1.0;
  double f_hi_ghz = 19.0;
  double f_step_mhz = 50.0;
  double f_s_ghz = 6.0; // njj-scan probe frequency
  long njj_scan_max = 200000;
  long njj_scan_stride = 10;
  double p_lo_dbm = -120.0;
  double p_hi_dbm = -60.0;
  SweepSpec trends_x0{0.05, 1.0, 0.005};
  std::string output_dir = "out";
  std::string output_prefix = "run";
  nlohmann::json echo; // fully-resolved config for the manifest

  RunSetup setup() const {
    RunSetup s;
    s.model = normalize(device, x0);
    s.f_p_hz = f_p_ghz * 1e9;
    s.currents = seeds;
    s.currents.pump_over_Ic = ip_over_ic;
    s.n_jj = device.N_JJ;
    s.single_junction_mode = single_junction_mode;
    s.use_resonator = use_resonator;
    s.engine = engine;
    s.convention = convention;
    s.reference_scale = reference_scale;
    s.integrator = integrator;
    return s;
  }
};

namespace detail {

inline void require_known_keys(const nlohmann::json& obj,
                               const std::set<std::string>& allowed,
                               const std::string& scope) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw invalid_parameter_error("unknown key `" +
                                    (scope.empty() ? key : scope + "." + key) +
                                    "`");
  }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& scope) {
  const std::string path = scope.empty() ? key : scope + "." + key;
  if (!obj.contains(key))
    throw invalid_parameter_error("missing required key `" + path + "`");
  if (!obj.at(key).is_number())
    throw invalid_parameter_error("`" + path + "` must be a number");
  return obj.at(key).get<double>();
}

inline double number_or(const nlohmann::json& obj, const std::string& key,
                        double fallback, const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number())
    throw invalid_parameter_error(
        "`" + (scope.empty() ? key : scope + "." + key) + "` must be a number");
  return obj.at(key).get<double>();
}

inline SweepSpec parse_sweep(const nlohmann::json& obj,
                             const std::string& scope) {
  require_known_keys(obj, {"lo", "hi", "step"}, scope);
  SweepSpec s;
  s.lo = require_number(obj, "lo", scope);
  s.hi = require_number(obj, "hi", scope);
  s.step = require_number(obj, "step", scope);
  if (s.step <= 0.0 || s.hi < s.lo)
    throw invalid_parameter_error("`" + scope +
                                  "` must satisfy lo <= hi, step > 0");
  return s;
}

} // namespace detail

/// Table I device values.
inline PhysicalDeviceParams table1_device() {
  PhysicalDeviceParams d;
  d.I_c = 5e-6;
  d.C_J = 200e-15;
  d.C_G0 = 26.3e-15;
  d.C_G1 = 26.3e-15;
  d.N_JJ = 1998;
  d.Z0 = 50.0;
  return d;
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_parameter_error(std::string("config is not valid JSON: ") +
                                  e.what());
  }
  if (!j.is_object())
    throw invalid_parameter_error("config root must be a JSON object");

  detail::require_known_keys(
      j,
      {"defaults", "device", "geometry", "pump", "seeds", "engine",
       "convention", "reference_scale", "single_junction_mode", "integrator",
       "signal", "njj_scan", "compression", "trends", "output"},
      "");

  RunConfig cfg;
  bool have_table1 = false;
  if (j.contains("defaults")) {
    if (!j["defaults"].is_string() || j["defaults"] != "table1")
      throw invalid_parameter_error(
          "`defaults` must be the string \"table1\"");
    cfg.device = table1_device();
    have_table1 = true;
  }

  const std::string dev_scope = "device";
  nlohmann::json dev = j.value("device", nlohmann::json::object());
  detail::require_known_keys(dev,
                             {"I_c_uA", "C_J_fF", "C_G0_fF", "C_G1_fF",
                              "N_JJ", "Z0_ohm", "resonator"},
                             dev_scope);
  auto dev_field = [&](const char* key, double& slot, double unit) {
    if (dev.contains(key))
      slot = detail::require_number(dev, key, dev_scope) * unit;
    else if (!have_table1)
      throw invalid_parameter_error("missing required key `device." +
                                    std::string(key) + "`");
  };
  dev_field("I_c_uA", cfg.device.I_c, 1e-6);
  dev_field("C_J_fF", cfg.device.C_J, 1e-15);
  dev_field("C_G0_fF", cfg.device.C_G0, 1e-15);
  dev_field("C_G1_fF", cfg.device.C_G1, 1e-15);
  if (dev.contains("N_JJ")) {
    if (!dev["N_JJ"].is_number_integer())
      throw invalid_parameter_error("`device.N_JJ` must be an integer");
    cfg.device.N_JJ = dev["N_JJ"].get<long>();
  } else if (!have_table1) {
    throw invalid_parameter_error("missing required key `device.N_JJ`");
  }
  cfg.device.Z0 = detail::number_or(dev, "Z0_ohm", cfg.device.Z0, dev_scope);
  if (dev.contains("resonator")) {
    const auto& r = dev["resonator"];
    detail::require_known_keys(r, {"C_c_fF", "C_r_pF", "L_r_pH"},
                               "device.resonator");
    ResonatorParams rp;
    rp.C_c = detail::require_number(r, "C_c_fF", "device.resonator") * 1e-15;
    rp.C_r = detail::require_number(r, "C_r_pF", "device.resonator") * 1e-12;
    rp.L_r = detail::require_number(r, "L_r_pH", "device.resonator") * 1e-12;
    cfg.device.resonator = rp;
    cfg.use_resonator = true;
  }

  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    detail::require_known_keys(g, {"x0", "sweep"}, "geometry");
    if (g.contains("x0") && g.contains("sweep"))
      throw invalid_parameter_error(
          "`geometry` accepts either `x0` or `sweep`, not both");
    if (g.contains("x0")) cfg.x0 = detail::require_number(g, "x0", "geometry");
    if (g.contains("sweep"))
      cfg.x0_sweep = detail::parse_sweep(g["sweep"], "geometry.sweep");
  }

  if (j.contains("pump")) {
    const auto& p = j["pump"];
    detail::require_known_keys(
        p, {"f_p_ghz", "ip_over_ic", "current_sweep", "freq_sweep_ghz"},
        "pump");
    cfg.f_p_ghz = detail::number_or(p, "f_p_ghz", cfg.f_p_ghz, "pump");
    cfg.ip_over_ic =
        detail::number_or(p, "ip_over_ic", cfg.ip_over_ic, "pump");
    if (p.contains("current_sweep"))
      cfg.pump_current_sweep =
          detail::parse_sweep(p["current_sweep"], "pump.current_sweep");
    if (p.contains("freq_sweep_ghz"))
      cfg.pump_freq_sweep_ghz =
          detail::parse_sweep(p["freq_sweep_ghz"], "pump.freq_sweep_ghz");
  }

  if (j.contains("seeds")) {
    const auto& s = j["seeds"];
    detail::require_known_keys(
        s, {"is_over_ip", "ii_over_ip", "theta_p", "theta_s", "theta_i"},
        "seeds");
    cfg.seeds.signal_over_pump =
        detail::number_or(s, "is_over_ip", cfg.seeds.signal_over_pump, "seeds");
    cfg.seeds.idler_over_pump =
        detail::number_or(s, "ii_over_ip", cfg.seeds.idler_over_pump, "seeds");
    cfg.seeds.theta_p = detail::number_or(s, "theta_p", 0.0, "seeds");
    cfg.seeds.theta_s = detail::number_or(s, "theta_s", 0.0, "seeds");
    cfg.seeds.theta_i = detail::number_or(s, "theta_i", 0.0, "seeds");
  }

  if (j.contains("engine")) {
    const std::string e = j["engine"].is_string() ? j["engine"].get<std::string>() : "";
    if (e == "analytic") cfg.engine = Engine::Analytic;
    else if (e == "ode") cfg.engine = Engine::Ode;
    else throw invalid_parameter_error("`engine` must be \"analytic\" or \"ode\"");
  }

  if (j.contains("convention")) {
    const std::string c =
        j["convention"].is_string() ? j["convention"].get<std::string>() : "";
    if (c == "unit_cell") cfg.convention = AmplitudeConvention::UnitCell;
    else if (c == "central_junction")
      cfg.convention = AmplitudeConvention::CentralJunction;
    else if (c == "reference_line")
      cfg.convention = AmplitudeConvention::ReferenceLine;
    else
      throw invalid_parameter_error(
          "`convention` must be \"unit_cell\", \"central_junction\" or "
          "\"reference_line\"");
  }
  cfg.reference_scale =
      detail::number_or(j, "reference_scale", cfg.reference_scale, "");

  if (j.contains("single_junction_mode")) {
    if (!j["single_junction_mode"].is_boolean())
      throw invalid_parameter_error("`single_junction_mode` must be a boolean");
    cfg.single_junction_mode = j["single_junction_mode"].get<bool>();
  }

  if (j.contains("integrator")) {
    const auto& i = j["integrator"];
    detail::require_known_keys(
        i, {"rel_tol", "abs_tol", "max_step", "sample_stride"}, "integrator");
    cfg.integrator.rel_tol =
        detail::number_or(i, "rel_tol", cfg.integrator.rel_tol, "integrator");
    cfg.integrator.abs_tol =
        detail::number_or(i, "abs_tol", cfg.integrator.abs_tol, "integrator");
    cfg.integrator.max_step =
        detail::number_or(i, "max_step", cfg.integrator.max_step, "integrator");
    if (i.contains("sample_stride"))
      cfg.integrator.sample_stride = static_cast<long>(
          detail::require_number(i, "sample_stride", "integrator"));
  }

  if (j.contains("signal")) {
    const auto& s = j["signal"];
    detail::require_known_keys(
        s, {"f_lo_ghz", "f_hi_ghz", "step_mhz", "f_s_ghz"}, "signal");
    cfg.f_lo_ghz = detail::number_or(s, "f_lo_ghz", cfg.f_lo_ghz, "signal");
    cfg.f_hi_ghz = detail::number_or(s, "f_hi_ghz", cfg.f_hi_ghz, "signal");
    cfg.f_step_mhz = detail::number_or(s, "step_mhz", cfg.f_step_mhz, "signal");
    cfg.f_s_ghz = detail::number_or(s, "f_s_ghz", cfg.f_s_ghz, "signal");
  }

  if (j.contains("njj_scan")) {
    const auto& s = j["njj_scan"];
    detail::require_known_keys(s, {"n_max", "stride_cells"}, "njj_scan");
    cfg.njj_scan_max = static_cast<long>(
        detail::number_or(s, "n_max", static_cast<double>(cfg.njj_scan_max),
                          "njj_scan"));
    cfg.njj_scan_stride = static_cast<long>(detail::number_or(
        s, "stride_cells", static_cast<double>(cfg.njj_scan_stride),
        "njj_scan"));
  }

  if (j.contains("compression")) {
    const auto& c = j["compression"];
    detail::require_known_keys(c, {"p_lo_dbm", "p_hi_dbm"}, "compression");
    cfg.p_lo_dbm = detail::number_or(c, "p_lo_dbm", cfg.p_lo_dbm, "compression");
    cfg.p_hi_dbm = detail::number_or(c, "p_hi_dbm", cfg.p_hi_dbm, "compression");
  }

  if (j.contains("trends")) {
    cfg.trends_x0 = detail::parse_sweep(j["trends"], "trends");
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    detail::require_known_keys(o, {"dir", "prefix"}, "output");
    if (o.contains("dir")) cfg.output_dir = o["dir"].get<std::string>();
    if (o.contains("prefix")) cfg.output_prefix = o["prefix"].get<std::string>();
  }

  cfg.device.validate(!cfg.single_junction_mode);
  if (cfg.x0 <= 0.0 || cfg.x0 > 1.0)
    throw invalid_parameter_error("`geometry.x0` must lie in (0, 1]");
  if (cfg.ip_over_ic <= 0.0 || cfg.ip_over_ic >= 1.0)
    throw invalid_parameter_error("`pump.ip_over_ic` must lie in (0, 1)");
  if (cfg.f_p_ghz <= 0.0)
    throw invalid_parameter_error("`pump.f_p_ghz` must be positive");

  cfg.echo = j;
  return cfg;
}

} // namespace sando
