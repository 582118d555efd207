// Command-line front end: reads a JSON run configuration, dispatches to the
// analysis routines and emits CSV data files plus a JSON manifest per run.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure,
//             4 bracket not found.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sando/analysis.hpp"
#include "sando/cme.hpp"
#include "sando/config.hpp"
#include "sando/dispersion.hpp"
#include "sando/output.hpp"
#include "sando/strongpump.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunContext {
  sando::RunConfig cfg;
  fs::path out_dir;
  std::vector<std::string> artifacts;
  json grid_shapes = json::object();
  json results = json::object();
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  fs::path artifact(const std::string& suffix) {
    fs::path p = out_dir / (cfg.output_prefix + "_" + suffix);
    artifacts.push_back(p.string());
    return p;
  }

  void finish(const std::string& subcommand) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const fs::path mpath = out_dir / (cfg.output_prefix + "_manifest.json");
    sando::write_manifest(mpath.string(), cfg.echo, subcommand, artifacts,
                          grid_shapes, wall, results);
    std::cout << mpath.string() << "\n";
  }
};

sando::RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw sando::invalid_parameter_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sando::parse_config(ss.str());
}

RunContext make_context(const std::string& config_path) {
  RunContext ctx{load_config(config_path)};
  if (const char* env = std::getenv("SANDO_OUTPUT_DIR"))
    ctx.out_dir = env;
  else
    ctx.out_dir = ctx.cfg.output_dir;
  fs::create_directories(ctx.out_dir);
  return ctx;
}

void run_dispersion(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const sando::NormalizedModel model = sando::normalize(cfg.device, cfg.x0);
  const auto axis = sando::linear_axis(cfg.f_lo_ghz * 1e9, cfg.f_hi_ghz * 1e9,
                                       cfg.f_step_mhz * 1e6);
  sando::CsvWriter csv(ctx.artifact("dispersion.csv").string(),
                       {"f_ghz", "omega", "k", "flag"});
  for (double f : axis) {
    const double omega = sando::freq_to_normalized(f, model);
    std::string k_str, flag;
    try {
      k_str = sando::format_number(
          sando::wavenumber(omega, model, cfg.use_resonator));
    } catch (const sando::above_cutoff_error&) {
      flag = "above_cutoff";
    } catch (const sando::stopband_error&) {
      flag = "stopband";
    } catch (const sando::pole_error&) {
      flag = "stopband";
    }
    csv.row({sando::format_number(f / 1e9), sando::format_number(omega), k_str,
             flag});
  }
  ctx.grid_shapes["dispersion"] = {axis.size()};
  ctx.finish("dispersion");
}

void run_spectrum(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const sando::SweepGrid g =
      sando::gain_spectrum(cfg.f_lo_ghz * 1e9, cfg.f_hi_ghz * 1e9, cfg.setup(),
                           cfg.f_step_mhz * 1e6);
  sando::write_spectrum_csv(ctx.artifact("spectrum.csv").string(), g);
  const sando::BandwidthResult bw = sando::bandwidth_above(g, 20.0);
  ctx.grid_shapes["spectrum"] = {g.axis1.size()};
  ctx.results["bandwidth_above_20db_ghz"] = bw.total_ghz;
  ctx.results["largest_contiguous_ghz"] = bw.largest_contiguous_ghz;
  ctx.finish("spectrum");
}

void run_njj_scan(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  sando::RunSetup setup = cfg.setup();
  const sando::NjjScan scan =
      sando::njj_scan(cfg.f_s_ghz * 1e9, setup, cfg.njj_scan_max,
                      cfg.njj_scan_stride);
  sando::CsvWriter csv(
      ctx.artifact("njj_scan.csv").string(),
      {"n_jj", "gain_db", "xi_p", "xi_s", "xi_i", "theta"});
  for (std::size_t i = 0; i < scan.n_jj.size(); ++i) {
    csv.row({sando::format_number(scan.n_jj[i]),
             sando::format_number(scan.gain_db[i]),
             sando::format_number(scan.xi_p[i]),
             sando::format_number(scan.xi_s[i]),
             sando::format_number(scan.xi_i[i]),
             sando::format_number(scan.theta[i])});
  }
  ctx.grid_shapes["njj_scan"] = {scan.n_jj.size()};
  ctx.results["first_max_n_jj"] = scan.first_max_n_jj;
  ctx.results["first_max_gain_db"] = scan.first_max_gain_db;
  ctx.results["pump_max_rel_dev"] = scan.pump_max_rel_dev;
  ctx.finish("njj-scan");
}

void run_sweep(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  sando::Axis2Kind kind;
  std::vector<double> axis2;
  if (cfg.x0_sweep) {
    kind = sando::Axis2Kind::X0;
    axis2 = cfg.x0_sweep->values();
  } else if (cfg.pump_current_sweep) {
    kind = sando::Axis2Kind::PumpCurrent;
    axis2 = cfg.pump_current_sweep->values();
  } else if (cfg.pump_freq_sweep_ghz) {
    kind = sando::Axis2Kind::PumpFreq;
    for (double f : cfg.pump_freq_sweep_ghz->values()) axis2.push_back(f * 1e9);
  } else {
    throw sando::invalid_parameter_error(
        "`sweep` requires `geometry.sweep`, `pump.current_sweep` or "
        "`pump.freq_sweep_ghz`");
  }
  const sando::SweepGrid g =
      sando::sweep_2d(cfg.f_lo_ghz * 1e9, cfg.f_hi_ghz * 1e9,
                      cfg.f_step_mhz * 1e6, kind, axis2, cfg.setup());
  sando::write_sweep_csv(ctx.artifact("sweep.csv").string(), g);
  ctx.grid_shapes["sweep"] = {g.axis2.size(), g.axis1.size()};
  ctx.finish("sweep");
}

void run_compression(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const sando::CompressionResult r = sando::compression_point(
      cfg.setup(), cfg.p_lo_dbm, cfg.p_hi_dbm, cfg.device.I_c,
      cfg.f_lo_ghz * 1e9, cfg.f_hi_ghz * 1e9, cfg.f_step_mhz * 1e6);
  sando::CsvWriter csv(ctx.artifact("compression.csv").string(),
                       {"p_in_dbm", "max_gain_db"});
  for (const auto& [p, g] : r.search_trace)
    csv.row({sando::format_number(p), sando::format_number(g)});
  ctx.grid_shapes["compression"] = {r.search_trace.size()};
  ctx.results["p1db_in_dbm"] = r.p1db_in_dbm;
  ctx.results["g_small_signal_db"] = r.g_small_signal_db;
  ctx.finish("compression");
}

void run_trends(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const sando::TrendTerms t = sando::trend_terms(cfg.trends_x0.values());
  sando::CsvWriter csv(ctx.artifact("trends.csv").string(),
                       {"x0", "delta_k_linear", "delta_k_nonlinear",
                        "beta_product"});
  for (std::size_t i = 0; i < t.x0.size(); ++i) {
    csv.row({sando::format_number(t.x0[i]),
             sando::format_number(t.delta_k_linear[i]),
             sando::format_number(t.delta_k_nonlinear[i]),
             sando::format_number(t.beta_product[i])});
  }
  ctx.grid_shapes["trends"] = {t.x0.size()};
  ctx.finish("trends");
}

int fail(int code, const std::string& kind, const std::string& message) {
  json err;
  err["error"] = kind;
  err["message"] = message;
  std::cerr << err.dump() << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traveling-wave parametric amplifier analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string pending;
  for (const char* name : {"dispersion", "spectrum", "njj-scan", "sweep",
                           "compression", "trends"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON run configuration")
        ->required();
    sub->callback([&pending, name] { pending = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    json err;
    err["error"] = "config";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    RunContext ctx = make_context(config_path);
    if (pending == "dispersion") run_dispersion(ctx);
    else if (pending == "spectrum") run_spectrum(ctx);
    else if (pending == "njj-scan") run_njj_scan(ctx);
    else if (pending == "sweep") run_sweep(ctx);
    else if (pending == "compression") run_compression(ctx);
    else if (pending == "trends") run_trends(ctx);
    return 0;
  } catch (const sando::bracket_not_found_error& e) {
    return fail(4, "bracket_not_found", e.what());
  } catch (const sando::numerical_failure_error& e) {
    return fail(3, "numerical_failure", e.what());
  } catch (const sando::invalid_parameter_error& e) {
    return fail(2, "config", e.what());
  } catch (const std::exception& e) {
    return fail(3, "numerical_failure", e.what());
  }
}
