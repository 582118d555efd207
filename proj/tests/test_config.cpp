#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "sando/config.hpp"

using namespace sando;

namespace {
std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const invalid_parameter_error& e) {
    return e.what();
  }
  return "";
}
} // namespace

TEST_CASE("table1 defaults fill the device block") {
  const RunConfig cfg = parse_config(R"({"defaults": "table1"})");
  CHECK(cfg.device.I_c == Catch::Approx(5e-6));
  CHECK(cfg.device.C_J == Catch::Approx(200e-15));
  CHECK(cfg.device.C_G0 == Catch::Approx(26.3e-15));
  CHECK(cfg.device.C_G1 == Catch::Approx(26.3e-15));
  CHECK(cfg.device.N_JJ == 1998);
  CHECK(cfg.f_p_ghz == Catch::Approx(10.0));
  CHECK(cfg.ip_over_ic == Catch::Approx(0.5));
  CHECK(cfg.seeds.signal_over_pump == Catch::Approx(1e-5));
  CHECK(cfg.seeds.idler_over_pump == Catch::Approx(1e-8));
  CHECK(cfg.engine == Engine::Analytic);
  CHECK(cfg.convention == AmplitudeConvention::ReferenceLine);
}

TEST_CASE("missing I_c without defaults names the key") {
  const std::string msg = error_of(
      R"({"device": {"C_J_fF": 200, "C_G0_fF": 26.3, "C_G1_fF": 26.3, "N_JJ": 1998}})");
  CHECK(msg.find("device.I_c") != std::string::npos);
}

TEST_CASE("N_JJ divisibility with Sando geometry") {
  const std::string msg =
      error_of(R"({"defaults": "table1", "device": {"N_JJ": 1999}})");
  CHECK(msg.find("divisible by 3") != std::string::npos);
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK(error_of(R"({"defaults": "table1", "bogus": 1})").find("bogus") !=
        std::string::npos);
  CHECK(error_of(R"({"defaults": "table1", "pump": {"f_ghz": 10}})")
            .find("pump.f_ghz") != std::string::npos);
  CHECK(error_of(R"({"defaults": "table1", "device": {"L_J_pH": 65}})")
            .find("device.L_J_pH") != std::string::npos);
}

TEST_CASE("device overrides apply on top of defaults") {
  const RunConfig cfg = parse_config(
      R"({"defaults": "table1", "device": {"I_c_uA": 2.5}, "pump": {"f_p_ghz": 8}})");
  CHECK(cfg.device.I_c == Catch::Approx(2.5e-6));
  CHECK(cfg.device.C_J == Catch::Approx(200e-15)); // still Table I
  CHECK(cfg.f_p_ghz == Catch::Approx(8.0));
}

TEST_CASE("resonator block enables the loaded line") {
  const RunConfig cfg = parse_config(R"({
    "defaults": "table1",
    "device": {"C_G0_fF": 6.33,
               "resonator": {"C_c_fF": 20, "C_r_pF": 6, "L_r_pH": 40.6}},
    "geometry": {"x0": 0.75}})");
  CHECK(cfg.use_resonator);
  REQUIRE(cfg.device.resonator.has_value());
  CHECK(cfg.device.resonator->L_r == Catch::Approx(40.6e-12));
  CHECK(cfg.x0 == Catch::Approx(0.75));
  const RunSetup s = cfg.setup();
  CHECK(s.use_resonator);
  REQUIRE(s.model.resonator.has_value());
}

TEST_CASE("geometry accepts x0 or a sweep, not both") {
  CHECK(error_of(R"({"defaults": "table1",
    "geometry": {"x0": 0.5, "sweep": {"lo": 0.1, "hi": 0.9, "step": 0.1}}})")
            .find("geometry") != std::string::npos);
  const RunConfig cfg = parse_config(R"({"defaults": "table1",
    "geometry": {"sweep": {"lo": 0.1, "hi": 0.9, "step": 0.1}}})");
  REQUIRE(cfg.x0_sweep.has_value());
  CHECK(cfg.x0_sweep->values().size() == 9);
}

TEST_CASE("engine and convention strings") {
  CHECK(parse_config(R"({"defaults": "table1", "engine": "ode"})").engine ==
        Engine::Ode);
  CHECK(parse_config(
            R"({"defaults": "table1", "convention": "unit_cell"})")
            .convention == AmplitudeConvention::UnitCell);
  CHECK(!error_of(R"({"defaults": "table1", "engine": "magic"})").empty());
}

TEST_CASE("invalid JSON and bad ranges") {
  CHECK(!error_of("{not json").empty());
  CHECK(!error_of(R"({"defaults": "table1", "pump": {"ip_over_ic": 1.5}})")
             .empty());
  CHECK(!error_of(R"({"defaults": "table1", "geometry": {"x0": -0.1}})")
             .empty());
}
