#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sando/strongpump.hpp"

using namespace sando;

namespace {
NormalizedModel table1_model(double x0) {
  return normalize(PhysicalDeviceParams{5e-6, 200e-15, 26.3e-15, 26.3e-15, 1998},
                   x0);
}
const double k_length = 1998.0 / 3.0;
} // namespace

TEST_CASE("strong-pump oracle: Table I, x0 = 1/3, f_s = 6 GHz") {
  const NormalizedModel m = table1_model(1.0 / 3.0);
  const ModeTriple t = mode_triple(6e9, 10e9, m);
  const double a_p = 6.12001124165939; // reference-line pump amplitude
  const StrongPumpSolution sol = solve_strong_pump(t, m, a_p);
  CHECK(sol.alpha_p == Catch::Approx(0.0045339086991879355).epsilon(1e-12));
  CHECK(sol.alpha_s == Catch::Approx(0.005166428189516248).epsilon(1e-12));
  CHECK(sol.alpha_i == Catch::Approx(0.013767306444960667).epsilon(1e-12));
  CHECK(sol.beta_s == Catch::Approx(0.006000103114299133).epsilon(1e-12));
  CHECK(sol.beta_i == Catch::Approx(0.0027672264543387374).epsilon(1e-12));
  CHECK(sol.delta_k == Catch::Approx(-0.01702417260455326).epsilon(1e-11));
  CHECK(sol.g_squared == Catch::Approx(-5.585196915075662e-05).epsilon(1e-9));
  CHECK_FALSE(sol.g_real);
  CHECK(gain_db(sol, k_length) ==
        Catch::Approx(1.0615726683397737).margin(1e-9));
}

TEST_CASE("gain branches agree at the g -> 0 seam") {
  // Construct solutions with tiny |g| on both branches; all three formulas
  // must agree near the seam.
  for (double dk : {1e-3, 7e-3, 2e-2}) {
    for (double x : {10.0, 300.0, 666.0}) {
      StrongPumpSolution sol{};
      sol.delta_k = dk;
      const double g2 = 1e-18;
      sol.beta_s = sol.beta_i = std::sqrt(0.25 * dk * dk + g2);
      sol.g_squared = g2;
      sol.g_abs = 1e-9;
      sol.g_real = true;
      const double limit = 10.0 * std::log10(1.0 + 0.25 * dk * dk * x * x);
      CHECK(gain_db(sol, x) == Catch::Approx(limit).margin(1e-9));
      sol.g_squared = -g2;
      sol.g_real = false;
      sol.beta_s = sol.beta_i = std::sqrt(0.25 * dk * dk - g2);
      CHECK(gain_db(sol, x) == Catch::Approx(limit).margin(1e-9));
    }
  }
}

TEST_CASE("signal_amplitude is consistent with gain_ratio") {
  const NormalizedModel m = table1_model(0.75);
  for (double fs : {4e9, 7e9, 12e9}) {
    const ModeTriple t = mode_triple(fs, 10e9, m);
    const StrongPumpSolution sol = solve_strong_pump(t, m, 6.12);
    for (double x : {50.0, 300.0, 666.0}) {
      const std::complex<double> as =
          signal_amplitude(sol, x, {1.0, 0.0}, {0.0, 0.0});
      const double ratio = std::norm(as);
      CHECK(ratio == Catch::Approx(gain_ratio(sol, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("gain never drops below unity") {
  // In the oscillatory branch |g|^2 = (dk/2)^2 - beta_s beta_i, so the
  // prefactor (dk/2|g|)^2 exceeds 1 and cos^2 + r^2 sin^2 >= 1; in the
  // hyperbolic branch cosh^2 >= 1 alone suffices.
  const NormalizedModel m = table1_model(0.75);
  for (double fs : {4e9, 7e9, 9.5e9, 13e9}) {
    const ModeTriple t = mode_triple(fs, 10e9, m);
    const StrongPumpSolution sol = solve_strong_pump(t, m, 6.12);
    for (double x = 0.0; x <= 666.0; x += 11.1) {
      CHECK(gain_ratio(sol, x) >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("zero pump gives unity gain") {
  const NormalizedModel m = table1_model(1.0 / 3.0);
  const ModeTriple t = mode_triple(6e9, 10e9, m);
  const StrongPumpSolution sol = solve_strong_pump(t, m, 0.0);
  // With a_p = 0 the coupling vanishes and |g| = |delta_k/2|, so the
  // oscillatory branch collapses to cos^2 + sin^2 = 1: no gain, no loss.
  CHECK(gain_db(sol, 666.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(solve_strong_pump(t, m, -1.0), invalid_parameter_error);
}
