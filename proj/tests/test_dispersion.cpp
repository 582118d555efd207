#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sando/dispersion.hpp"

using namespace sando;

namespace {
NormalizedModel table1_model(double x0) {
  return normalize(PhysicalDeviceParams{5e-6, 200e-15, 26.3e-15, 26.3e-15, 1998},
                   x0);
}
} // namespace

TEST_CASE("wavenumber oracle at Table I, x0 = 1/3") {
  const NormalizedModel m = table1_model(1.0 / 3.0);
  CHECK(wavenumber(0.2280, m) ==
        Catch::Approx(0.25474821203162046).epsilon(1e-13));
}

TEST_CASE("wavenumber parity and monotonicity") {
  const NormalizedModel m = table1_model(0.5);
  double prev = 0.0;
  for (double w = 0.01; w < 0.99; w += 0.01) {
    const double k = wavenumber(w, m);
    CHECK(wavenumber(-w, m) == Catch::Approx(-k).epsilon(1e-15));
    CHECK(k > prev);
    prev = k;
  }
  CHECK(wavenumber(0.0, m) == 0.0);
  CHECK_THROWS_AS(wavenumber(1.0, m), above_cutoff_error);
  CHECK_THROWS_AS(wavenumber(1.5, m), above_cutoff_error);
}

TEST_CASE("single-junction reduction of k(omega)") {
  // x0 = 1, C_G1 = 0: one junction per cell, k = w sqrt(c_G0 / (1 - w^2)).
  PhysicalDeviceParams d{5e-6, 200e-15, 26.3e-15, 0.0, 1000};
  const NormalizedModel m = normalize(d, 1.0);
  for (double w = 0.05; w < 1.0; w += 0.05) {
    const double expected = w * std::sqrt(m.c_G0) / std::sqrt(1.0 - w * w);
    CHECK(wavenumber(w, m) == Catch::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("mode triple oracle: f_p = 10 GHz, f_s = 6 GHz, x0 = 1/3") {
  const NormalizedModel m = table1_model(1.0 / 3.0);
  const ModeTriple t = mode_triple(6e9, 10e9, m);
  CHECK(t.k_p == Catch::Approx(0.25471288617916354).epsilon(1e-13));
  CHECK(t.k_s == Catch::Approx(0.15021534316654242).epsilon(1e-13));
  CHECK(t.k_i == Catch::Approx(0.3663686845602369).epsilon(1e-13));
  CHECK(t.delta_k_L == Catch::Approx(-0.007158255368452271).epsilon(1e-11));
  CHECK(t.omega_s + t.omega_i ==
        Catch::Approx(2.0 * t.omega_p).epsilon(1e-15));
}

TEST_CASE("mode triple guards") {
  const NormalizedModel m = table1_model(1.0 / 3.0);
  CHECK_THROWS_AS(mode_triple(10e9 + 0.5e6, 10e9, m), degenerate_signal_error);
  CHECK_THROWS_AS(mode_triple(20e9, 10e9, m), invalid_parameter_error);
  CHECK_THROWS_AS(mode_triple(-1e9, 10e9, m), invalid_parameter_error);
  // Custom guard width.
  CHECK_THROWS_AS(mode_triple(10.04e9, 10e9, m, false, 50e6),
                  degenerate_signal_error);
  CHECK_NOTHROW(mode_triple(10.06e9, 10e9, m, false, 50e6));
}

TEST_CASE("resonator stopband surfaces as an error") {
  PhysicalDeviceParams d{5e-6, 200e-15, 6.33e-15, 26.3e-15, 1998};
  d.resonator = ResonatorParams{20e-15, 6e-12, 40.6e-12};
  const NormalizedModel m = normalize(d, 0.75);
  const double w_stop = freq_to_normalized(10.1824e9, m);
  CHECK_THROWS_AS(wavenumber(w_stop, m, true), stopband_error);
  CHECK_NOTHROW(wavenumber(w_stop, m, false));
  // mode_triple labels the offending mode.
  CHECK_THROWS_AS(mode_triple(10.1824e9, 10e9, m, true), stopband_error);
}
