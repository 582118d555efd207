#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sando/cell.hpp"
#include "sando/units.hpp"

using namespace sando;

namespace {
NormalizedModel table1_model(double x0) {
  return normalize(PhysicalDeviceParams{5e-6, 200e-15, 26.3e-15, 26.3e-15, 1998},
                   x0);
}
} // namespace

TEST_CASE("linear scaling factors at Table I") {
  const NormalizedModel m = table1_model(1.0 / 3.0);
  const ScalingFactors f = linear_factors(m);
  CHECK(f.club == Catch::Approx(0.3945).epsilon(1e-14));
  CHECK(f.heart == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(f.diamond_L == Catch::Approx(f.heart).epsilon(1e-15));
}

TEST_CASE("heart factor has its minimum at x0 = 1/3") {
  auto heart = [](double x0) {
    const Geometry g = Geometry::from_x0(x0);
    return g.x0 * g.x0 + 2.0 * g.x1 * g.x1;
  };
  const double h13 = heart(1.0 / 3.0);
  CHECK(h13 == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
  for (double x0 = 0.05; x0 <= 1.0; x0 += 0.005) {
    if (std::fabs(x0 - 1.0 / 3.0) < 1e-9) continue;
    CHECK(heart(x0) > h13);
  }
}

TEST_CASE("nonlinear factor value and symmetries") {
  const Geometry g = Geometry::from_x0(1.0 / 3.0);
  CHECK(nonlinear_factor(g, 0.0).value ==
        Catch::Approx(0.03703703703703705).epsilon(1e-13));
  const double bound_hi = std::pow(g.x0, 4) + 2.0 * std::pow(g.x1, 4);
  const double bound_lo = std::pow(g.x0, 4) - 2.0 * std::pow(g.x1, 4);
  const double period = 2.0 * std::acos(-1.0) / g.a;
  for (double m = -3.0; m <= 3.0; m += 0.17) {
    const double v = nonlinear_factor(g, m).value;
    CHECK(nonlinear_factor(g, -m).value == Catch::Approx(v).margin(1e-15));
    CHECK(nonlinear_factor(g, m + period).value ==
          Catch::Approx(v).margin(1e-12));
    CHECK(v <= bound_hi + 1e-15);
    CHECK(v >= bound_lo - 1e-15);
  }
}

TEST_CASE("resonator effective capacitance") {
  // Fig. 9-style loading.
  PhysicalDeviceParams d{5e-6, 200e-15, 6.33e-15, 26.3e-15, 1998};
  d.resonator = ResonatorParams{20e-15, 6e-12, 40.6e-12};
  const NormalizedModel m = normalize(d, 0.75);
  REQUIRE(m.resonator.has_value());

  // Low frequency: c_LC -> c_c.
  const double w_lo = freq_to_normalized(1e6, m);
  CHECK(resonator_capacitance(*m.resonator, w_lo) ==
        Catch::Approx(m.resonator->c_c).epsilon(1e-6));

  // Series-resonance zero of the numerator at f = 1/(2 pi sqrt(L_r C_r)).
  const double w_zero = freq_to_normalized(10197212969.351023, m);
  CHECK(std::fabs(resonator_capacitance(*m.resonator, w_zero)) < 1e-12);

  // Exactly on the pole the guard trips.
  const double w_pole =
      1.0 / std::sqrt(m.resonator->l_r * (m.resonator->c_c + m.resonator->c_r));
  CHECK_THROWS_AS(resonator_capacitance(*m.resonator, w_pole), pole_error);

  // Between pole and zero the loading is strongly negative; squarely inside
  // the stopband (10.1803-10.1845 GHz) it overwhelms the bare club.
  const double w_mid = freq_to_normalized(10.1824e9, m);
  CHECK(resonator_capacitance(*m.resonator, w_mid) < -0.3);
  CHECK(club_at(m, w_mid, true) < 0.0);

  // Without the resonator flag the bare club is returned.
  CHECK(club_at(m, w_mid, false) ==
        Catch::Approx(m.c_G0 + 2.0 * m.c_G1).epsilon(1e-15));
}
