#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fluxsim/constants.hpp"
#include "fluxsim/interference.hpp"
#include "support/oracles.hpp"

using namespace fluxsim;
using oracles::rel_diff;

TEST_CASE("flux quanta bookkeeping round-trips through h/2e") {
  const auto q = FluxQuanta::from_flux(3.0 * constants::phi0_sc);
  CHECK(rel_diff(q.n_superconducting_quanta, 3.0) < 1e-15);
  const auto r = FluxQuanta::from_quanta(q.n_superconducting_quanta);
  CHECK(rel_diff(r.flux, q.flux) < 1e-15);
  CHECK(FluxQuanta::from_flux(0.0).n_superconducting_quanta == 0.0);
  CHECK_THROWS_AS(FluxQuanta::from_flux(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK_THROWS_AS(FluxQuanta::from_quanta(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("phase formula: zero, unit quantum, parity ladder, linearity") {
  CHECK(ab_phase(0.0) == 0.0);
  CHECK(rel_diff(ab_phase(constants::flux_quantum_phase), constants::two_pi) < 4.0 * DBL_EPSILON);

  for (int n = 0; n <= 10; ++n) {
    // odd multiples of h/2e land on odd multiples of pi
    const double odd = ab_phase((2 * n + 1) * constants::phi0_sc);
    CHECK(rel_diff(odd, (2 * n + 1) * constants::pi) < 64.0 * DBL_EPSILON);
    // even multiples land on even multiples of pi
    if (n > 0) {
      const double even = ab_phase(2 * n * constants::phi0_sc);
      CHECK(rel_diff(even, 2 * n * constants::pi) < 64.0 * DBL_EPSILON);
    }
  }

  // linearity in the flux
  const double base = ab_phase(1.7e-15);
  CHECK(rel_diff(ab_phase(5.0 * 1.7e-15), 5.0 * base) < 1e-14);
  CHECK(ab_phase(-1.7e-15) == -base);

  CHECK_THROWS_AS(ab_phase(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("fringe pattern renders the two-beam intensity") {
  const std::vector<double> screen{-2e-4, -1e-4, -3e-5, 0.0, 4.2e-5, 1e-4, 2e-4};
  const double g = 1e5; // rad/m

  SUBCASE("central fringe: bright at zero phase, dark at pi") {
    const auto bright = fringe_pattern(0.0, g, {0.0});
    CHECK(bright.intensities[0] == 1.0);
    const auto dark = fringe_pattern(constants::pi, g, {0.0});
    CHECK(std::abs(dark.intensities[0]) < 1e-30);
  }

  SUBCASE("intensities stay in [0,1] and follow (1 + cos(gx + phase))/2") {
    const double phase = 0.7;
    const auto p = fringe_pattern(phase, g, screen);
    CHECK(p.positions == screen);
    CHECK(p.phase_offset == phase);
    for (std::size_t i = 0; i < screen.size(); ++i) {
      CHECK(p.intensities[i] >= 0.0);
      CHECK(p.intensities[i] <= 1.0);
      CHECK(std::abs(p.intensities[i] - 0.5 * (1.0 + std::cos(g * screen[i] + phase))) < 1e-9);
    }
  }

  SUBCASE("shifting the phase by whole turns reproduces the pattern bitwise") {
    const auto base = fringe_pattern(0.7, g, screen);
    for (int k : {1, -1, 3, -12, 1000}) {
      const double offset = 0.7 + constants::two_pi * k;
      const auto shifted = fringe_pattern(offset, g, screen);
      for (std::size_t i = 0; i < screen.size(); ++i)
        CHECK(shifted.intensities[i] == base.intensities[i]);
      CHECK(shifted.phase_offset == offset); // the raw offset is reported as given
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(fringe_pattern(0.0, 0.0, screen), std::invalid_argument);
    CHECK_THROWS_AS(fringe_pattern(0.0, std::numeric_limits<double>::infinity(), screen),
                    std::invalid_argument);
    CHECK_THROWS_AS(fringe_pattern(0.0, g, {}), std::domain_error);
  }
}

TEST_CASE("flux parity readout") {
  const double phi0 = constants::phi0_sc;

  SUBCASE("unshielded: parity separates odd from even") {
    CHECK(parity_distinguishable(phi0, 2.0 * phi0, false));
    CHECK_FALSE(parity_distinguishable(phi0, 3.0 * phi0, false)); // both odd
    CHECK_FALSE(parity_distinguishable(2.0 * phi0, 4.0 * phi0, false)); // both even
    CHECK(parity_distinguishable(0.0, 7.0 * phi0, false));
  }

  SUBCASE("shielding erases the distinction entirely") {
    CHECK_FALSE(parity_distinguishable(phi0, 2.0 * phi0, true));
    CHECK_FALSE(parity_distinguishable(0.0, 123.456 * phi0, true));
  }

  SUBCASE("symmetry and the whole-quantum invariant") {
    const double a = 1.3e-15, b = 0.2e-15;
    CHECK(parity_distinguishable(a, b, false) == parity_distinguishable(b, a, false));
    // fluxes differing by integer multiples of h/e are indistinguishable
    for (int k : {1, 2, 5, -3}) {
      CHECK_FALSE(parity_distinguishable(a, a + k * constants::flux_quantum_phase, false));
    }
    // a genuine fractional offset is visible
    CHECK(parity_distinguishable(a, a + 0.31 * constants::flux_quantum_phase, false));
  }
}
