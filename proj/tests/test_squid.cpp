#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fluxsim/constants.hpp"
#include "fluxsim/shield.hpp"
#include "fluxsim/squid.hpp"
#include "support/oracles.hpp"

using namespace fluxsim;
using oracles::rel_diff;

namespace {

ShieldSpec nb_shield() { return ShieldSpec::make(9.2, 3e-3, 3.9e-8, 1e-6, 6.366e-7); }

SquidSpec squid() { return SquidSpec::make(1e-5, 1e-9); }

} // namespace

TEST_CASE("squid spec validation") {
  CHECK_THROWS_AS(SquidSpec::make(0.0, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(SquidSpec::make(1e-5, -1e-9), std::invalid_argument);
  const auto s = squid();
  CHECK(s.flux_quantum == constants::phi0_sc);
  CHECK(std::isnan(s.lock_setpoint)); // capture-at-lock-on by default
  CHECK(SquidSpec::make(1e-5, 1e-9, 5.0 * constants::phi0_sc).lock_setpoint ==
        5.0 * constants::phi0_sc);
}

TEST_CASE("critical current: extrema, zeros, periodicity") {
  const auto s = squid();
  const double phi0 = s.flux_quantum;

  CHECK(critical_current(s, 0.0) == s.i0);
  CHECK(std::abs(critical_current(s, 0.5 * phi0)) <= 1e-14 * s.i0);
  for (int n = -4; n <= 4; ++n)
    CHECK(std::abs(critical_current(s, n * phi0) - s.i0) <= 1e-13 * s.i0);

  SUBCASE("one-quantum periodicity over random fluxes") {
    std::mt19937_64 rng(0x5eed5u);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
      const double phi = dist(rng) * phi0;
      const double a = critical_current(s, phi);
      const double b = critical_current(s, phi + phi0);
      CHECK(std::abs(a - b) <= 1e-13 * s.i0);
    }
  }
}

TEST_CASE("observable flux under the two hypotheses") {
  const double phi_a = 0.3e-15, phi_b = 2e-14;

  // before any shielding the hypotheses are indistinguishable
  CHECK(observable_flux(Hypothesis::VectorPotential, phi_a, phi_b, 0.0) ==
        observable_flux(Hypothesis::InteractionEnergy, phi_a, phi_b, 0.0));

  // fully shielded: the interaction-energy reading loses solenoid b
  CHECK(observable_flux(Hypothesis::InteractionEnergy, 0.0, phi_b, 1.0) == 0.0);
  CHECK(observable_flux(Hypothesis::VectorPotential, phi_a, phi_b, 1.0) == phi_a + phi_b);

  // linear interpolation in between
  CHECK(rel_diff(observable_flux(Hypothesis::InteractionEnergy, phi_a, phi_b, 0.25),
                 phi_a + 0.75 * phi_b) < 1e-15);

  CHECK_THROWS_AS(observable_flux(Hypothesis::VectorPotential, phi_a, phi_b, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(observable_flux(Hypothesis::VectorPotential, phi_a, phi_b, 1.1),
                  std::invalid_argument);
}

TEST_CASE("protocol construction rules") {
  CHECK_THROWS_AS(Protocol::make(0, 11.0, 4.2, 1200), std::invalid_argument);
  CHECK_THROWS_AS(Protocol::make(10, 4.2, 11.0, 1200), std::invalid_argument); // not cooling
  CHECK_THROWS_AS(Protocol::make(10, 11.0, 4.2, 0), std::invalid_argument);
  CHECK_THROWS_AS(Protocol::make(10, 11.0, 4.2, 1200, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(Protocol::make(10, 11.0, 4.2, 1200, 0.5, 0.1, 0), std::invalid_argument);
  const auto p = Protocol::make(10, 11.0, 4.2, 1200);
  CHECK(p.k_p == 0.5);
  CHECK(p.k_i == 0.1);
  CHECK(p.front_steps == 400);
  CHECK_FALSE(p.allow_no_crossing);
  CHECK(Protocol::make_relaxed(10, 15.0, 10.0, 600).allow_no_crossing);
}

TEST_CASE("flux-locked loop separates the hypotheses") {
  const auto sq = squid();
  const auto sh = nb_shield();
  const auto proto = Protocol::make(10, 11.0, 4.2, 1200);
  const double phi0 = sq.flux_quantum;

  // the protocol must straddle the wall's critical temperature
  CHECK_THROWS_AS(run_experiment(sq, sh, Protocol::make(10, 8.0, 4.2, 1200), Hypothesis::VectorPotential),
                  std::invalid_argument);

  const auto vp = run_experiment(sq, sh, proto, Hypothesis::VectorPotential);
  const auto ie = run_experiment(sq, sh, proto, Hypothesis::InteractionEnergy);

  SUBCASE("endpoint predictions") {
    // flux reading never moves, so the controller never acts: exactly n
    CHECK(vp.final_total_flux_quanta == 10.0);
    CHECK(vp.rows.back().i_a == 0.0);
    // the interaction-energy run backfills a full n quanta through solenoid a
    CHECK(std::abs(ie.final_total_flux_quanta - 20.0) < 1e-3);
    CHECK(std::abs(ie.rows.back().phi_a - 10.0 * phi0) < 1e-3 * phi0);
    // the two final feedback fluxes differ by exactly n quanta within tolerance
    CHECK(std::abs((ie.rows.back().phi_a - vp.rows.back().phi_a) - 10.0 * phi0) < 1e-3 * phi0);
  }

  SUBCASE("trace shape and bookkeeping") {
    CHECK(vp.rows.size() == 1200);
    CHECK(ie.rows.size() == 1200);
    CHECK(vp.lock_setpoint == 10.0 * phi0);
    CHECK(ie.lock_setpoint == vp.lock_setpoint);
    for (const auto& trace : {vp, ie}) {
      double prev_f = 0.0;
      for (const auto& row : trace.rows) {
        CHECK(row.shielded_fraction >= prev_f); // f never retreats
        prev_f = row.shielded_fraction;
        CHECK(row.phi_b == 10.0 * phi0); // solenoid b is never touched
        CHECK(row.phi_a == sq.mutual_inductance_a * row.i_a);
        CHECK(row.i_c == critical_current(sq, row.phi_obs));
      }
      CHECK(trace.rows.front().shielded_fraction == 0.0);
      CHECK(trace.rows.back().shielded_fraction == 1.0);
      CHECK(trace.rows.front().temperature < 11.0);
      CHECK(rel_diff(trace.rows.back().temperature, 4.2) < 1e-15);
    }
  }

  SUBCASE("lock quality over the tail") {
    const std::size_t tail = ie.rows.size() / 10;
    for (std::size_t i = ie.rows.size() - tail; i < ie.rows.size(); ++i)
      CHECK(std::abs(ie.rows[i].phi_obs - ie.lock_setpoint) < 1e-3 * phi0);
  }

  SUBCASE("feedback flux rises monotonically within a 5% ripple allowance") {
    double high_water = 0.0;
    for (const auto& row : ie.rows) {
      CHECK(row.phi_a > high_water - 0.05 * 10.0 * phi0);
      high_water = std::max(high_water, row.phi_a);
    }
    CHECK(high_water < 10.0 * phi0 * 1.05); // no overshoot beyond 5% of n quanta
  }

  SUBCASE("byte-identical reruns") {
    const auto again = run_experiment(sq, sh, proto, Hypothesis::InteractionEnergy);
    REQUIRE(again.rows.size() == ie.rows.size());
    for (std::size_t i = 0; i < ie.rows.size(); ++i) {
      CHECK(again.rows[i].i_a == ie.rows[i].i_a);
      CHECK(again.rows[i].phi_obs == ie.rows[i].phi_obs);
      CHECK(again.rows[i].i_c == ie.rows[i].i_c);
    }
    CHECK(again.final_total_flux_quanta == ie.final_total_flux_quanta);
  }
}

TEST_CASE("explicit setpoint overrides the lock-on capture") {
  const auto sq = SquidSpec::make(1e-5, 1e-9, 5.0 * constants::phi0_sc);
  const auto trace = run_experiment(sq, nb_shield(), Protocol::make(10, 11.0, 4.2, 1200),
                                    Hypothesis::VectorPotential);
  CHECK(trace.lock_setpoint == 5.0 * constants::phi0_sc);
  // the loop pulls the observed flux down to 5 quanta with negative phi_a
  CHECK(std::abs(trace.final_total_flux_quanta - 5.0) < 1e-3);
  CHECK(trace.rows.back().phi_a < 0.0);
}

TEST_CASE("ramp that never crosses T_c keeps the hypotheses identical") {
  const auto sq = squid();
  const auto sh = nb_shield();
  // strict construction refuses a protocol that cannot cross
  CHECK_THROWS_AS(run_experiment(sq, sh, Protocol::make(10, 15.0, 10.0, 600), Hypothesis::VectorPotential),
                  std::invalid_argument);

  const auto relaxed = Protocol::make_relaxed(10, 15.0, 10.0, 600);
  const auto vp = run_experiment(sq, sh, relaxed, Hypothesis::VectorPotential);
  const auto ie = run_experiment(sq, sh, relaxed, Hypothesis::InteractionEnergy);
  REQUIRE(vp.rows.size() == ie.rows.size());
  for (std::size_t i = 0; i < vp.rows.size(); ++i) {
    CHECK(vp.rows[i].shielded_fraction == 0.0);
    CHECK(vp.rows[i].i_a == ie.rows[i].i_a);
    CHECK(vp.rows[i].phi_obs == ie.rows[i].phi_obs);
  }
  CHECK(vp.final_total_flux_quanta == ie.final_total_flux_quanta);
  CHECK(vp.final_total_flux_quanta == 10.0);
}

TEST_CASE("divergent gains trip the instability guard with the trace attached") {
  const auto sq = squid();
  const auto sh = nb_shield();
  // k_p = 3 puts the discrete loop's dominant root near -3: unstable
  const auto hot = Protocol::make(10, 11.0, 4.2, 1200, 3.0, 0.1);
  bool caught = false;
  try {
    run_experiment(sq, sh, hot, Hypothesis::InteractionEnergy);
  } catch (const InstabilityError& e) {
    caught = true;
    CHECK_FALSE(e.trace_prefix().rows.empty());
    CHECK(e.trace_prefix().rows.size() < 1200); // tripped before the ramp finished
    CHECK(std::string(e.what()).find("grew") != std::string::npos);
  }
  CHECK(caught);
}
