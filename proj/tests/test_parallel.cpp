#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstddef>
#include <vector>

#include "fluxsim/fields.hpp"
#include "fluxsim/interaction.hpp"
#include "fluxsim/parallel.hpp"
#include "fluxsim/quantum_lc.hpp"
#include "fluxsim/shield.hpp"
#include "support/oracles.hpp"

using namespace fluxsim;

// Each kernel writes per-index slots and reduces in fixed order, so the two
// policies must agree to the last bit, not merely to tolerance.

TEST_CASE("parallel_for covers every slot exactly once under both policies") {
  for (ExecPolicy policy : {ExecPolicy::Serial, ExecPolicy::OpenMP}) {
    std::vector<std::atomic<int>> hits(1000);
    for (auto& h : hits) h.store(0);
    parallel_for(hits.size(), policy, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  // n = 0 never invokes the body
  parallel_for(0, ExecPolicy::OpenMP, [&](std::size_t) { CHECK(false); });
}

TEST_CASE("interaction energy integral is policy independent") {
  const auto s = SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, 1e-3, 0.2, 1e5, 0.1, true);
  const auto c = ChargeState::make(-constants::elem_charge, Vec3{2.5e-3, 1e-3, 0.4e-3},
                                   Vec3{3e4, 8e4, 2e4});
  std::int64_t cells_serial = 0, cells_omp = 0;
  const double w_serial =
      interaction_energy_integral(c, s, 1e-3, &cells_serial, nullptr, ExecPolicy::Serial);
  const double w_omp =
      interaction_energy_integral(c, s, 1e-3, &cells_omp, nullptr, ExecPolicy::OpenMP);
  CHECK(w_serial == w_omp);
  CHECK(cells_serial == cells_omp);
}

TEST_CASE("pulse spectrum is policy independent and repeatable") {
  const auto serial = pulse_spectrum(1e5, 6.366e-7, 512, ExecPolicy::Serial);
  const auto omp = pulse_spectrum(1e5, 6.366e-7, 512, ExecPolicy::OpenMP);
  REQUIRE(serial.amplitudes.size() == omp.amplitudes.size());
  for (std::size_t i = 0; i < serial.amplitudes.size(); ++i) {
    CHECK(serial.frequencies[i] == omp.frequencies[i]);
    CHECK(serial.amplitudes[i] == omp.amplitudes[i]);
  }
  CHECK(serial.centroid_frequency == omp.centroid_frequency);
  CHECK(serial.photon_energy_ev == omp.photon_energy_ev);

  const auto again = pulse_spectrum(1e5, 6.366e-7, 512, ExecPolicy::OpenMP);
  CHECK(again.centroid_frequency == omp.centroid_frequency);
}

TEST_CASE("finite-solenoid field is policy independent") {
  const auto s = SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, 1e-3, 0.2, 1e5, 0.1, false);
  for (const Vec3& p : {Vec3{0, 0, 0}, Vec3{0.4e-3, 0.2e-3, 0.03}, Vec3{2.5e-3, -1e-3, 0.08}}) {
    const Vec3 bs = b_solenoid(s, p, 1e-6, ExecPolicy::Serial);
    const Vec3 bo = b_solenoid(s, p, 1e-6, ExecPolicy::OpenMP);
    CHECK(bs.x == bo.x);
    CHECK(bs.y == bo.y);
    CHECK(bs.z == bo.z);
  }
}

TEST_CASE("vector potential recovery is policy independent") {
  const auto s = SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, 1e-3, 0.2, 1e5, 0.1, true);
  const auto ts = a_from_truncated_solenoid(s, Vec3{3e-3, 0, 0}, 200.0 * s.radius, 1e-3,
                                            ExecPolicy::Serial);
  const auto to = a_from_truncated_solenoid(s, Vec3{3e-3, 0, 0}, 200.0 * s.radius, 1e-3,
                                            ExecPolicy::OpenMP);
  CHECK(ts.value.x == to.value.x);
  CHECK(ts.value.y == to.value.y);
  CHECK(ts.value.z == to.value.z);
  CHECK(ts.gap_rel == to.gap_rel);
  CHECK(ts.cells == to.cells);
}

TEST_CASE("operator products are policy independent") {
  const auto ops = build_lc_operators(2.5e-10, 1e-13, 64);
  const auto ms = matmul(ops.q, ops.phi, ExecPolicy::Serial);
  const auto mo = matmul(ops.q, ops.phi, ExecPolicy::OpenMP);
  REQUIRE(ms.dim == mo.dim);
  for (int i = 0; i < ms.dim; ++i)
    for (int j = 0; j < ms.dim; ++j) CHECK(ms.at(i, j) == mo.at(i, j));
}
