#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "fluxsim/fields.hpp"
#include "fluxsim/interaction.hpp"
#include "fluxsim/parallel.hpp"
#include "fluxsim/quantum_lc.hpp"
#include "fluxsim/shield.hpp"

// Times each parallel kernel against its serial reference and checks the two
// agree bit for bit; the fixed-order reductions promise exactly that.

using namespace fluxsim;

namespace {

int failures = 0;

double timed(const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double omp_s, bool identical) {
  std::printf("%-28s serial %8.3f s   omp %8.3f s   speedup %5.2fx   %s\n", name, serial_s, omp_s,
              serial_s / omp_s, identical ? "bit-identical" : "MISMATCH");
  if (!identical) ++failures;
}

void bench_energy() {
  const SolenoidSpec s = SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, 1e-3, 0.2, 1e5, 0.1, true);
  const ChargeState c =
      ChargeState::make(-constants::elem_charge, Vec3{3e-3, 0, 1e-4}, Vec3{2e4, 9e4, 1e4});
  double w_serial = 0.0, w_omp = 0.0;
  const double ts = timed([&] { w_serial = interaction_energy_integral(c, s, 1e-4, nullptr, nullptr,
                                                                       ExecPolicy::Serial); });
  const double to = timed([&] { w_omp = interaction_energy_integral(c, s, 1e-4, nullptr, nullptr,
                                                                    ExecPolicy::OpenMP); });
  report("interaction-energy 3D quad", ts, to, w_serial == w_omp);
}

void bench_spectrum() {
  PulseSpectrum a, b;
  const double ts = timed([&] { a = pulse_spectrum(2e8, 6.366e-7, 8192, ExecPolicy::Serial); });
  const double to = timed([&] { b = pulse_spectrum(2e8, 6.366e-7, 8192, ExecPolicy::OpenMP); });
  bool same = a.centroid_frequency == b.centroid_frequency && a.amplitudes == b.amplitudes;
  report("pulse DFT 8192", ts, to, same);
}

void bench_field_grid() {
  const SolenoidSpec s = SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, 1e-3, 8e-3, 1e5, 0.1, false);
  auto scan = [&s](ExecPolicy policy) {
    double acc = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double x = 1.5e-3 + 1e-4 * i;
      const Vec3 b = b_solenoid(s, Vec3{x, 0.0, 2e-4 * i}, 1e-5, policy);
      acc += b.x + b.y + b.z;
    }
    return acc;
  };
  double g_serial = 0.0, g_omp = 0.0;
  const double ts = timed([&] { g_serial = scan(ExecPolicy::Serial); });
  const double to = timed([&] { g_omp = scan(ExecPolicy::OpenMP); });
  report("finite-solenoid B grid", ts, to, g_serial == g_omp);
}

void bench_matmul() {
  const LcOperators ops = build_lc_operators(2.5e-10, 1e-13, 256);
  OperatorMatrix ms, mo;
  const double ts = timed([&] { ms = matmul(ops.q, ops.phi, ExecPolicy::Serial); });
  const double to = timed([&] { mo = matmul(ops.q, ops.phi, ExecPolicy::OpenMP); });
  report("operator matmul 256", ts, to, ms.data == mo.data);
}

} // namespace

int main() {
  std::printf("threads available: %d\n", max_threads());
  bench_energy();
  bench_spectrum();
  bench_field_grid();
  bench_matmul();
  if (failures) {
    std::printf("%d kernel(s) diverged between policies\n", failures);
    return 1;
  }
  return 0;
}
