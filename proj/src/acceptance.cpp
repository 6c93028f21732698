#include "fluxsim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "fluxsim/constants.hpp"
#include "fluxsim/fields.hpp"
#include "fluxsim/interaction.hpp"
#include "fluxsim/interference.hpp"
#include "fluxsim/quantum_lc.hpp"
#include "fluxsim/shield.hpp"
#include "fluxsim/squid.hpp"

namespace fluxsim::acceptance {

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// 1. W' volume integral vs A2.qv over randomized exterior charge states.
CheckResult check_energy_equivalence(ExecPolicy policy) {
  CheckResult r{1, "interaction-energy-equivalence", false, "", 0.0};
  std::mt19937_64 rng(0x51e9a7b2c01ull);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n_configs = 50;
  double max_rel = 0.0;
  for (int k = 0; k < n_configs; ++k) {
    const double radius = 0.5e-3 + 1.5e-3 * uni(rng);
    const double nt = 1e4 + 1.9e5 * uni(rng);
    const double current = 0.01 + 0.99 * uni(rng);
    const SolenoidSpec s =
        SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, radius, 0.2, nt, current, true);

    const double rho = (2.0 + 6.0 * uni(rng)) * radius;
    const double phi = constants::two_pi * uni(rng);
    const double z = (2.0 * uni(rng) - 1.0) * 2.0 * radius;
    const Vec3 pos{rho * std::cos(phi), rho * std::sin(phi), z};
    const Vec3 rho_hat{std::cos(phi), std::sin(phi), 0.0};
    const Vec3 phi_hat{-std::sin(phi), std::cos(phi), 0.0};

    const double c_az = (0.4 + 0.6 * uni(rng)) * (uni(rng) < 0.5 ? -1.0 : 1.0);
    const double rem = std::sqrt(1.0 - c_az * c_az);
    const double mix = constants::two_pi * uni(rng);
    const Vec3 dir = c_az * phi_hat + rem * std::cos(mix) * rho_hat +
                     rem * std::sin(mix) * Vec3{0, 0, 1};
    const double vmag = std::exp(std::log(1e4) + std::log(1e2) * uni(rng));
    const ChargeState c = ChargeState::make(-constants::elem_charge, pos, vmag * dir);

    const EnergyReport rep = verify_eq2(c, s, 1e-3, policy);
    max_rel = std::max(max_rel, rep.rel_discrepancy);
  }
  r.pass = max_rel < 1e-2;
  r.detail = fmt("max relative discrepancy %.3e over %d configs (limit 1e-2)", max_rel, n_configs);
  return r;
}

// 2. A reconstructed from B by quadrature vs the azimuthal closed form.
CheckResult check_potential_reconstruction(ExecPolicy policy) {
  CheckResult r{2, "vector-potential-reconstruction", false, "", 0.0};
  const Vec3 axis = Vec3{0.1, -0.2, 1.0}.normalized();
  const double radius = 1e-3;
  const SolenoidSpec s = SolenoidSpec::make(Vec3{2e-3, -1e-3, 0.5e-3}, axis, radius, 0.2, 1e5, 0.1, true);
  Vec3 e1, e2;
  orthonormal_frame(axis, e1, e2);

  std::mt19937_64 rng(0xa2f30b17ull);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec3> probes;
  for (int k = 0; k < 20; ++k) {
    const double rho = (1.3 + 4.7 * uni(rng)) * radius;
    const double phi = constants::two_pi * uni(rng);
    const double z = (2.0 * uni(rng) - 1.0) * 5.0 * radius;
    probes.push_back(s.center + rho * std::cos(phi) * e1 + rho * std::sin(phi) * e2 + z * axis);
  }
  const double interior_fracs[5] = {0.15, 0.35, 0.55, 0.75, 0.92};
  for (int k = 0; k < 5; ++k) {
    const double phi = 2.399963229728653 * (k + 1); // golden angle strides
    const double z = (k - 2) * 0.8 * radius;
    probes.push_back(s.center + interior_fracs[k] * radius * std::cos(phi) * e1 +
                     interior_fracs[k] * radius * std::sin(phi) * e2 + z * axis);
  }

  double max_rel = 0.0, max_gap = 0.0;
  std::int64_t cells = 0;
  for (const Vec3& p : probes) {
    const TruncationStudy ts = a_from_truncated_solenoid(s, p, 200.0 * radius, 1e-3, policy);
    const Vec3 closed = a_solenoid_closed(s, p);
    max_rel = std::max(max_rel, (ts.value - closed).norm() / closed.norm());
    max_gap = std::max(max_gap, ts.gap_rel);
    cells += ts.cells;
  }
  r.pass = max_rel < 1e-2;
  r.detail = fmt("max relative error %.3e over 25 probes (limit 1e-2), truncation gap %.1e, %lld cells",
                 max_rel, max_gap, static_cast<long long>(cells));
  return r;
}

// 3. Circulation of the closed-form A equals the bore flux for enclosing
// loops and vanishes for non-enclosing ones.
CheckResult check_circulation_flux(ExecPolicy) {
  CheckResult r{3, "circulation-flux", false, "", 0.0};
  const Vec3 axis = Vec3{0.1, -0.2, 1.0}.normalized();
  const double radius = 1e-3;
  const SolenoidSpec s = SolenoidSpec::make(Vec3{2e-3, -1e-3, 0.5e-3}, axis, radius, 0.2, 1e5, 0.1, true);
  Vec3 e1, e2;
  orthonormal_frame(axis, e1, e2);
  const FieldFn a = [&s](const Vec3& p) { return a_solenoid_closed(s, p); };
  const double flux = s.bore_flux();
  const double line_tol = 1e-9 * flux;

  auto square = [&](const Vec3& center, double half, int per_side) {
    std::vector<Vec3> verts;
    const Vec3 corners[4] = {center - half * e1 - half * e2, center + half * e1 - half * e2,
                             center + half * e1 + half * e2, center - half * e1 + half * e2};
    for (int c = 0; c < 4; ++c)
      for (int i = 0; i < per_side; ++i) {
        const double f = static_cast<double>(i) / per_side;
        verts.push_back(corners[c] + f * (corners[(c + 1) % 4] - corners[c]));
      }
    verts.push_back(verts.front());
    return LoopPath::polyline(std::move(verts));
  };

  std::vector<LoopPath> enclosing = {
      LoopPath::circle(s.center, axis, 1.5 * radius),
      LoopPath::circle(s.center + 2.0 * radius * axis, axis, 3.0 * radius),
      LoopPath::circle(s.center - 4.0 * radius * axis, axis, 10.0 * radius),
      LoopPath::circle(s.center + 0.5 * radius * e1, axis, 2.0 * radius),
      square(s.center + radius * axis, 4.0 * radius, 8),
  };
  std::vector<LoopPath> null_loops = {
      LoopPath::circle(s.center + 3.0 * radius * e1, axis, 0.5 * radius),
      LoopPath::circle(s.center + 3.0 * radius * e1, e2, radius),
      square(s.center + 3.0 * radius * (e1 + e2), 0.9 * radius, 8),
  };

  double max_rel = 0.0, max_null = 0.0;
  for (const LoopPath& loop : enclosing) {
    const double got = line_integral(a, loop, line_tol);
    max_rel = std::max(max_rel, std::abs(std::abs(got) - flux) / flux);
  }
  for (const LoopPath& loop : null_loops)
    max_null = std::max(max_null, std::abs(line_integral(a, loop, line_tol)));

  r.pass = max_rel < 1e-3 && max_null < 1e-6 * flux;
  r.detail = fmt("enclosing max rel %.3e (limit 1e-3), non-enclosing max %.3e of flux (limit 1e-6)",
                 max_rel, max_null / flux);
  return r;
}

// 4. The moving charge's potential has zero circulation around loops
// transverse to v and stays under the absolute null budget everywhere the
// charge's field is negligible.
CheckResult check_null_circulation(ExecPolicy) {
  CheckResult r{4, "charge-potential-null-circulation", false, "", 0.0};
  const Vec3 vdir = Vec3{0.3, -0.1, 0.95}.normalized();
  const ChargeState c = ChargeState::make(-constants::elem_charge, Vec3{0, 0, 0}, 1e5 * vdir);
  const FieldFn a1 = [&c](const Vec3& p) { return a_moving_charge(c, p); };
  Vec3 e1, e2;
  orthonormal_frame(vdir, e1, e2);

  const double offsets[5] = {0.0, 2e-3, -1e-3, 5e-3, 0.0};
  const double radii[5] = {1e-3, 5e-4, 2e-3, 1e-2, 1e-2};
  double max_abs = 0.0;
  for (int k = 0; k < 5; ++k) {
    const LoopPath loop = LoopPath::circle(c.position + offsets[k] * vdir, vdir, radii[k]);
    max_abs = std::max(max_abs, std::abs(line_integral(a1, loop, 1e-18)));
  }
  const double transverse_max = max_abs;

  for (int k = 0; k < 2; ++k) {
    const double a_lo = 1e-3 + 1e-3 * k, a_hi = 4e-3 + 2e-3 * k;
    const double b_lo = 0.5e-3 + 0.5e-3 * k, b_hi = 2e-3 + 1e-3 * k;
    std::vector<Vec3> verts;
    auto edge = [&](const Vec3& from, const Vec3& to) {
      for (int i = 0; i < 4; ++i) verts.push_back(from + (static_cast<double>(i) / 4) * (to - from));
    };
    const Vec3 c00 = c.position + a_lo * vdir + b_lo * e1;
    const Vec3 c10 = c.position + a_hi * vdir + b_lo * e1;
    const Vec3 c11 = c.position + a_hi * vdir + b_hi * e1;
    const Vec3 c01 = c.position + a_lo * vdir + b_hi * e1;
    edge(c00, c10);
    edge(c10, c11);
    edge(c11, c01);
    edge(c01, c00);
    verts.push_back(c00);
    max_abs = std::max(max_abs, std::abs(line_integral(a1, LoopPath::polyline(verts), 1e-18)));
  }

  r.pass = max_abs < 1e-9;
  r.detail = fmt("max |circulation| %.3e T*m^2 (limit 1e-9); transverse circles %.3e", max_abs,
                 transverse_max);
  return r;
}

// 5. Odd-quanta phases land on odd multiples of pi; parity readout truth
// table with and without the shield.
CheckResult check_phase_parity(ExecPolicy) {
  CheckResult r{5, "phase-parity", false, "", 0.0};
  const double phi0 = constants::phi0_sc;
  double max_err = 0.0;
  for (int n = 0; n <= 10; ++n) {
    const double target = (2 * n + 1) * constants::pi;
    const double got = ab_phase((2 * n + 1) * phi0);
    max_err = std::max(max_err, std::abs(got - target) / target);
  }
  const bool phases_ok = max_err <= 64.0 * std::numeric_limits<double>::epsilon();

  bool table_ok = true;
  table_ok &= parity_distinguishable(1 * phi0, 2 * phi0, false);
  table_ok &= parity_distinguishable(3 * phi0, 10 * phi0, false);
  table_ok &= !parity_distinguishable(3 * phi0, 7 * phi0, false);
  table_ok &= !parity_distinguishable(2 * phi0, 8 * phi0, false);
  table_ok &= !parity_distinguishable(5 * phi0, 5 * phi0, false);
  table_ok &= !parity_distinguishable(1 * phi0, 2 * phi0, true);
  table_ok &= !parity_distinguishable(3 * phi0, 10 * phi0, true);
  table_ok &= !parity_distinguishable(3 * phi0, 7 * phi0, true);

  r.pass = phases_ok && table_ok;
  r.detail = fmt("odd-multiple phase max rel error %.2e (limit 64 eps); truth table %s", max_err,
                 table_ok ? "exact" : "WRONG");
  return r;
}

// 6. Fast passage radiates above the pair-breaking gap, slow passage below.
CheckResult check_pulse_spectrum_gate(ExecPolicy policy) {
  CheckResult r{6, "pulse-spectrum-gate", false, "", 0.0};
  const ShieldSpec sh = ShieldSpec::make(9.2, 3e-3, 3.9e-8, 1e-6, 6.366e-7);
  const double b = sh.b_shield;
  const double f_ref = 5e13;

  const PulseSpectrum fast = pulse_spectrum(2e8, b, 512, policy);
  const double ratio = fast.centroid_frequency / f_ref;
  const bool fast_ok = ratio > 1.0 / 3.0 && ratio < 3.0 && fast.photon_energy_ev > sh.energy_gap_ev &&
                       !shields_ac(sh, 4.2, fast.photon_energy_ev);

  const PulseSpectrum slow = pulse_spectrum(1e5, b, 512, policy);
  const bool slow_ok = shields_ac(sh, 4.2, slow.photon_energy_ev);

  r.pass = fast_ok && slow_ok;
  r.detail = fmt("fast centroid %.3e Hz (%.2fx reference), photon %.3f eV vs gap %.0e eV; slow photon "
                 "%.2e eV shielded=%s",
                 fast.centroid_frequency, ratio, fast.photon_energy_ev, sh.energy_gap_ev,
                 slow.photon_energy_ev, slow_ok ? "yes" : "no");
  return r;
}

// 7. The flux-locked loop ends at n quanta under one hypothesis and 2n under
// the other, holding lock either way.
CheckResult check_fll_endpoints(ExecPolicy) {
  CheckResult r{7, "flux-locked-loop-endpoints", false, "", 0.0};
  const SquidSpec sq = SquidSpec::make(1e-5, 1e-9);
  const ShieldSpec sh = ShieldSpec::make(9.2, 3e-3, 3.9e-8, 1e-6, 6.366e-7);
  const Protocol proto = Protocol::make(10, 11.0, 4.2, 1200);

  const ExperimentTrace vp = run_experiment(sq, sh, proto, Hypothesis::VectorPotential);
  const ExperimentTrace ie = run_experiment(sq, sh, proto, Hypothesis::InteractionEnergy);

  auto tail_error = [&](const ExperimentTrace& t) {
    const std::size_t from = t.rows.size() - t.rows.size() / 10;
    double worst = 0.0;
    for (std::size_t i = from; i < t.rows.size(); ++i)
      worst = std::max(worst, std::abs(t.rows[i].phi_obs - t.lock_setpoint));
    return worst / sq.flux_quantum;
  };
  const double vp_err = std::abs(vp.final_total_flux_quanta - 10.0);
  const double ie_err = std::abs(ie.final_total_flux_quanta - 20.0);
  const double vp_lock = tail_error(vp);
  const double ie_lock = tail_error(ie);

  r.pass = vp_err <= 1e-3 && ie_err <= 1e-3 && vp_lock < 1e-3 && ie_lock < 1e-3;
  r.detail = fmt("endpoints %.6f / %.6f quanta (targets 10 / 20, tol 1e-3); tail lock error %.1e / "
                 "%.1e quanta",
                 vp.final_total_flux_quanta, ie.final_total_flux_quanta, vp_lock, ie_lock);
  return r;
}

// 8. Critical current hits its known values and is periodic in the flux
// quantum to floating precision.
CheckResult check_critical_current(ExecPolicy) {
  CheckResult r{8, "critical-current-periodicity", false, "", 0.0};
  const SquidSpec sq = SquidSpec::make(1e-5, 1e-9);
  const double phi0 = sq.flux_quantum;

  double max_special = std::abs(critical_current(sq, 0.0) - sq.i0);
  max_special = std::max(max_special, std::abs(critical_current(sq, 0.5 * phi0)));
  for (int n = 1; n <= 10; ++n)
    max_special = std::max(max_special, std::abs(critical_current(sq, n * phi0) - sq.i0));
  const bool special_ok = max_special <= 1e-14 * sq.i0;

  std::mt19937_64 rng(0xc0ffee11ull);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::uniform_int_distribution<int> shift(-3, 3);
  double max_period = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double phi = uni(rng) * phi0;
    const int m = shift(rng);
    max_period =
        std::max(max_period, std::abs(critical_current(sq, phi + m * phi0) - critical_current(sq, phi)));
  }
  const bool period_ok = max_period <= 1e-13 * sq.i0;

  r.pass = special_ok && period_ok;
  r.detail = fmt("special points max dev %.2e*I0 (limit 1e-14); periodicity max dev %.2e*I0 over 1000 "
                 "fluxes (limit 1e-13)",
                 max_special / sq.i0, max_period / sq.i0);
  return r;
}

// 9. Truncated canonical commutators: identity on the retained block, 1-N in
// the corner, and C[U,Phi] = [q,Phi] entrywise.
CheckResult check_commutators(ExecPolicy policy) {
  CheckResult r{9, "ladder-commutators", false, "", 0.0};
  double worst_block = 0.0, worst_corner = 0.0, worst_cu = 0.0;
  bool ok = true;
  for (int dim : {4, 8, 16, 32}) {
    const LcOperators ops = build_lc_operators(2.5e-10, 1e-13, dim);
    const CommutatorReport rep = verify_commutators(ops.q, ops.phi, ops.u, policy);
    const double corner_dev = std::abs(rep.corner_value - rep.corner_expected);
    const double cu_rel = rep.cu_phi_max_diff / (constants::hbar * dim);
    worst_block = std::max(worst_block, rep.retained_max_deviation);
    worst_corner = std::max(worst_corner, corner_dev);
    worst_cu = std::max(worst_cu, cu_rel);
    ok = ok && rep.retained_max_deviation <= 1e-10 && corner_dev <= 1e-10 && cu_rel <= 1e-12;
  }
  r.pass = ok;
  r.detail = fmt("retained block dev %.2e, corner dev %.2e (limits 1e-10); C[U,Phi] vs [q,Phi] dev "
                 "%.2e of hbar*N (limit 1e-12)",
                 worst_block, worst_corner, worst_cu);
  return r;
}

void print_line(std::ostream* out, const CheckResult& r) {
  if (!out) return;
  (*out) << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " (" << fmt("%.2f", r.seconds)
         << " s): " << r.detail << "\n";
  out->flush();
}

} // namespace

std::vector<CheckResult> run_all(ExecPolicy policy, std::ostream* progress) {
  using Fn = CheckResult (*)(ExecPolicy);
  struct Entry {
    Fn fn;
    double budget_s; // per-criterion wall budget; 0 = unbudgeted
  };
  const Entry entries[] = {
      {check_energy_equivalence, 60.0},
      {check_potential_reconstruction, 120.0},
      {check_circulation_flux, 0.0},
      {check_null_circulation, 0.0},
      {check_phase_parity, 0.0},
      {check_pulse_spectrum_gate, 0.0},
      {check_fll_endpoints, 5.0},
      {check_critical_current, 0.0},
      {check_commutators, 0.0},
  };

  std::vector<CheckResult> results;
  double total = 0.0;
  int id = 1;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = e.fn(policy);
    } catch (const std::exception& ex) {
      r.id = id;
      r.name = "criterion-" + std::to_string(id);
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.budget_s > 0.0 && r.seconds >= e.budget_s) {
      r.pass = false;
      r.detail += fmt("; OVER BUDGET %.0f s", e.budget_s);
    }
    total += r.seconds;
    print_line(progress, r);
    results.push_back(std::move(r));
    ++id;
  }

  CheckResult overall{10, "suite-budget", false, "", 0.0};
  overall.pass = total < 300.0 && all_passed(results);
  overall.seconds = total;
  overall.detail = fmt("criteria 1-9 %s in %.1f s (budget 300 s)",
                       all_passed(results) ? "all passed" : "NOT all passed", total);
  print_line(progress, overall);
  results.push_back(std::move(overall));
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

} // namespace fluxsim::acceptance
