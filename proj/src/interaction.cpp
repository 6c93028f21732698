#include "fluxsim/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

bool outside_body(const Vec3& p, const SolenoidSpec& s) {
  const double rho = s.rho_of(p);
  if (s.infinite) return rho > s.radius;
  return rho > s.radius || std::abs(s.z_of(p)) > 0.5 * s.length;
}

double trunc_length_for(const ChargeState& c, const SolenoidSpec& s) {
  if (!s.infinite) return s.length;
  return std::max(100.0 * s.radius, 20.0 * s.rho_of(c.position));
}

} // namespace

double interaction_energy_integral(const ChargeState& c, const SolenoidSpec& s, double tol,
                                   std::int64_t* cells_out, double* trunc_gap_out,
                                   ExecPolicy policy) {
  if (!(tol > 0.0)) throw std::invalid_argument("interaction_energy_integral: tol must be positive");
  if (!outside_body(c.position, s))
    throw std::domain_error("interaction_energy_integral: charge must be outside the solenoid body");
  if (cells_out) *cells_out = 0;
  if (trunc_gap_out) *trunc_gap_out = 0.0;
  if (c.velocity.norm2() == 0.0) return 0.0; // B1 identically zero

  // W' = (1/mu0) int B1.B2 over the bore; B2 = mu0 n_t I axis there, so the
  // prefactor is B2 q / (4 pi) and the raw integral carries the geometry.
  const double pref = s.interior_field() * c.charge / (4.0 * constants::pi);
  const double rho_c = s.rho_of(c.position);
  // raw-units floor: 1e-6 of the all-azimuthal-velocity energy scale
  const double raw_floor = 1e-6 * constants::two_pi * c.velocity.norm() * s.radius * s.radius /
                           std::max(rho_c, s.radius);

  auto run = [&](double length, quad::QuadStats* st) -> double {
    const int axial = std::clamp(static_cast<int>(length / (8.0 * s.radius)), 8, 32);
    const CylinderRegion region(s.center, s.axis, s.radius, -0.5 * length, 0.5 * length,
                                {2, 8, axial});
    auto f = [&](const std::array<double, 3>& u) -> double {
      const Vec3 r = region.map(u);
      const Vec3 d = r - c.position;
      const double d2 = d.norm2();
      const double inv = 1.0 / (d2 * std::sqrt(d2));
      return dot(cross(c.velocity, d), s.axis) * inv * region.jacobian(u);
    };
    quad::AdaptiveOptions opt;
    opt.tol_rel = tol;
    opt.abs_floor = raw_floor;
    opt.policy = policy;
    return quad::integrate_adaptive<3, double>(quad::unit_grid<3>(region.divs()), f, opt, st);
  };

  quad::QuadStats st_long{}, st_short{};
  if (!s.infinite) {
    const double w = pref * run(s.length, &st_long);
    if (cells_out) *cells_out = static_cast<std::int64_t>(st_long.cells_evaluated);
    return w;
  }
  const double l1 = trunc_length_for(c, s);
  const double w_short = pref * run(l1, &st_short);
  const double w_long = pref * run(2.0 * l1, &st_long);
  if (cells_out)
    *cells_out = static_cast<std::int64_t>(st_long.cells_evaluated + st_short.cells_evaluated);
  if (trunc_gap_out)
    *trunc_gap_out = std::abs(w_long - w_short) / std::max(std::abs(w_long), energy_eps_floor);
  return w_long;
}

double interaction_energy_closed(const ChargeState& c, const SolenoidSpec& s) {
  if (!outside_body(c.position, s))
    throw std::domain_error("interaction_energy_closed: charge must be outside the solenoid body");
  Vec3 a2;
  if (s.infinite) {
    a2 = a_solenoid_closed(s, c.position);
  } else {
    a2 = a_from_truncated_solenoid(s, c.position, s.length, 1e-4).value;
  }
  return dot(a2, c.velocity) * c.charge;
}

EnergyReport verify_eq2(const ChargeState& c, const SolenoidSpec& s, double tol, ExecPolicy policy) {
  EnergyReport r;
  r.tol_used = tol;
  std::int64_t cells = 0;
  r.w_integral = interaction_energy_integral(c, s, tol, &cells, nullptr, policy);
  r.w_closed = interaction_energy_closed(c, s);
  r.quadrature_cells = cells;
  r.rel_discrepancy =
      std::abs(r.w_integral - r.w_closed) / std::max(std::abs(r.w_closed), energy_eps_floor);
  return r;
}

double disc_flux(const FieldFn& b, const Vec3& disc_center, const Vec3& normal, double radius,
                 double tol, double abs_floor, quad::QuadStats* stats, ExecPolicy policy) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc_flux: radius must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("disc_flux: tol must be positive");
  const Vec3 n = normal.normalized();
  Vec3 e1, e2;
  orthonormal_frame(n, e1, e2);
  auto f = [&](const std::array<double, 2>& u) -> double {
    const double rho = radius * u[0];
    const double phi = constants::two_pi * u[1];
    const Vec3 pt = disc_center + rho * (std::cos(phi) * e1 + std::sin(phi) * e2);
    return dot(b(pt), n) * (constants::two_pi * radius * radius * u[0]);
  };
  quad::AdaptiveOptions opt;
  opt.tol_rel = tol;
  opt.abs_floor = abs_floor;
  opt.policy = policy;
  return quad::integrate_unit_cube<2, double>({4, 8}, f, opt, stats);
}

namespace {

double linkage_floor(const ChargeState& c, const SolenoidSpec& s) {
  const double d = std::max((c.position - s.center).norm(), s.radius);
  const double b_peak = constants::mu0 * std::abs(c.charge) * c.velocity.norm() /
                        (4.0 * constants::pi * d * d);
  return 1e-9 * b_peak * constants::pi * s.radius * s.radius;
}

} // namespace

double flux_linkage(const ChargeState& c, const SolenoidSpec& s, int turns_total, double tol) {
  return flux_linkage_sections(c, s, turns_total, 1, tol);
}

double flux_linkage_sections(const ChargeState& c, const SolenoidSpec& s, int turns_total,
                             int sections, double tol) {
  if (turns_total < 1) throw std::invalid_argument("flux_linkage: turns_total must be >= 1");
  if (sections < 1) throw std::invalid_argument("flux_linkage: sections must be >= 1");
  if (!outside_body(c.position, s))
    throw std::domain_error("flux_linkage: charge must be outside the solenoid body");
  auto b1 = [&c](const Vec3& p) { return b_moving_charge(c, p); };
  const double floor = linkage_floor(c, s);
  double sum = 0.0;
  for (int k = 0; k < sections; ++k) {
    const double z = (-0.5 + (k + 0.5) / sections) * s.length;
    sum += disc_flux(b1, s.center + z * s.axis, s.axis, s.radius, tol, floor);
  }
  return turns_total * sum / sections;
}

EmfTrace induced_emf(const std::vector<std::pair<double, ChargeState>>& trajectory,
                     const SolenoidSpec& s, int turns_total, double tol, ExecPolicy policy) {
  if (trajectory.size() < 3) throw std::invalid_argument("induced_emf: need at least 3 samples");
  if (turns_total < 1) throw std::invalid_argument("induced_emf: turns_total must be >= 1");
  for (std::size_t i = 1; i < trajectory.size(); ++i)
    if (!(trajectory[i].first > trajectory[i - 1].first))
      throw std::invalid_argument("induced_emf: times must be strictly increasing");
  for (const auto& [t, c] : trajectory)
    if (!outside_body(c.position, s))
      throw std::domain_error("induced_emf: trajectory enters the solenoid body");

  EmfTrace trace;
  const std::size_t n = trajectory.size();
  trace.times.resize(n);
  trace.flux_through_solenoid.resize(n);
  trace.emf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [t, c] = trajectory[i];
    trace.times[i] = t;
    auto b1 = [&c](const Vec3& p) { return b_moving_charge(c, p); };
    trace.flux_through_solenoid[i] =
        turns_total *
        disc_flux(b1, s.center, s.axis, s.radius, tol, linkage_floor(c, s), nullptr, policy);
  }
  // EMF = -d(linkage)/dt, central differences inside, one-sided at the ends
  const auto& lam = trace.flux_through_solenoid;
  const auto& tt = trace.times;
  trace.emf[0] = -(lam[1] - lam[0]) / (tt[1] - tt[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    trace.emf[i] = -(lam[i + 1] - lam[i - 1]) / (tt[i + 1] - tt[i - 1]);
  trace.emf[n - 1] = -(lam[n - 1] - lam[n - 2]) / (tt[n - 1] - tt[n - 2]);
  return trace;
}

} // namespace fluxsim
