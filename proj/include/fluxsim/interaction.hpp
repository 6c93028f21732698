#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fluxsim/fields.hpp"

// The interaction energy W' = (1/mu0) int B1.B2 d^3r computed two
// independent ways, plus the induced-EMF back-action of a charge passing a
// solenoid.

namespace fluxsim {

struct EnergyReport {
  double w_integral = 0.0;      // J, volume-quadrature side
  double w_closed = 0.0;        // J, A2(x).qv side
  double rel_discrepancy = 0.0; // |wi - wc| / max(|wc|, 1e-40)
  std::int64_t quadrature_cells = 0;
  double tol_used = 0.0;
};

inline constexpr double energy_eps_floor = 1e-40; // J, rel_discrepancy denominator floor

struct EmfTrace {
  std::vector<double> times;                // s, strictly increasing
  std::vector<double> flux_through_solenoid; // Wb (total linkage)
  std::vector<double> emf;                  // V
};

// (1/mu0) int B1.B2 over the solenoid interior (B2 vanishes elsewhere).
// Infinite solenoids are truncated to max(100R, 20 rho_charge) and doubled
// for a convergence study; cells_out/gap_out expose the study when wanted.
double interaction_energy_integral(const ChargeState& c, const SolenoidSpec& s, double tol,
                                   std::int64_t* cells_out = nullptr, double* trunc_gap_out = nullptr,
                                   ExecPolicy policy = default_policy());

// A2(x_e) . q v with the closed-form potential (integral potential for
// finite solenoids, same truncated-uniform field model).
double interaction_energy_closed(const ChargeState& c, const SolenoidSpec& s);

// Both sides of the equivalence, packaged.
EnergyReport verify_eq2(const ChargeState& c, const SolenoidSpec& s, double tol,
                        ExecPolicy policy = default_policy());

// Flux of an arbitrary field through a disc, 2D adaptive quadrature.
double disc_flux(const FieldFn& b, const Vec3& disc_center, const Vec3& normal, double radius,
                 double tol, double abs_floor = 0.0, quad::QuadStats* stats = nullptr,
                 ExecPolicy policy = default_policy());

// Linkage model: turns_total times the flux of the charge's field through
// the mid-plane cross-section. The n-section average quantifies the
// long-solenoid approximation error.
double flux_linkage(const ChargeState& c, const SolenoidSpec& s, int turns_total, double tol = 1e-6);
double flux_linkage_sections(const ChargeState& c, const SolenoidSpec& s, int turns_total,
                             int sections, double tol = 1e-6);

// EMF = -d(linkage)/dt along a sampled trajectory, central differences
// inside, one-sided at the ends. Trajectory must stay outside the solenoid
// body.
EmfTrace induced_emf(const std::vector<std::pair<double, ChargeState>>& trajectory,
                     const SolenoidSpec& s, int turns_total, double tol = 1e-6,
                     ExecPolicy policy = default_policy());

} // namespace fluxsim
