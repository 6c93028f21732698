#pragma once

#include <cstdint>
#include <functional>

#include "fluxsim/constants.hpp"
#include "fluxsim/parallel.hpp"
#include "fluxsim/quadrature.hpp"
#include "fluxsim/regions.hpp"
#include "fluxsim/vec3.hpp"

// Magnetostatics of solenoids and moving point charges: closed forms plus
// independent quadrature paths through the A(x) = (1/4pi) int B x (x-r)/|x-r|^3
// kernel.

namespace fluxsim {

struct SolenoidSpec {
  Vec3 center{0, 0, 0};
  Vec3 axis{0, 0, 1}; // unit
  double radius = 1e-3;
  double length = 0.2;
  double turns_per_meter = 1e5;
  double current = 0.1;
  bool infinite = true; // idealized infinitely long; `length` then only sets winding extent

  static SolenoidSpec make(const Vec3& center, const Vec3& axis, double radius, double length,
                           double turns_per_meter, double current, bool infinite);

  // mu0 n_t I, the uniform interior field of the infinite idealization.
  double interior_field() const { return constants::mu0 * turns_per_meter * current; }
  // Phi_2 through the bore.
  double bore_flux() const { return interior_field() * constants::pi * radius * radius; }

  double rho_of(const Vec3& p) const;  // perpendicular distance from the axis
  double z_of(const Vec3& p) const;    // axial coordinate relative to center
  Vec3 azimuthal_dir(const Vec3& p) const; // unit axis x rho_hat; zero vector on the axis
};

struct ChargeState {
  double charge = -constants::elem_charge;
  Vec3 position{0, 0, 0};
  Vec3 velocity{0, 0, 0};

  // Rejects |v| >= 0.01c unless relativistic_override is set; the field
  // model below is strictly non-relativistic.
  static ChargeState make(double charge, const Vec3& position, const Vec3& velocity,
                          bool relativistic_override = false);
};

using FieldFn = std::function<Vec3(const Vec3&)>;

// B of the solenoid: uniform-interior closed form when infinite (boundary
// rho = R counted as interior), Biot-Savart surface-current quadrature over
// the winding when finite.
Vec3 b_solenoid(const SolenoidSpec& s, const Vec3& p, double tol = 1e-6,
                ExecPolicy policy = default_policy());

// Azimuthal closed-form A of the infinite solenoid.
Vec3 a_solenoid_closed(const SolenoidSpec& s, const Vec3& p);

// The infinite solenoid's interior field truncated to axial extent
// trunc_length: uniform inside, zero outside. This is the integrable stand-in
// for the infinite idealization.
FieldFn truncated_ideal_b(const SolenoidSpec& s, double trunc_length);

// A(p) from an arbitrary bounded B by quadrature of the Biot-Savart-for-A
// kernel. When p lies inside the domain, the cell containing p is excluded
// and recursively shrunk until its bounded contribution (sup|B| times the
// circumradius of the shrunk cell) is negligible at the requested tolerance.
// b_sup, when finite, is a caller-supplied bound on |B| used for that
// exclusion estimate; otherwise it is sampled.
Vec3 a_from_b_integral(const FieldFn& b, const BoxDomain& domain, const Vec3& p, double tol,
                       quad::QuadStats* stats = nullptr, ExecPolicy policy = default_policy(),
                       double b_sup = std::numeric_limits<double>::quiet_NaN());
Vec3 a_from_b_integral(const FieldFn& b, const CylinderRegion& region, const Vec3& p, double tol,
                       quad::QuadStats* stats = nullptr, ExecPolicy policy = default_policy(),
                       double b_sup = std::numeric_limits<double>::quiet_NaN());

// Two-length truncation study for the infinite solenoid: evaluates A at p
// with axial truncation trunc_length and trunc_length/2 over the solenoid
// interior in cylinder coordinates; reports the longer-run value and the
// relative gap between the runs.
struct TruncationStudy {
  Vec3 value;
  double gap_rel = 0.0;
  std::int64_t cells = 0;
};
TruncationStudy a_from_truncated_solenoid(const SolenoidSpec& s, const Vec3& p, double trunc_length,
                                          double tol, ExecPolicy policy = default_policy());

// Non-relativistic moving point charge: B1 = (mu0/4pi) q v x s / |s|^3.
Vec3 b_moving_charge(const ChargeState& c, const Vec3& p);

// A1 = (mu0/4pi) q v / |s|; curl A1 = B1. Its divergence is
// -(mu0 q/4pi) v.s/|s|^3, which vanishes only on the plane through the
// charge transverse to v (quasistatic continuity eats the rest).
Vec3 a_moving_charge(const ChargeState& c, const Vec3& p);

// Strictly divergence-free potential with the same curl:
// (mu0 q/8pi) (v + (v.s_hat) s_hat) / |s|.
Vec3 a_moving_charge_coulomb(const ChargeState& c, const Vec3& p);

// Circulation of a vector field around a closed loop by composite
// Gauss-Legendre with Richardson refinement. tol is absolute (T*m^2), so
// null results can be certified.
double line_integral(const FieldFn& a, const LoopPath& loop, double tol);

} // namespace fluxsim
