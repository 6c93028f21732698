#include "fluxsim/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fluxsim/errors.hpp"

namespace fluxsim {

SolenoidSpec SolenoidSpec::make(const Vec3& center, const Vec3& axis, double radius, double length,
                                double turns_per_meter, double current, bool infinite) {
  if (!(radius > 0.0)) throw std::invalid_argument("SolenoidSpec: radius must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("SolenoidSpec: length must be positive");
  if (!(turns_per_meter > 0.0))
    throw std::invalid_argument("SolenoidSpec: turns_per_meter must be positive");
  if (!std::isfinite(current)) throw std::invalid_argument("SolenoidSpec: current must be finite");
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("SolenoidSpec: axis must have unit norm");
  SolenoidSpec s;
  s.center = center;
  s.axis = axis;
  s.radius = radius;
  s.length = length;
  s.turns_per_meter = turns_per_meter;
  s.current = current;
  s.infinite = infinite;
  return s;
}

double SolenoidSpec::rho_of(const Vec3& p) const {
  const Vec3 d = p - center;
  return (d - dot(d, axis) * axis).norm();
}

double SolenoidSpec::z_of(const Vec3& p) const { return dot(p - center, axis); }

Vec3 SolenoidSpec::azimuthal_dir(const Vec3& p) const {
  const Vec3 d = p - center;
  const Vec3 radial = d - dot(d, axis) * axis;
  const double rho = radial.norm();
  if (rho == 0.0) return Vec3{0, 0, 0};
  return cross(axis, radial / rho);
}

ChargeState ChargeState::make(double charge, const Vec3& position, const Vec3& velocity,
                              bool relativistic_override) {
  if (!std::isfinite(charge)) throw std::invalid_argument("ChargeState: charge must be finite");
  const double v = velocity.norm();
  if (v >= constants::v_max_nonrelativistic && !relativistic_override)
    throw std::invalid_argument(
        "ChargeState: |v| >= 0.01c is outside the non-relativistic field model; construct with "
        "the relativistic-regime override to proceed anyway");
  if (v >= constants::c_light)
    throw std::invalid_argument("ChargeState: |v| must be below c");
  ChargeState c;
  c.charge = charge;
  c.position = position;
  c.velocity = velocity;
  return c;
}

Vec3 b_solenoid(const SolenoidSpec& s, const Vec3& p, double tol, ExecPolicy policy) {
  if (s.infinite) {
    // Boundary rho = R counts as interior.
    return s.rho_of(p) <= s.radius ? s.interior_field() * s.axis : Vec3{0, 0, 0};
  }

  // Finite length: Biot-Savart over the surface current K = n_t I phi_hat
  // on rho = R, |z| <= L/2.
  const double rho = s.rho_of(p);
  const double z = s.z_of(p);
  const double axial_excess = std::max(0.0, std::abs(z) - 0.5 * s.length);
  const double surf_dist = std::hypot(rho - s.radius, axial_excess);
  if (surf_dist < 1e-9 * s.radius)
    throw SingularityError("b_solenoid: point lies on the winding surface");

  Vec3 e1, e2;
  orthonormal_frame(s.axis, e1, e2);
  const double pref = constants::mu0 * s.turns_per_meter * s.current / (4.0 * constants::pi);
  auto integrand = [&](const std::array<double, 2>& u) -> Vec3 {
    const double phi = constants::two_pi * u[0];
    const double zz = (u[1] - 0.5) * s.length;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const Vec3 r = s.center + s.radius * (cphi * e1 + sphi * e2) + zz * s.axis;
    const Vec3 phi_hat = cphi * e2 - sphi * e1;
    const Vec3 d = p - r;
    const double d2 = d.norm2();
    const double inv = 1.0 / (d2 * std::sqrt(d2));
    return cross(phi_hat, d) * inv;
  };
  // area element R dphi dz pulled out of the integrand
  const double scale = pref * constants::two_pi * s.length * s.radius;
  quad::AdaptiveOptions opt;
  opt.tol_rel = tol;
  opt.abs_floor = s.interior_field() * 1e-9 / scale;
  opt.policy = policy;
  const Vec3 raw = quad::integrate_unit_cube<2, Vec3>({8, 8}, integrand, opt, nullptr);
  return raw * scale;
}

Vec3 a_solenoid_closed(const SolenoidSpec& s, const Vec3& p) {
  const Vec3 d = p - s.center;
  const Vec3 radial = d - dot(d, s.axis) * s.axis;
  const double rho = radial.norm();
  if (rho == 0.0) return Vec3{0, 0, 0};
  const Vec3 phi_hat = cross(s.axis, radial / rho);
  const double b = s.interior_field();
  const double mag = rho <= s.radius ? 0.5 * b * rho : 0.5 * b * s.radius * s.radius / rho;
  return mag * phi_hat;
}

FieldFn truncated_ideal_b(const SolenoidSpec& s, double trunc_length) {
  if (!(trunc_length > 0.0))
    throw std::invalid_argument("truncated_ideal_b: truncation length must be positive");
  const Vec3 field = s.interior_field() * s.axis;
  const SolenoidSpec spec = s;
  const double half = 0.5 * trunc_length;
  return [spec, field, half](const Vec3& r) -> Vec3 {
    if (spec.rho_of(r) > spec.radius) return Vec3{0, 0, 0};
    if (std::abs(spec.z_of(r)) > half) return Vec3{0, 0, 0};
    return field;
  };
}

namespace {

// Sampled upper bound on |b| over one unit-coordinate cell (3x3x3 lattice,
// doubled for safety). Only consulted when the caller gave no exact bound.
template <class Region>
double sampled_sup(const FieldFn& b, const Region& region, const quad::Cell<3>& cell) {
  double sup = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const std::array<double, 3> u{cell.lo[0] + 0.5 * i * (cell.hi[0] - cell.lo[0]),
                                      cell.lo[1] + 0.5 * j * (cell.hi[1] - cell.lo[1]),
                                      cell.lo[2] + 0.5 * k * (cell.hi[2] - cell.lo[2])};
        sup = std::max(sup, b(region.map(u)).norm());
      }
  return 2.0 * sup;
}

// Shared core of a_from_b_integral. When p is interior the containing cell
// is excluded and shrunk toward p until its contribution bound
// sup|B| * max|x - r| <= a quarter of the error budget; |integral over a
// cell containing x of B x (x-r)/(4pi
// |x-r|^3)| <= sup|B| * R0 with R0 the circumradius of the cell image,
// since the ball integral of 1/r^2 is 4 pi R0.
template <class Region>
Vec3 a_kernel_integral(const FieldFn& b, const Region& region, const Vec3& p, double tol,
                       quad::QuadStats* stats, ExecPolicy policy, double b_sup, double scale_floor) {
  if (!(tol > 0.0)) throw std::invalid_argument("a_from_b_integral: tol must be positive");
  const double inv4pi = 1.0 / (4.0 * constants::pi);
  auto kernel = [&](const std::array<double, 3>& u) -> Vec3 {
    const Vec3 r = region.map(u);
    const Vec3 d = p - r;
    const double d2 = d.norm2();
    if (d2 == 0.0) return Vec3{0, 0, 0};
    const double inv = 1.0 / (d2 * std::sqrt(d2));
    return cross(b(r), d) * (region.jacobian(u) * inv4pi * inv);
  };

  std::vector<quad::Cell<3>> cells = quad::unit_grid<3>(region.divs());
  std::array<double, 3> up{};
  double excluded_bound = 0.0;

  if (region.locate(p, up)) {
    auto contains = [&up](const quad::Cell<3>& c) {
      for (int d = 0; d < 3; ++d)
        if (up[d] < c.lo[d] || up[d] > c.hi[d]) return false;
      return true;
    };
    std::size_t idx = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (contains(cells[i])) {
        idx = i;
        break;
      }
    if (idx == cells.size())
      throw std::logic_error("a_from_b_integral: interior point not covered by any base cell");
    quad::Cell<3> cur = cells[idx];
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(idx));

    // Coarse scale for the exclusion target: one fixed-order pass over the
    // surviving base cells.
    Vec3 scale_est{};
    for (const auto& c : cells) scale_est += quad::gl_cell<3, Vec3>(c, kernel);
    const double target =
        0.25 * tol * std::max({scale_est.norm(), scale_floor, std::numeric_limits<double>::min()});

    bool shrunk = false;
    double prev_bound = 0.0, bound = 0.0;
    for (int iter = 0; iter < 80; ++iter) {
      const double r0 = region.max_image_distance(cur.lo, cur.hi, p);
      const double sup = std::isfinite(b_sup) ? b_sup : sampled_sup(b, region, cur);
      prev_bound = bound;
      bound = sup * r0;
      if (bound <= target) {
        excluded_bound = bound;
        shrunk = true;
        break;
      }
      auto children = quad::split_cell<3>(cur);
      std::size_t keep = children.size();
      for (std::size_t k = 0; k < children.size(); ++k)
        if (contains(children[k])) {
          keep = k;
          break;
        }
      for (std::size_t k = 0; k < children.size(); ++k)
        if (k != keep) cells.push_back(children[k]);
      cur = children[keep];
    }
    if (!shrunk)
      throw ConvergenceError("a_from_b_integral: singular-cell bound did not reach its budget",
                             prev_bound, bound);
  }

  quad::AdaptiveOptions opt;
  opt.tol_rel = 0.75 * tol;
  opt.abs_floor = scale_floor;
  opt.policy = policy;
  quad::QuadStats st;
  const Vec3 result = quad::integrate_adaptive<3, Vec3>(std::move(cells), kernel, opt, &st);
  if (stats) {
    *stats = st;
    stats->est_error += excluded_bound;
  }
  return result;
}

} // namespace

Vec3 a_from_b_integral(const FieldFn& b, const BoxDomain& domain, const Vec3& p, double tol,
                       quad::QuadStats* stats, ExecPolicy policy, double b_sup) {
  return a_kernel_integral(b, BoxRegion(domain), p, tol, stats, policy, b_sup, 0.0);
}

Vec3 a_from_b_integral(const FieldFn& b, const CylinderRegion& region, const Vec3& p, double tol,
                       quad::QuadStats* stats, ExecPolicy policy, double b_sup) {
  return a_kernel_integral(b, region, p, tol, stats, policy, b_sup, 0.0);
}

TruncationStudy a_from_truncated_solenoid(const SolenoidSpec& s, const Vec3& p, double trunc_length,
                                          double tol, ExecPolicy policy) {
  if (!(trunc_length > 0.0))
    throw std::invalid_argument("a_from_truncated_solenoid: truncation length must be positive");
  const double scale_floor = 0.125 * s.interior_field() * s.radius;
  auto run = [&](double length, quad::QuadStats* st) -> Vec3 {
    const int axial = std::clamp(static_cast<int>(length / (8.0 * s.radius)), 8, 24);
    const CylinderRegion region(s.center, s.axis, s.radius, -0.5 * length, 0.5 * length,
                                {2, 8, axial});
    return a_kernel_integral(truncated_ideal_b(s, length), region, p, tol, st, policy,
                             s.interior_field(), scale_floor);
  };
  quad::QuadStats st_long, st_short;
  const Vec3 a_long = run(trunc_length, &st_long);
  const Vec3 a_short = run(0.5 * trunc_length, &st_short);
  TruncationStudy out;
  out.value = a_long;
  out.gap_rel = (a_long - a_short).norm() /
                std::max(a_long.norm(), std::numeric_limits<double>::min());
  out.cells = static_cast<std::int64_t>(st_long.cells_evaluated + st_short.cells_evaluated);
  return out;
}

Vec3 b_moving_charge(const ChargeState& c, const Vec3& p) {
  const Vec3 s = p - c.position;
  const double s2 = s.norm2();
  if (s2 < 1e-30) throw SingularityError("b_moving_charge: point coincides with the charge");
  const double inv = 1.0 / (s2 * std::sqrt(s2));
  return cross(c.velocity, s) * (constants::mu0 * c.charge * inv / (4.0 * constants::pi));
}

Vec3 a_moving_charge(const ChargeState& c, const Vec3& p) {
  const Vec3 s = p - c.position;
  const double dist = s.norm();
  if (dist < 1e-15) throw SingularityError("a_moving_charge: point coincides with the charge");
  return c.velocity * (constants::mu0 * c.charge / (4.0 * constants::pi * dist));
}

Vec3 a_moving_charge_coulomb(const ChargeState& c, const Vec3& p) {
  const Vec3 s = p - c.position;
  const double dist = s.norm();
  if (dist < 1e-15)
    throw SingularityError("a_moving_charge_coulomb: point coincides with the charge");
  const Vec3 s_hat = s / dist;
  return (c.velocity + dot(c.velocity, s_hat) * s_hat) *
         (constants::mu0 * c.charge / (8.0 * constants::pi * dist));
}

double line_integral(const FieldFn& a, const LoopPath& loop, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("line_integral: tol must be positive");
  const std::size_t nseg = loop.kind() == LoopPath::Kind::Polyline ? loop.segment_count() : 1;

  auto composite = [&](std::size_t panels_per_seg) -> double {
    double sum = 0.0;
    const std::size_t total = nseg * panels_per_seg;
    const double h = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < total; ++i) {
      const double t0 = static_cast<double>(i) * h;
      const double mid = t0 + 0.5 * h;
      for (int j = 0; j < 4; ++j) {
        const double t = mid + 0.5 * h * quad::gl4_nodes[j];
        sum += quad::gl4_weights[j] * dot(a(loop.point(t)), loop.velocity(t));
      }
    }
    return sum * 0.5 * h;
  };

  std::size_t per = loop.kind() == LoopPath::Kind::Circle
                        ? std::max<std::size_t>(8, loop.segment_count())
                        : 2;
  double coarse = composite(per);
  for (; per <= (1u << 16); per *= 2) {
    const double fine = composite(2 * per);
    const double est = std::abs(fine - coarse) / 255.0;
    if (est <= tol) return fine + (fine - coarse) / 255.0;
    coarse = fine;
  }
  throw ConvergenceError("line_integral: Richardson refinement did not reach tolerance", coarse,
                         composite(2 * per));
}

} // namespace fluxsim
