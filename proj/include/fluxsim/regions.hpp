#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fluxsim/constants.hpp"
#include "fluxsim/vec3.hpp"

// Integration geometry: axis-aligned boxes and solenoid-aligned cylinders,
// both exposed as maps from the unit cube, plus closed loop paths for
// circulation integrals.

namespace fluxsim {

// Deterministic right-handed orthonormal frame completing a unit axis:
// e1 = axis x seed, e2 = axis x e1, seed being the coordinate axis least
// aligned with `axis`.
inline void orthonormal_frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
  const double ax = std::abs(axis.x), ay = std::abs(axis.y), az = std::abs(axis.z);
  const Vec3 seed = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  e1 = cross(axis, seed).normalized();
  e2 = cross(axis, e1);
}

struct BoxDomain {
  Vec3 lo;
  Vec3 hi;
  std::array<int, 3> divs{2, 2, 2};

  BoxDomain(const Vec3& lo_, const Vec3& hi_, std::array<int, 3> divs_) : lo(lo_), hi(hi_), divs(divs_) {
    if (!(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z))
      throw std::invalid_argument("BoxDomain: max corner must exceed min corner componentwise");
    for (int d : divs)
      if (d < 2) throw std::invalid_argument("BoxDomain: subdivision counts must be >= 2");
  }
};

// Unit-cube map for a BoxDomain. Affine, constant Jacobian.
class BoxRegion {
public:
  explicit BoxRegion(const BoxDomain& dom) : dom_(dom) {
    ext_ = Vec3{dom.hi.x - dom.lo.x, dom.hi.y - dom.lo.y, dom.hi.z - dom.lo.z};
    volume_ = ext_.x * ext_.y * ext_.z;
  }

  Vec3 map(const std::array<double, 3>& u) const {
    return Vec3{dom_.lo.x + u[0] * ext_.x, dom_.lo.y + u[1] * ext_.y, dom_.lo.z + u[2] * ext_.z};
  }
  double jacobian(const std::array<double, 3>&) const { return volume_; }

  bool locate(const Vec3& p, std::array<double, 3>& u) const {
    u = {(p.x - dom_.lo.x) / ext_.x, (p.y - dom_.lo.y) / ext_.y, (p.z - dom_.lo.z) / ext_.z};
    for (double c : u)
      if (c < 0.0 || c > 1.0) return false;
    return true;
  }

  // Upper bound on |map(u) - p| over a unit-coordinate sub-box; exact for an
  // affine map (the maximum sits at a corner).
  double max_image_distance(const std::array<double, 3>& clo, const std::array<double, 3>& chi,
                            const Vec3& p) const {
    double best = 0.0;
    for (unsigned k = 0; k < 8; ++k) {
      const std::array<double, 3> u{(k & 1u) ? chi[0] : clo[0], (k & 2u) ? chi[1] : clo[1],
                                    (k & 4u) ? chi[2] : clo[2]};
      best = std::max(best, (map(u) - p).norm());
    }
    return best;
  }

  const std::array<int, 3>& divs() const { return dom_.divs; }

private:
  BoxDomain dom_;
  Vec3 ext_{1, 1, 1};
  double volume_ = 0.0;
};

// Unit-cube map for the interior of a cylinder of radius R with axis through
// `center`, spanning [z0, z1] in axis coordinates. u0 -> radius, u1 -> angle,
// u2 -> axial position; dV = rho drho dphi dz makes the integrand smooth at
// the lateral surface, unlike a Cartesian box straddling it.
class CylinderRegion {
public:
  CylinderRegion(const Vec3& center, const Vec3& axis, double radius, double z0, double z1,
                 std::array<int, 3> divs)
      : center_(center), radius_(radius), z0_(z0), z1_(z1), divs_(divs) {
    if (!(radius > 0.0)) throw std::invalid_argument("CylinderRegion: radius must be positive");
    if (!(z1 > z0)) throw std::invalid_argument("CylinderRegion: z1 must exceed z0");
    for (int d : divs)
      if (d < 1) throw std::invalid_argument("CylinderRegion: subdivision counts must be >= 1");
    const double n = axis.norm();
    if (std::abs(n - 1.0) > 1e-12) throw std::invalid_argument("CylinderRegion: axis must be unit");
    axis_ = axis / n;
    orthonormal_frame(axis_, e1_, e2_);
  }

  Vec3 map(const std::array<double, 3>& u) const {
    const double rho = radius_ * u[0];
    const double phi = constants::two_pi * u[1];
    const double z = z0_ + (z1_ - z0_) * u[2];
    return center_ + (rho * std::cos(phi)) * e1_ + (rho * std::sin(phi)) * e2_ + z * axis_;
  }
  double jacobian(const std::array<double, 3>& u) const {
    return constants::two_pi * radius_ * radius_ * u[0] * (z1_ - z0_);
  }

  bool locate(const Vec3& p, std::array<double, 3>& u) const {
    const Vec3 d = p - center_;
    const double z = dot(d, axis_);
    const Vec3 radial = d - z * axis_;
    const double rho = radial.norm();
    double phi = std::atan2(dot(radial, e2_), dot(radial, e1_));
    if (phi < 0.0) phi += constants::two_pi;
    u = {rho / radius_, phi / constants::two_pi, (z - z0_) / (z1_ - z0_)};
    for (double c : u)
      if (c < 0.0 || c > 1.0) return false;
    return true;
  }

  // Exact maximum of |map(u) - p| over a unit-coordinate sub-box. In
  // cylinder coordinates |r - p|^2 = rho^2 + rho_p^2 - 2 rho rho_p cos(dphi)
  // + (z - z_p)^2, maximized at interval endpoints in rho and z and at the
  // angle minimizing cos(dphi).
  double max_image_distance(const std::array<double, 3>& clo, const std::array<double, 3>& chi,
                            const Vec3& p) const {
    const Vec3 d = p - center_;
    const double zp = dot(d, axis_);
    const Vec3 radial = d - zp * axis_;
    const double rho_p = radial.norm();
    double phi_p = std::atan2(dot(radial, e2_), dot(radial, e1_));
    if (phi_p < 0.0) phi_p += constants::two_pi;

    const double rho_lo = radius_ * clo[0], rho_hi = radius_ * chi[0];
    const double phi_lo = constants::two_pi * clo[1], phi_hi = constants::two_pi * chi[1];
    const double z_lo = z0_ + (z1_ - z0_) * clo[2], z_hi = z0_ + (z1_ - z0_) * chi[2];

    double cos_min = 1.0;
    for (double phi : {phi_lo, phi_hi}) {
      for (int wrap = -1; wrap <= 1; ++wrap)
        cos_min = std::min(cos_min, std::cos(phi - phi_p + wrap * constants::two_pi));
    }
    // Interior extremum of cos at dphi = pi, reachable if the angular
    // interval covers phi_p + pi modulo 2*pi.
    for (int wrap = -1; wrap <= 1; ++wrap) {
      const double anti = phi_p + constants::pi + wrap * constants::two_pi;
      if (anti >= phi_lo && anti <= phi_hi) cos_min = -1.0;
    }

    double best2 = 0.0;
    const double dz = std::max(std::abs(z_lo - zp), std::abs(z_hi - zp));
    for (double rho : {rho_lo, rho_hi}) {
      const double r2 = rho * rho + rho_p * rho_p - 2.0 * rho * rho_p * cos_min + dz * dz;
      best2 = std::max(best2, r2);
    }
    return std::sqrt(best2);
  }

  const std::array<int, 3>& divs() const { return divs_; }

private:
  Vec3 center_;
  Vec3 axis_{0, 0, 1};
  Vec3 e1_{1, 0, 0};
  Vec3 e2_{0, 1, 0};
  double radius_ = 1.0;
  double z0_ = 0.0;
  double z1_ = 1.0;
  std::array<int, 3> divs_{1, 1, 1};
};

// Closed loop: explicit polyline (first vertex repeated at the end) or a
// parametric circle. Circles keep their exact parametrization; sample_count
// only sets the initial panel count for circulation integrals.
class LoopPath {
public:
  static LoopPath polyline(std::vector<Vec3> vertices) {
    if (vertices.size() < 2) throw std::invalid_argument("LoopPath: polyline needs vertices");
    if ((vertices.front() - vertices.back()).norm() > 0.0)
      throw std::invalid_argument("LoopPath: polyline must close (first vertex repeated last)");
    if (vertices.size() - 1 < 8) throw std::invalid_argument("LoopPath: need >= 8 segments");
    LoopPath lp;
    lp.kind_ = Kind::Polyline;
    lp.vertices_ = std::move(vertices);
    return lp;
  }

  static LoopPath circle(const Vec3& center, const Vec3& normal, double radius, int sample_count = 16) {
    if (!(radius > 0.0)) throw std::invalid_argument("LoopPath: circle radius must be positive");
    if (sample_count < 8) throw std::invalid_argument("LoopPath: need >= 8 segments");
    LoopPath lp;
    lp.kind_ = Kind::Circle;
    lp.center_ = center;
    lp.normal_ = normal.normalized();
    lp.radius_ = radius;
    lp.samples_ = sample_count;
    orthonormal_frame(lp.normal_, lp.e1_, lp.e2_);
    return lp;
  }

  enum class Kind { Polyline, Circle };
  Kind kind() const { return kind_; }

  std::size_t segment_count() const {
    return kind_ == Kind::Polyline ? vertices_.size() - 1 : static_cast<std::size_t>(samples_);
  }

  // Position and (non-normalized) velocity of the parametrization at
  // t in [0,1) over the whole loop.
  Vec3 point(double t) const {
    if (kind_ == Kind::Circle) {
      const double phi = constants::two_pi * t;
      return center_ + (radius_ * std::cos(phi)) * e1_ + (radius_ * std::sin(phi)) * e2_;
    }
    const std::size_t nseg = vertices_.size() - 1;
    const double s = t * static_cast<double>(nseg);
    std::size_t i = std::min(static_cast<std::size_t>(s), nseg - 1);
    const double f = s - static_cast<double>(i);
    return vertices_[i] + f * (vertices_[i + 1] - vertices_[i]);
  }
  Vec3 velocity(double t) const {
    if (kind_ == Kind::Circle) {
      const double phi = constants::two_pi * t;
      return constants::two_pi * radius_ * ((-std::sin(phi)) * e1_ + std::cos(phi) * e2_);
    }
    const std::size_t nseg = vertices_.size() - 1;
    const double s = t * static_cast<double>(nseg);
    std::size_t i = std::min(static_cast<std::size_t>(s), nseg - 1);
    return static_cast<double>(nseg) * (vertices_[i + 1] - vertices_[i]);
  }

  const Vec3& center() const { return center_; }
  const Vec3& normal() const { return normal_; }
  double radius() const { return radius_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }

private:
  LoopPath() = default;
  Kind kind_ = Kind::Circle;
  std::vector<Vec3> vertices_;
  Vec3 center_{0, 0, 0};
  Vec3 normal_{0, 0, 1};
  Vec3 e1_{1, 0, 0};
  Vec3 e2_{0, 1, 0};
  double radius_ = 1.0;
  int samples_ = 16;
};

} // namespace fluxsim
