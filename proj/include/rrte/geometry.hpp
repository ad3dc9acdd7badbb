#pragma once

#include <cmath>
#include <stdexcept>

namespace rrte {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return {x / n, y / n, z / n};
  }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
};

// Rotation taking the unit vector khat to zhat (inverse of the Euler
// (phi_k, theta_k, 0) frame rotation).  Applying it to a direction yields its
// coordinates in the rotated reference frame attached to khat.
class FrameRotation {
 public:
  explicit FrameRotation(const Vec3& khat) {
    const double ct = khat.z;
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    double cp = 1.0, sp = 0.0;
    if (st > 1e-300) {
      cp = khat.x / st;
      sp = khat.y / st;
    }
    // rows of R = Ry(-theta) Rz(-phi)
    r0_ = {ct * cp, ct * sp, -st};
    r1_ = {-sp, cp, 0.0};
    r2_ = {st * cp, st * sp, ct};
  }
  Vec3 apply(const Vec3& v) const { return {r0_.dot(v), r1_.dot(v), r2_.dot(v)}; }

 private:
  Vec3 r0_, r1_, r2_;
};

inline double polar_theta(const Vec3& v) {
  return std::acos(std::clamp(v.z / v.norm(), -1.0, 1.0));
}

inline double azimuth_phi(const Vec3& v) {
  if (v.x == 0.0 && v.y == 0.0) return 0.0;
  return std::atan2(v.y, v.x);
}

}  // namespace rrte
