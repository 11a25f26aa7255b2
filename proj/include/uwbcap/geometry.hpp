#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include "uwbcap/rng.hpp"

namespace uwbcap {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// A position on the sphere, stored as a unit direction. The sphere radius is
/// carried by `Sphere`, never baked into coordinates.
class SpherePoint {
 public:
  SpherePoint() = default;

  /// Normalizes `v`; throws DomainError for a (near) zero vector.
  static SpherePoint from_vector(Vec3 v);

  /// Wraps an already-normalized vector without renormalizing (used by
  /// deserialization so coordinates round-trip bit-exactly).
  static SpherePoint from_unit(Vec3 v) { return SpherePoint(v); }

  const Vec3& direction() const { return dir_; }
  double x() const { return dir_.x; }
  double y() const { return dir_.y; }
  double z() const { return dir_.z; }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  explicit SpherePoint(Vec3 v) : dir_(v) {}
  Vec3 dir_{0.0, 0.0, 1.0};
};

/// Angle between two directions in radians, atan2 form (accurate near 0 and pi).
inline double central_angle(const SpherePoint& p, const SpherePoint& q) {
  const Vec3& a = p.direction();
  const Vec3& b = q.direction();
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

struct GeodesicSegment {
  SpherePoint from;
  SpherePoint to;
};

/// Sphere of radius R; all lengths are geodesic arc lengths in units of R.
class Sphere {
 public:
  /// Total surface area 1: R = 1/(2 sqrt(pi)).
  static Sphere unit_area() { return Sphere(0.5 / std::sqrt(std::numbers::pi)); }

  /// Total surface area n * a0 (constant node density 1/a0).
  static Sphere scaled_area(std::size_t n, double a0);

  static Sphere with_radius(double radius);

  double radius() const { return radius_; }
  double area() const { return 4.0 * std::numbers::pi * radius_ * radius_; }
  /// Half circumference, the largest possible distance.
  double max_distance() const { return std::numbers::pi * radius_; }

  double distance(const SpherePoint& p, const SpherePoint& q) const {
    return radius_ * central_angle(p, q);
  }
  double length(const GeodesicSegment& seg) const { return distance(seg.from, seg.to); }

  /// Area of the cap of geodesic radius rho (rho clamped to [0, pi R]).
  double cap_area(double rho) const;

  /// Geodesic radius of the cap with area a, 0 < a < area().
  double cap_radius_for_area(double a) const;

  /// Arc length <-> angle.
  double to_angle(double arc) const { return arc / radius_; }
  double to_arc(double angle) const { return angle * radius_; }

  /// Point at fraction t of the way along the geodesic. Throws
  /// DegenerateGeodesicError for antipodal endpoints.
  SpherePoint interpolate(const GeodesicSegment& seg, double t) const;

  friend bool operator==(const Sphere&, const Sphere&) = default;

 private:
  explicit Sphere(double radius) : radius_(radius) {}
  double radius_;
};

/// Uniform point on the sphere (z uniform on [-1,1], longitude uniform).
SpherePoint sample_uniform(Rng& rng);

/// Any unit vector orthogonal to `p`.
Vec3 orthogonal_direction(const SpherePoint& p);

}  // namespace uwbcap
