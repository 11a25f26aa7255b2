#include "uwbcap/geometry.hpp"

#include <algorithm>
#include <string>

#include "uwbcap/errors.hpp"

namespace uwbcap {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpherePoint SpherePoint::from_vector(Vec3 v) {
  const double len = norm(v);
  if (!(len > 1e-300) || !std::isfinite(len)) {
    throw DomainError("SpherePoint: direction vector must be finite and nonzero");
  }
  return SpherePoint((1.0 / len) * v);
}

Sphere Sphere::scaled_area(std::size_t n, double a0) {
  if (n == 0 || !(a0 > 0.0)) throw DomainError("Sphere::scaled_area: need n >= 1 and a0 > 0");
  return Sphere(std::sqrt(static_cast<double>(n) * a0) / (2.0 * std::sqrt(kPi)));
}

Sphere Sphere::with_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("Sphere: radius must be positive");
  return Sphere(radius);
}

double Sphere::cap_area(double rho) const {
  if (rho < 0.0) throw DomainError("cap_area: negative radius");
  const double theta = std::min(rho / radius_, kPi);
  // 2 pi R^2 (1 - cos theta) written with the half-angle identity.
  const double s = std::sin(0.5 * theta);
  return 4.0 * kPi * radius_ * radius_ * s * s;
}

double Sphere::cap_radius_for_area(double a) const {
  const double total = area();
  if (!(a > 0.0) || !(a < total)) {
    throw DomainError("cap_radius_for_area: area must lie in (0, " + std::to_string(total) + ")");
  }
  const double s = std::sqrt(a / total);
  return radius_ * 2.0 * std::asin(s);
}

Vec3 orthogonal_direction(const SpherePoint& p) {
  const Vec3& d = p.direction();
  // Cross with the coordinate axis least aligned with d.
  Vec3 axis{1.0, 0.0, 0.0};
  const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
  if (ay <= ax && ay <= az) {
    axis = {0.0, 1.0, 0.0};
  } else if (az <= ax && az <= ay) {
    axis = {0.0, 0.0, 1.0};
  }
  const Vec3 c = cross(d, axis);
  return (1.0 / norm(c)) * c;
}

SpherePoint Sphere::interpolate(const GeodesicSegment& seg, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("interpolate: t must lie in [0, 1]");
  const Vec3& a = seg.from.direction();
  const Vec3& b = seg.to.direction();
  const Vec3 c = cross(a, b);
  const double s = norm(c);
  const double cosang = dot(a, b);
  if (s < 1e-12 && cosang < 0.0) {
    throw DegenerateGeodesicError("interpolate: antipodal endpoints");
  }
  if (t == 0.0 || s == 0.0) return seg.from;
  if (t == 1.0) return seg.to;
  const double angle = std::atan2(s, cosang);
  // Unit tangent at `a` pointing toward `b`: (a x b) x a / |a x b|.
  const Vec3 w = (1.0 / s) * cross(c, a);
  const double phi = t * angle;
  return SpherePoint::from_vector(std::cos(phi) * a + std::sin(phi) * w);
}

SpherePoint sample_uniform(Rng& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double lon = 2.0 * kPi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return SpherePoint::from_vector({r * std::cos(lon), r * std::sin(lon), z});
}

}  // namespace uwbcap
