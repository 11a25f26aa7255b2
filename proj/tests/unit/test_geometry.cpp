#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "uwbcap/errors.hpp"
#include "uwbcap/geometry.hpp"
#include "uwbcap/rng.hpp"

using namespace uwbcap;
using uwbcap::test::lonlat;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("unit sphere radius and area") {
  const Sphere s = Sphere::unit_area();
  CHECK(s.area() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.radius() == doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))));
}

TEST_CASE("distance special cases") {
  const Sphere s = Sphere::unit_area();
  const SpherePoint p = lonlat(0.3, 0.2);
  CHECK(s.distance(p, p) == 0.0);
  const SpherePoint north = SpherePoint::from_vector({0, 0, 1});
  const SpherePoint south = SpherePoint::from_vector({0, 0, -1});
  const SpherePoint east = SpherePoint::from_vector({1, 0, 0});
  CHECK(s.distance(north, south) == doctest::Approx(0.8862269).epsilon(1e-7));
  CHECK(s.distance(north, east) == doctest::Approx(0.4431135).epsilon(1e-7));
  CHECK(s.distance(north, south) <= s.max_distance());
}

TEST_CASE("distance is accurate at tiny separations") {
  // arccos of the dot product would return 0 here
  const SpherePoint a = lonlat(0.0, 0.0);
  const SpherePoint b = lonlat(1e-10, 0.0);
  CHECK(central_angle(a, b) == doctest::Approx(1e-10).epsilon(1e-6));
}

TEST_CASE("triangle inequality and symmetry on random triples") {
  const Sphere s = Sphere::unit_area();
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const auto a = sample_uniform(rng), b = sample_uniform(rng), c = sample_uniform(rng);
    const double ab = s.distance(a, b), bc = s.distance(b, c), ac = s.distance(a, c);
    CHECK(ab == s.distance(b, a));
    CHECK(ac <= ab + bc + 1e-12);
    CHECK(ab >= 0.0);
    CHECK(ab <= s.max_distance());
  }
}

TEST_CASE("scaled sphere multiplies every distance by the same factor") {
  const Sphere u = Sphere::unit_area();
  const Sphere sc = Sphere::scaled_area(4096, 2.0);
  CHECK(sc.area() == doctest::Approx(4096 * 2.0).epsilon(1e-12));
  const double k = std::sqrt(4096 * 2.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto a = sample_uniform(rng), b = sample_uniform(rng);
    CHECK(sc.distance(a, b) == doctest::Approx(k * u.distance(a, b)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(Sphere::scaled_area(10, 0.0), DomainError);
}

TEST_CASE("cap radius for area") {
  const Sphere s = Sphere::unit_area();
  CHECK(s.cap_radius_for_area(0.5) == doctest::Approx(0.5 * kPi * s.radius()).epsilon(1e-13));
  for (double a : {0.01, 0.1, 0.9}) {
    CHECK(s.cap_area(s.cap_radius_for_area(a)) == doctest::Approx(a).epsilon(1e-10));
  }
  // flat limit
  const double rho = s.cap_radius_for_area(1e-4);
  CHECK(std::abs(rho - std::sqrt(1e-4 / kPi)) / rho <= 0.01);
  CHECK_THROWS_AS(s.cap_radius_for_area(0.0), DomainError);
  CHECK_THROWS_AS(s.cap_radius_for_area(1.0), DomainError);
  CHECK_THROWS_AS(s.cap_radius_for_area(-0.1), DomainError);
}

TEST_CASE("cap area matches numerical integration") {
  // area = integral_0^rho 2 pi R sin(r/R) dr, midpoint rule
  const Sphere s = Sphere::unit_area();
  const double R = s.radius();
  for (double rho : {0.01, 0.2, 0.6, 0.85}) {
    const int steps = 20000;
    double sum = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double r = (k + 0.5) * rho / steps;
      sum += 2.0 * kPi * R * std::sin(r / R) * (rho / steps);
    }
    CHECK(s.cap_area(rho) == doctest::Approx(sum).epsilon(1e-8));
  }
}

TEST_CASE("cap sandwich on the range where it holds") {
  // (pi/2) rho^2 <= cap_area fails beyond rho ~ 2.78 R, so sample below 2.7 R
  const Sphere s = Sphere::unit_area();
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double rho = 2.7 * s.radius() * (1e-6 + rng.uniform());
    const double a = s.cap_area(rho);
    CHECK(0.5 * kPi * rho * rho <= a);
    CHECK(a <= kPi * rho * rho);
  }
  // and it does fail near the antipode
  const double big = 0.99 * kPi * s.radius();
  CHECK(0.5 * kPi * big * big > s.cap_area(big));
}

TEST_CASE("interpolate") {
  const Sphere s = Sphere::unit_area();
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const GeodesicSegment seg{sample_uniform(rng), sample_uniform(rng)};
    const double len = s.length(seg);
    CHECK(s.interpolate(seg, 0.0) == seg.from);
    CHECK(s.interpolate(seg, 1.0) == seg.to);
    const auto mid = s.interpolate(seg, 0.5);
    CHECK(std::abs(s.distance(mid, seg.from) - s.distance(mid, seg.to)) <= 1e-10);
    const double t = rng.uniform();
    const auto p = s.interpolate(seg, t);
    CHECK(std::abs(s.distance(seg.from, p) - t * len) <= 1e-10);
    CHECK(std::abs(s.distance(seg.from, p) + s.distance(p, seg.to) - len) <= 1e-10);
    CHECK(std::abs(norm(p.direction()) - 1.0) <= 1e-12);
  }
  const GeodesicSegment anti{lonlat(0.2, 0.1), SpherePoint::from_vector(-1.0 * lonlat(0.2, 0.1).direction())};
  CHECK_THROWS_AS(s.interpolate(anti, 0.5), DegenerateGeodesicError);
  CHECK_THROWS_AS(s.interpolate({lonlat(0, 0), lonlat(1, 0)}, 1.5), DomainError);
}

TEST_CASE("orthogonal direction") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto p = sample_uniform(rng);
    const Vec3 o = orthogonal_direction(p);
    CHECK(std::abs(dot(o, p.direction())) <= 1e-12);
    CHECK(norm(o) == doctest::Approx(1.0));
  }
}

TEST_CASE("uniform sampling") {
  const Sphere s = Sphere::unit_area();
  Rng rng(2024);
  const int draws = 100000;
  const SpherePoint center = lonlat(1.0, 0.4);
  const double rho = s.cap_radius_for_area(0.25);
  int inside = 0;
  Vec3 mean{0, 0, 0};
  for (int i = 0; i < draws; ++i) {
    const auto p = sample_uniform(rng);
    CHECK(std::abs(norm(p.direction()) - 1.0) <= 1e-12);
    if (s.distance(p, center) <= rho) ++inside;
    mean = mean + p.direction();
  }
  const double sigma = std::sqrt(0.25 * 0.75 / draws);
  CHECK(std::abs(static_cast<double>(inside) / draws - 0.25) <= 3.0 * sigma);
  CHECK(norm((1.0 / draws) * mean) <= 0.02);

  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) CHECK(sample_uniform(a) == sample_uniform(b));
}

TEST_CASE("from_vector rejects zero") {
  CHECK_THROWS_AS(SpherePoint::from_vector({0, 0, 0}), DomainError);
}
