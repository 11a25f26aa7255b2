#include "uwbcap/tessellate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uwbcap/errors.hpp"

namespace uwbcap {

namespace {

double cell_fraction(std::size_t n, double c_area) {
  const double nn = static_cast<double>(n);
  return c_area * std::log(nn) / nn;
}

// True when `p` keeps central angle >= min_angle from every point in `pts`.
// The dot-product filter settles all but near-boundary cases, which fall back
// to the exact angle.
bool separated(const SpherePoint& p, const std::vector<SpherePoint>& pts, double min_angle,
               double cos_min) {
  for (const auto& g : pts) {
    const double c = dot(p.direction(), g.direction());
    if (c > cos_min + 1e-9) return false;
    if (c >= cos_min - 1e-9 && central_angle(p, g) < min_angle) return false;
  }
  return true;
}

struct Crossing {
  SpherePoint point;
  std::size_t i;
  std::size_t j;
};

// Points where the boundary circles of two caps of angular radius `theta`
// cross outside every other cap. The caps cover the sphere iff there are none
// (given at least two caps, each circle crosses another one).
std::vector<Crossing> uncovered_crossing_points(const std::vector<SpherePoint>& gens, double theta) {
  const std::size_t m = gens.size();
  std::vector<std::vector<std::size_t>> near(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (central_angle(gens[i], gens[j]) < 2.0 * theta) {
        near[i].push_back(j);
        near[j].push_back(i);
      }
    }
  }
  const double cos_t = std::cos(theta);
  std::vector<Crossing> out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j : near[i]) {
      if (j < i) continue;
      const Vec3& a = gens[i].direction();
      const Vec3& b = gens[j].direction();
      const double c = dot(a, b);
      const double y2 = 1.0 - 2.0 * cos_t * cos_t / (1.0 + c);
      if (!(y2 > 0.0)) continue;
      const Vec3 axis = cross(a, b);
      const Vec3 e = (1.0 / norm(axis)) * axis;
      const double x = cos_t / (1.0 + c);
      for (double sign : {1.0, -1.0}) {
        const SpherePoint p = SpherePoint::from_vector(x * (a + b) + (sign * std::sqrt(y2)) * e);
        const bool covered = std::any_of(near[i].begin(), near[i].end(), [&](std::size_t k) {
          return k != j && central_angle(p, gens[k]) < theta;
        });
        if (!covered) out.push_back({p, i, j});
      }
    }
  }
  return out;
}

// Inserts generators at uncovered crossings, each pushed into its hole as far
// as separation allows, until none remain.
void fill_coverage_holes(std::vector<SpherePoint>& gens, double theta, double cos_min) {
  for (;;) {
    std::size_t inserted = 0;
    for (const auto& [p, i, j] : uncovered_crossing_points(gens, theta)) {
      const Vec3 ab = gens[i].direction() + gens[j].direction();
      const Vec3 mid = (1.0 / norm(ab)) * ab;
      Vec3 t = mid - dot(mid, p.direction()) * p.direction();
      if (norm(t) < 1e-15) continue;
      t = (1.0 / norm(t)) * t;
      for (double step = theta; step > theta * 1e-12; step *= 0.5) {
        const SpherePoint q = SpherePoint::from_vector(std::cos(step) * p.direction() - std::sin(step) * t);
        if (separated(q, gens, 2.0 * theta, cos_min)) {
          gens.push_back(q);
          ++inserted;
          break;
        }
      }
    }
    if (inserted == 0) return;
  }
}

}  // namespace

std::size_t minimum_n_for(double c_area) {
  if (!(c_area > 0.0)) throw DomainError("c_area must be positive");
  // c log n / n is decreasing for n >= 3; find the first n where it drops below 1/2.
  std::size_t lo = 3, hi = 3;
  while (!(cell_fraction(hi, c_area) < 0.5)) {
    lo = hi;
    hi *= 2;
  }
  if (cell_fraction(lo, c_area) < 0.5) return lo;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (cell_fraction(mid, c_area) < 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double rho_for(std::size_t n, double c_area, const Sphere& sphere) {
  if (!(c_area > 0.0)) throw DomainError("c_area must be positive");
  if (n < 3 || !(cell_fraction(n, c_area) < 0.5)) {
    const std::size_t min_n = minimum_n_for(c_area);
    throw RegimeError("tessellation regime: c_area * log(n) / n must be < 0.5; with c_area = " +
                          std::to_string(c_area) + " need n >= " + std::to_string(min_n) +
                          " (got n = " + std::to_string(n) + ")",
                      min_n);
  }
  return sphere.cap_radius_for_area(cell_fraction(n, c_area) * sphere.area());
}

double cell_radius_bound(std::size_t n, double c_area, const Sphere& sphere) {
  const double nn = static_cast<double>(n);
  return std::sqrt(3200.0 * (c_area / 100.0) * std::log(nn) / (std::numbers::pi * nn) *
                   sphere.area());
}

Tessellation::Tessellation(std::vector<SpherePoint> generators, std::size_t n, double c_area,
                           double rho, Sphere sphere)
    : generators_(std::move(generators)),
      n_(n),
      c_area_(c_area),
      rho_(rho),
      sphere_(sphere),
      index_(generators_, 1.0) {
  if (generators_.empty()) throw ContractError("Tessellation: no generators");
}

Tessellation build_tessellation(std::size_t n, double c_area, Rng& rng, const Sphere& sphere,
                                const BuildOptions& options) {
  const double rho = rho_for(n, c_area, sphere);
  const double min_angle = 2.0 * sphere.to_angle(rho);
  const double cos_min = std::cos(min_angle);

  std::vector<SpherePoint> gens;
  std::size_t rejections = 0;
  while (rejections < options.rejection_factor * std::max<std::size_t>(1, gens.size())) {
    const SpherePoint c = sample_uniform(rng);
    if (separated(c, gens, min_angle, cos_min)) {
      gens.push_back(c);
      rejections = 0;
    } else {
      ++rejections;
    }
  }

  // Maximality audit: every test point must be within 2 rho of a generator.
  for (;;) {
    const PointIndex index(gens, 1.0);
    std::vector<SpherePoint> uncovered;
    for (std::size_t i = 0; i < options.audit_points; ++i) {
      const SpherePoint p = sample_uniform(rng);
      if (central_angle(p, index.point(index.nearest(p))) > min_angle) uncovered.push_back(p);
    }
    if (uncovered.empty()) break;
    for (const auto& p : uncovered) {
      if (separated(p, gens, min_angle, cos_min)) gens.push_back(p);
    }
  }
  // Holes too small for the test points.
  fill_coverage_holes(gens, min_angle, cos_min);
  return Tessellation(std::move(gens), n, c_area, rho, sphere);
}

double min_generator_separation(const Tessellation& tess) {
  const auto& g = tess.generators();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      best = std::min(best, central_angle(g[i], g[j]));
    }
  }
  return tess.sphere().to_arc(best);
}

bool packing_holds(const Tessellation& tess) {
  const auto& g = tess.generators();
  const double min_angle = 2.0 * tess.sphere().to_angle(tess.rho());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (central_angle(g[i], g[j]) < min_angle) return false;
    }
  }
  return true;
}

std::size_t maximality_violations(const Tessellation& tess, Rng& rng, std::size_t points) {
  const double max_angle = 2.0 * tess.sphere().to_angle(tess.rho());
  std::size_t bad = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const SpherePoint p = sample_uniform(rng);
    if (central_angle(p, tess.generator(tess.cell_of(p))) > max_angle) ++bad;
  }
  return bad;
}

std::size_t uncovered_crossings(const Tessellation& tess) {
  if (tess.cell_count() < 2) return 1;
  return uncovered_crossing_points(tess.generators(), 2.0 * tess.sphere().to_angle(tess.rho())).size();
}

bool cell_radius_bound_holds(const Tessellation& tess) {
  return 4.0 * tess.rho() <= cell_radius_bound(tess.n(), tess.c_area(), tess.sphere());
}

CellStats occupancy(const Tessellation& tess, const Network& net) {
  if (!(net.sphere() == tess.sphere())) {
    throw ContractError("occupancy: network and tessellation live on different spheres");
  }
  const std::size_t m = tess.cell_count();
  CellStats s;
  s.cell_counts.assign(m, 0);
  s.inner_counts.assign(m, 0);
  const double inner_angle = tess.sphere().to_angle(tess.rho());
  for (const auto& p : net.nodes) {
    const std::size_t k = tess.cell_of(p);
    ++s.cell_counts[k];
    // Inner caps are disjoint, so only the nearest generator can contain p.
    if (central_angle(p, tess.generator(k)) <= inner_angle) ++s.inner_counts[k];
  }
  const double expected = tess.c_area() * std::log(static_cast<double>(tess.n()));
  s.lo = 0.5 * expected;
  s.hi = 1.5 * expected;
  s.inner_cap_fraction = tess.sphere().cap_area(tess.rho()) / tess.sphere().area();
  const double n = static_cast<double>(net.size());
  for (std::size_t k = 0; k < m; ++k) {
    const double c = static_cast<double>(s.inner_counts[k]);
    if (c < s.lo || c > s.hi) s.violating_cells.push_back(k);
    s.max_cell_count = std::max(s.max_cell_count, s.cell_counts[k]);
    if (s.cell_counts[k] == 0) ++s.empty_cells;
    s.max_uniform_deviation = std::max(s.max_uniform_deviation, std::abs(c / n - s.inner_cap_fraction));
  }
  return s;
}

std::vector<std::vector<std::size_t>> interfering_cell_graph(const Tessellation& tess,
                                                             double threshold) {
  const auto& g = tess.generators();
  std::vector<std::vector<std::size_t>> adj(g.size());
  if (!(threshold > 0.0)) return adj;
  const double max_angle = tess.sphere().to_angle(threshold);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (central_angle(g[i], g[j]) <= max_angle) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

std::size_t interfering_degree_bound(const Tessellation& tess, double threshold) {
  const Sphere& s = tess.sphere();
  const double ratio = s.cap_area(threshold + tess.rho()) / s.cap_area(tess.rho());
  const auto cells = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  return cells == 0 ? 0 : cells - 1;
}

}  // namespace uwbcap
