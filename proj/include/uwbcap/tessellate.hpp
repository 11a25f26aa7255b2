#pragma once

#include <cstddef>
#include <vector>

#include "uwbcap/geometry.hpp"
#include "uwbcap/netgen.hpp"
#include "uwbcap/rng.hpp"
#include "uwbcap/spatial_index.hpp"

namespace uwbcap {

/// Default cell-area constant: each cell holds a cap of area 100 log n / n.
inline constexpr double kDefaultCellArea = 100.0;

/// Inner cell radius rho(n): geodesic radius of the cap holding the fraction
/// c_area log n / n of the sphere. Throws RegimeError (naming the smallest
/// admissible n) unless that fraction is below one half.
double rho_for(std::size_t n, double c_area, const Sphere& sphere = Sphere::unit_area());

/// Smallest n >= 3 with c_area log n / n < 1/2.
std::size_t minimum_n_for(double c_area);

/// Upper side of 4 rho <= sqrt(3200 (c_area/100) log n / (pi n)), scaled with the sphere area.
double cell_radius_bound(std::size_t n, double c_area, const Sphere& sphere = Sphere::unit_area());

/// Nearest-generator tessellation whose generators form a maximal
/// 2 rho-packing: each cell contains the rho-cap about its generator and lies
/// within the 2 rho-cap.
class Tessellation {
 public:
  Tessellation(std::vector<SpherePoint> generators, std::size_t n, double c_area, double rho,
               Sphere sphere);

  const std::vector<SpherePoint>& generators() const { return generators_; }
  const SpherePoint& generator(std::size_t k) const { return generators_[k]; }
  std::size_t cell_count() const { return generators_.size(); }
  std::size_t n() const { return n_; }
  double c_area() const { return c_area_; }
  double rho() const { return rho_; }
  const Sphere& sphere() const { return sphere_; }

  /// Nearest generator, lowest index on ties.
  std::size_t cell_of(const SpherePoint& p) const { return index_.nearest(p); }

 private:
  std::vector<SpherePoint> generators_;
  std::size_t n_;
  double c_area_;
  double rho_;
  Sphere sphere_;
  PointIndex index_;
};

struct BuildOptions {
  /// Consecutive rejections allowed per accepted generator before stopping.
  std::size_t rejection_factor = 200;
  /// Uniform test points per maximality audit round.
  std::size_t audit_points = 100000;
};

/// Dart throwing: accept candidates at distance >= 2 rho from every accepted
/// generator; stop after rejection_factor * cell_count consecutive rejections;
/// then audit maximality with uniform test points, inserting any uncovered
/// point, until an audit round finds none.
Tessellation build_tessellation(std::size_t n, double c_area, Rng& rng,
                                const Sphere& sphere = Sphere::unit_area(),
                                const BuildOptions& options = {});

/// Minimum pairwise generator distance, exact.
double min_generator_separation(const Tessellation& tess);
bool packing_holds(const Tessellation& tess);

/// Number of test points farther than 2 rho from every generator.
std::size_t maximality_violations(const Tessellation& tess, Rng& rng, std::size_t points);

/// Exact coverage certificate: crossings of two 2 rho circles lying outside
/// every other 2 rho cap. Zero iff the 2 rho caps cover the sphere.
std::size_t uncovered_crossings(const Tessellation& tess);

bool cell_radius_bound_holds(const Tessellation& tess);

struct CellStats {
  /// N(V): nodes whose nearest generator is V.
  std::vector<std::size_t> cell_counts;
  /// Nodes inside the inner rho-cap of each generator.
  std::vector<std::size_t> inner_counts;
  /// 0.5 and 1.5 times c_area log n.
  double lo = 0.0;
  double hi = 0.0;
  /// Cells whose inner-cap count falls outside [lo, hi].
  std::vector<std::size_t> violating_cells;
  std::size_t max_cell_count = 0;
  std::size_t empty_cells = 0;
  /// max over cells of |inner_count/n - cap_area(rho)/area|.
  double max_uniform_deviation = 0.0;
  /// cap_area(rho)/area, the probability mass of an inner cap.
  double inner_cap_fraction = 0.0;
};

CellStats occupancy(const Tessellation& tess, const Network& net);

/// Cells adjacent when their generators lie within `threshold` (arc length).
std::vector<std::vector<std::size_t>> interfering_cell_graph(const Tessellation& tess,
                                                             double threshold);

/// Packing bound on the degree of interfering_cell_graph: generators within
/// `threshold` keep disjoint rho-caps inside the (threshold + rho)-cap.
std::size_t interfering_degree_bound(const Tessellation& tess, double threshold);

}  // namespace uwbcap
