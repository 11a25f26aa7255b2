#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "uwbcap/geometry.hpp"

namespace uwbcap {

/// Static bucket grid over unit directions for nearest-point and fixed-radius
/// queries on the sphere.
///
/// Directions are bucketed in a uniform 3D grid over [-1,1]^3; queries use the
/// chord bound |p - q| = 2 sin(angle/2) to pick buckets and then compare exact
/// central angles, so results agree with brute force including tie-breaks
/// (lowest index wins).
class PointIndex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  PointIndex() = default;
  explicit PointIndex(std::span<const SpherePoint> points, double points_per_cell = 2.0);

  std::size_t size() const { return points_.size(); }
  const SpherePoint& point(std::size_t i) const { return points_[i]; }

  /// Index minimizing the central angle to q (lowest index on ties), skipping
  /// `exclude`. Returns npos when no candidate exists.
  std::size_t nearest(const SpherePoint& q, std::size_t exclude = npos) const;

  /// Calls fn(index, angle) for every point with central angle <= max_angle.
  template <class Fn>
  void for_each_within(const SpherePoint& q, double max_angle, Fn&& fn) const {
    if (points_.empty()) return;
    const double chord =
        max_angle >= std::numbers::pi ? 2.0 : 2.0 * std::sin(0.5 * max_angle);
    const double reach = chord * (1.0 + 1e-12) + 1e-15;
    const Vec3& d = q.direction();
    const int x0 = cell_coord(d.x - reach), x1 = cell_coord(d.x + reach);
    const int y0 = cell_coord(d.y - reach), y1 = cell_coord(d.y + reach);
    const int z0 = cell_coord(d.z - reach), z1 = cell_coord(d.z + reach);
    for (int ix = x0; ix <= x1; ++ix) {
      for (int iy = y0; iy <= y1; ++iy) {
        for (int iz = z0; iz <= z1; ++iz) {
          const std::size_t c = cell_id(ix, iy, iz);
          for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
            const std::uint32_t i = items_[k];
            const double a = central_angle(q, points_[i]);
            if (a <= max_angle) fn(static_cast<std::size_t>(i), a);
          }
        }
      }
    }
  }

 private:
  int cell_coord(double v) const {
    int c = static_cast<int>(std::floor((v + 1.0) / cell_size_));
    if (c < 0) c = 0;
    if (c >= dim_) c = dim_ - 1;
    return c;
  }
  std::size_t cell_id(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * dim_ + iy) * dim_ + iz;
  }

  std::vector<SpherePoint> points_;
  int dim_ = 1;
  double cell_size_ = 2.0;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> items_;
};

}  // namespace uwbcap
