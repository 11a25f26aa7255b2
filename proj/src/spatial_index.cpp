#include "uwbcap/spatial_index.hpp"

#include <algorithm>

namespace uwbcap {

PointIndex::PointIndex(std::span<const SpherePoint> points, double points_per_cell)
    : points_(points.begin(), points.end()) {
  // The sphere meets roughly 1.5 * 4 pi / h^2 grid cells.
  const double n = std::max<double>(1.0, static_cast<double>(points_.size()));
  const double h = std::sqrt(6.0 * std::numbers::pi * points_per_cell / n);
  dim_ = std::clamp(static_cast<int>(std::ceil(2.0 / h)), 1, 160);
  cell_size_ = 2.0 / dim_;

  const std::size_t cells = static_cast<std::size_t>(dim_) * dim_ * dim_;
  start_.assign(cells + 1, 0);
  std::vector<std::uint32_t> cell_of(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Vec3& d = points_[i].direction();
    const auto c = static_cast<std::uint32_t>(cell_id(cell_coord(d.x), cell_coord(d.y), cell_coord(d.z)));
    cell_of[i] = c;
    ++start_[c + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
  items_.resize(points_.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }
}

std::size_t PointIndex::nearest(const SpherePoint& q, std::size_t exclude) const {
  std::size_t best = npos;
  double best_angle = std::numeric_limits<double>::infinity();
  const Vec3& d = q.direction();
  const int cx = cell_coord(d.x), cy = cell_coord(d.y), cz = cell_coord(d.z);

  auto visit_cell = [&](int ix, int iy, int iz) {
    const std::size_t c = cell_id(ix, iy, iz);
    for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
      const std::size_t i = items_[k];
      if (i == exclude) continue;
      const double a = central_angle(q, points_[i]);
      if (a < best_angle || (a == best_angle && i < best)) {
        best_angle = a;
        best = i;
      }
    }
  };

  for (int k = 0; k <= dim_; ++k) {
    const int x0 = std::max(0, cx - k), x1 = std::min(dim_ - 1, cx + k);
    const int y0 = std::max(0, cy - k), y1 = std::min(dim_ - 1, cy + k);
    const int z0 = std::max(0, cz - k), z1 = std::min(dim_ - 1, cz + k);
    for (int ix = x0; ix <= x1; ++ix) {
      const bool x_edge = std::abs(ix - cx) == k;
      for (int iy = y0; iy <= y1; ++iy) {
        const bool xy_edge = x_edge || std::abs(iy - cy) == k;
        if (xy_edge) {
          for (int iz = z0; iz <= z1; ++iz) visit_cell(ix, iy, iz);
        } else {
          // Only the two z faces of the shell are new.
          if (cz - k >= 0) visit_cell(ix, iy, cz - k);
          if (k > 0 && cz + k < dim_) visit_cell(ix, iy, cz + k);
        }
      }
    }
    if (best != npos) {
      // Every unvisited point lies at chord distance >= k * cell_size.
      const double chord = 2.0 * std::sin(0.5 * best_angle);
      if (chord < k * cell_size_ - 1e-12) break;
    }
  }
  return best;
}

}  // namespace uwbcap
