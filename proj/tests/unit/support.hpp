#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "uwbcap/netgen.hpp"

namespace uwbcap::test {

inline SpherePoint lonlat(double lon, double lat) {
  return SpherePoint::from_vector({std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)});
}

inline Network network_of(std::vector<SpherePoint> pts, std::vector<std::size_t> dest,
                          AreaMode area = AreaMode::unit()) {
  Network net;
  net.nodes = std::move(pts);
  net.dest = std::move(dest);
  net.area = area;
  return net;
}

/// Nodes on the equator at the given longitudes (radians).
inline Network equator(const std::vector<double>& lons, std::vector<std::size_t> dest) {
  std::vector<SpherePoint> pts;
  for (double l : lons) pts.push_back(lonlat(l, 0.0));
  return network_of(std::move(pts), std::move(dest));
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace uwbcap::test
