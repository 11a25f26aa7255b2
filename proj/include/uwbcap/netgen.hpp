#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "uwbcap/geometry.hpp"

namespace uwbcap {

/// Network area: unit total area, or A = n * a0 (constant density).
struct AreaMode {
  enum class Kind { unit, scaled };
  Kind kind = Kind::unit;
  double a0 = 1.0;

  static AreaMode unit() { return {}; }
  static AreaMode scaled(double a0) { return {Kind::scaled, a0}; }

  Sphere sphere_for(std::size_t n) const {
    return kind == Kind::unit ? Sphere::unit_area() : Sphere::scaled_area(n, a0);
  }

  friend bool operator==(const AreaMode&, const AreaMode&) = default;
};

std::string_view to_string(AreaMode::Kind kind);
AreaMode::Kind parse_area_kind(std::string_view text);

struct Network {
  std::vector<SpherePoint> nodes;
  /// dest[i] is the destination of source i; empty until destinations are assigned.
  std::vector<std::size_t> dest;
  std::uint64_t seed = 0;
  AreaMode area;

  std::size_t size() const { return nodes.size(); }
  bool has_destinations() const { return dest.size() == nodes.size(); }
  Sphere sphere() const { return area.sphere_for(nodes.size()); }
  double distance(std::size_t i, std::size_t j) const { return sphere().distance(nodes[i], nodes[j]); }
};

/// n i.i.d. uniform nodes. Throws DomainError when n < 2.
Network generate(std::size_t n, std::uint64_t seed, AreaMode area = AreaMode::unit());

/// For each source i, dest[i] is the node nearest a fresh uniform point; the
/// point is redrawn while that node is i itself. Destinations may be shared.
Network assign_destinations(Network net, std::uint64_t seed);

/// generate + assign_destinations with the standard sub-streams of `seed`.
Network make_network(std::size_t n, std::uint64_t seed, AreaMode area = AreaMode::unit());

struct NetworkStats {
  double d_min = 0.0;
  /// 1/(n sqrt(log n)) in unit-area terms, scaled with the sphere.
  double close_pair_threshold = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

double close_pair_threshold(std::size_t n, const Sphere& sphere);

/// Exact closest pair. Bucketed for n > 1000, brute force otherwise.
NetworkStats min_pairwise_distance(const Network& net);
NetworkStats min_pairwise_distance_bucketed(const Network& net);
NetworkStats min_pairwise_distance_brute(const Network& net);

}  // namespace uwbcap
