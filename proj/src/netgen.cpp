#include "uwbcap/netgen.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "uwbcap/errors.hpp"
#include "uwbcap/spatial_index.hpp"

namespace uwbcap {

std::string_view to_string(AreaMode::Kind kind) {
  return kind == AreaMode::Kind::unit ? "unit" : "scaled";
}

AreaMode::Kind parse_area_kind(std::string_view text) {
  if (text == "unit") return AreaMode::Kind::unit;
  if (text == "scaled") return AreaMode::Kind::scaled;
  throw DomainError("area mode must be 'unit' or 'scaled', got '" + std::string(text) + "'");
}

Network generate(std::size_t n, std::uint64_t seed, AreaMode area) {
  if (n < 2) throw DomainError("generate: need at least 2 nodes");
  if (area.kind == AreaMode::Kind::scaled && !(area.a0 > 0.0)) {
    throw DomainError("generate: a0 must be positive");
  }
  Network net;
  net.seed = seed;
  net.area = area;
  net.nodes.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) net.nodes.push_back(sample_uniform(rng));
  return net;
}

Network assign_destinations(Network net, std::uint64_t seed) {
  const std::size_t n = net.size();
  if (n < 2) throw DomainError("assign_destinations: need at least 2 nodes");
  Rng rng(seed);
  net.dest.assign(n, 0);
  const PointIndex index(net.nodes);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t d = i;
    while (d == i) d = index.nearest(sample_uniform(rng));
    net.dest[i] = d;
  }
  return net;
}

Network make_network(std::size_t n, std::uint64_t seed, AreaMode area) {
  Network net = generate(n, stream_seed(seed, Stream::nodes), area);
  net = assign_destinations(std::move(net), stream_seed(seed, Stream::destinations));
  net.seed = seed;
  return net;
}

double close_pair_threshold(std::size_t n, const Sphere& sphere) {
  const double nn = static_cast<double>(n);
  return std::sqrt(sphere.area()) / (nn * std::sqrt(std::log(nn)));
}

NetworkStats min_pairwise_distance_brute(const Network& net) {
  if (net.size() < 2) throw DomainError("min_pairwise_distance: need at least 2 nodes");
  NetworkStats s;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t j = i + 1; j < net.size(); ++j) {
      const double a = central_angle(net.nodes[i], net.nodes[j]);
      if (a < best) {
        best = a;
        s.first = i;
        s.second = j;
      }
    }
  }
  const Sphere sphere = net.sphere();
  s.d_min = sphere.to_arc(best);
  s.close_pair_threshold = close_pair_threshold(net.size(), sphere);
  return s;
}

NetworkStats min_pairwise_distance_bucketed(const Network& net) {
  if (net.size() < 2) throw DomainError("min_pairwise_distance: need at least 2 nodes");
  const PointIndex index(net.nodes);
  NetworkStats s;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const std::size_t j = index.nearest(net.nodes[i], i);
    const double a = central_angle(net.nodes[i], net.nodes[j]);
    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
    if (a < best || (a == best && std::pair(lo, hi) < std::pair(s.first, s.second))) {
      best = a;
      s.first = lo;
      s.second = hi;
    }
  }
  const Sphere sphere = net.sphere();
  s.d_min = sphere.to_arc(best);
  s.close_pair_threshold = close_pair_threshold(net.size(), sphere);
  return s;
}

NetworkStats min_pairwise_distance(const Network& net) {
  return net.size() > 1000 ? min_pairwise_distance_bucketed(net) : min_pairwise_distance_brute(net);
}

}  // namespace uwbcap
