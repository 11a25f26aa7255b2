#include "uwbcap/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "uwbcap/errors.hpp"
#include "uwbcap/spatial_index.hpp"

namespace uwbcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMatrixLimit = 4096;
constexpr std::size_t kLandmarkMinNodes = 1024;
constexpr std::size_t kLandmarks = 16;

double hop_cost(double d, double alpha) { return alpha == 2.0 ? d * d : std::pow(d, alpha); }

// Calls fn(point) on samples of the geodesic a -> b spaced at most `step`
// apart, both endpoints included. Antipodal endpoints are joined through an
// arbitrary orthogonal direction.
template <class Fn>
void sample_geodesic(const Sphere& sphere, const SpherePoint& a, const SpherePoint& b, double step, Fn&& fn) {
  const Vec3 c = cross(a.direction(), b.direction());
  if (norm(c) < 1e-12 && dot(a.direction(), b.direction()) < 0.0) {
    const SpherePoint mid = SpherePoint::from_vector(orthogonal_direction(a));
    sample_geodesic(sphere, a, mid, step, fn);
    sample_geodesic(sphere, mid, b, step, fn);
    return;
  }
  const GeodesicSegment seg{a, b};
  const double d = sphere.length(seg);
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(d / step)));
  for (std::size_t k = 0; k <= m; ++k) {
    fn(sphere.interpolate(seg, static_cast<double>(k) / static_cast<double>(m)));
  }
}

}  // namespace

std::string_view to_string(Pruning p) {
  switch (p) {
    case Pruning::complete:
      return "complete";
    case Pruning::gabriel:
      return "gabriel";
    case Pruning::automatic:
      return "auto";
  }
  return "auto";
}

Pruning parse_pruning(std::string_view text) {
  if (text == "complete") return Pruning::complete;
  if (text == "gabriel") return Pruning::gabriel;
  if (text == "auto") return Pruning::automatic;
  throw DomainError("pruning must be complete, gabriel or auto, got '" + std::string(text) + "'");
}

Pruning resolve_pruning(Pruning p, std::size_t n, double alpha) {
  if (p == Pruning::automatic) {
    return (n <= kCompleteLimit || alpha < 2.0) ? Pruning::complete : Pruning::gabriel;
  }
  if (p == Pruning::gabriel && alpha < 2.0) {
    throw ContractError("gabriel pruning preserves minimum-power paths only for alpha >= 2");
  }
  return p;
}

Route make_route(const Network& net, std::vector<std::size_t> nodes, double alpha) {
  if (nodes.empty()) throw ContractError("make_route: empty node sequence");
  Route r;
  r.nodes = std::move(nodes);
  const Sphere sphere = net.sphere();
  for (std::size_t k = 1; k < r.nodes.size(); ++k) {
    const double d = sphere.distance(net.nodes[r.nodes[k - 1]], net.nodes[r.nodes[k]]);
    r.hops.push_back(d);
    r.length += d;
    r.cost += hop_cost(d, alpha);
  }
  r.direct = sphere.distance(net.nodes[r.nodes.front()], net.nodes[r.nodes.back()]);
  return r;
}

int compare_routes(double cost_a, std::span<const std::size_t> path_a, double cost_b,
                   std::span<const std::size_t> path_b) {
  const double scale = std::max(std::abs(cost_a), std::abs(cost_b));
  if (std::abs(cost_a - cost_b) > kCostTieTolerance * scale) return cost_a < cost_b ? -1 : 1;
  if (path_a.size() != path_b.size()) return path_a.size() < path_b.size() ? -1 : 1;
  const auto cmp = std::lexicographical_compare_three_way(path_a.begin(), path_a.end(), path_b.begin(),
                                                          path_b.end());
  return cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Gabriel graph

double covering_radius_bound(const Network& net) {
  const PointIndex index(net.nodes);
  const auto m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(net.size()))));
  auto face_point = [](int face, double u, double v) -> Vec3 {
    switch (face) {
      case 0: return {1.0, u, v};
      case 1: return {-1.0, u, v};
      case 2: return {u, 1.0, v};
      case 3: return {u, -1.0, v};
      case 4: return {u, v, 1.0};
      default: return {u, v, -1.0};
    }
  };
  double worst = 0.0;
  for (int face = 0; face < 6; ++face) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double u0 = -1.0 + 2.0 * i / m, u1 = -1.0 + 2.0 * (i + 1) / m;
        const double v0 = -1.0 + 2.0 * j / m, v1 = -1.0 + 2.0 * (j + 1) / m;
        const SpherePoint center = SpherePoint::from_vector(face_point(face, 0.5 * (u0 + u1), 0.5 * (v0 + v1)));
        // The cell's image is a convex spherical quadrilateral, so the cap
        // through its farthest corner covers it.
        double spread = 0.0;
        for (double u : {u0, u1}) {
          for (double v : {v0, v1}) {
            spread = std::max(spread, central_angle(center, SpherePoint::from_vector(face_point(face, u, v))));
          }
        }
        const double to_node = central_angle(center, index.point(index.nearest(center)));
        worst = std::max(worst, to_node + spread);
      }
    }
  }
  return net.sphere().to_arc(worst * (1.0 + 1e-12));
}

std::vector<std::vector<std::size_t>> gabriel_graph(const Network& net) {
  const std::size_t n = net.size();
  std::vector<std::vector<std::size_t>> adj(n);
  if (n < 2) return adj;
  const Sphere sphere = net.sphere();
  // An unblocked pair uv leaves the open cap of radius |uv|/2 about its
  // midpoint empty, so |uv| <= 2 * covering radius.
  const double limit = std::min(std::numbers::pi, 2.0 * sphere.to_angle(covering_radius_bound(net)) * (1.0 + 1e-9));
  const PointIndex index(net.nodes);

  std::vector<std::vector<std::pair<double, std::uint32_t>>> near(n);
  for (std::size_t u = 0; u < n; ++u) {
    index.for_each_within(net.nodes[u], limit, [&](std::size_t w, double a) {
      if (w != u) near[u].emplace_back(a, static_cast<std::uint32_t>(w));
    });
    std::sort(near[u].begin(), near[u].end());
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& [c, v] : near[u]) {
      if (v <= u) continue;
      bool blocked = false;
      for (const auto& [a, w] : near[u]) {
        if (a >= c) break;
        if (w == v) continue;
        const double b = central_angle(net.nodes[w], net.nodes[v]);
        if (a * a + b * b < c * c) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

// ---------------------------------------------------------------------------
// MinPowerRouter

MinPowerRouter::MinPowerRouter(const Network& net, double alpha, Pruning pruning)
    : net_(&net), sphere_(net.sphere()), alpha_(alpha), mode_(resolve_pruning(pruning, net.size(), alpha)) {
  if (!(alpha >= 1.0)) throw DomainError("alpha must be >= 1");
  if (!net.has_destinations()) throw ContractError("router: destinations not assigned");
  const std::size_t n = net.size();
  if (mode_ == Pruning::complete) {
    if (n <= kMatrixLimit) {
      matrix_.assign(n * n, 0.0);
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
          const double c = hop_cost(sphere_.distance(net.nodes[u], net.nodes[v]), alpha_);
          matrix_[u * n + v] = c;
          matrix_[v * n + u] = c;
        }
      }
    }
    return;
  }
  const auto adj = gabriel_graph(net);
  adj_start_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) adj_start_[u + 1] = adj_start_[u] + static_cast<std::uint32_t>(adj[u].size());
  adj_.reserve(adj_start_[n]);
  adj_cost_.reserve(adj_start_[n]);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : adj[u]) {
      adj_.push_back(static_cast<std::uint32_t>(v));
      adj_cost_.push_back(hop_cost(sphere_.distance(net.nodes[u], net.nodes[v]), alpha_));
    }
  }
  if (n >= kLandmarkMinNodes) build_landmarks();
}

std::size_t MinPowerRouter::edge_count() const {
  const std::size_t n = net_->size();
  return mode_ == Pruning::complete ? n * (n - 1) / 2 : adj_.size() / 2;
}

double MinPowerRouter::edge_cost(std::size_t u, std::size_t v) const {
  const std::size_t n = net_->size();
  if (!matrix_.empty()) return matrix_[u * n + v];
  return hop_cost(sphere_.distance(net_->nodes[u], net_->nodes[v]), alpha_);
}

void MinPowerRouter::build_landmarks() {
  // Farthest-point landmarks (by geodesic angle), then exact graph costs
  // from each by plain Dijkstra. h(v) = max_L |c(L,t) - c(L,v)| is a
  // consistent lower bound on the remaining cost to t.
  const std::size_t n = net_->size();
  const auto& nodes = net_->nodes;
  std::vector<double> closest(n, kInf);
  std::size_t next = 0;
  for (std::size_t k = 0; k < std::min(kLandmarks, n); ++k) {
    std::size_t pick = next;
    if (k == 0) {
      double far = -1.0;
      for (std::size_t v = 0; v < n; ++v) {
        const double a = central_angle(nodes[0], nodes[v]);
        if (a > far) far = a, pick = v;
      }
    }
    std::vector<double> cost(n, kInf);
    using Entry = std::pair<double, std::uint32_t>;
    std::vector<Entry> heap;
    cost[pick] = 0.0;
    heap.emplace_back(0.0, static_cast<std::uint32_t>(pick));
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), std::greater<>());
      const auto [c, u] = heap.back();
      heap.pop_back();
      if (c > cost[u]) continue;
      for (std::uint32_t e = adj_start_[u]; e < adj_start_[u + 1]; ++e) {
        const std::uint32_t v = adj_[e];
        const double nc = c + adj_cost_[e];
        if (nc < cost[v]) {
          cost[v] = nc;
          heap.emplace_back(nc, v);
          std::push_heap(heap.begin(), heap.end(), std::greater<>());
        }
      }
    }
    landmark_cost_.push_back(std::move(cost));
    double far = -1.0;
    for (std::size_t v = 0; v < n; ++v) {
      closest[v] = std::min(closest[v], central_angle(nodes[pick], nodes[v]));
      if (closest[v] > far) far = closest[v], next = v;
    }
  }
}

void MinPowerRouter::prepare(RouteWorkspace& ws) const {
  const std::size_t n = net_->size();
  if (ws.cost.size() != n) {
    ws.cost.assign(n, kInf);
    ws.hops.assign(n, 0);
    ws.parent.assign(n, 0);
    ws.seen.assign(n, 0);
    ws.closed.assign(n, 0);
    ws.generation = 0;
  }
  if (++ws.generation == 0) {
    std::fill(ws.seen.begin(), ws.seen.end(), 0);
    std::fill(ws.closed.begin(), ws.closed.end(), 0);
    ws.generation = 1;
  }
}

std::vector<std::size_t> MinPowerRouter::path_to(std::size_t v, const RouteWorkspace& ws) const {
  std::vector<std::size_t> path;
  const std::size_t n = net_->size();
  while (true) {
    path.push_back(v);
    if (ws.parent[v] == v || path.size() > n) break;
    v = ws.parent[v];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool MinPowerRouter::relax(std::size_t u, std::size_t v, double w, RouteWorkspace& ws) const {
  const double nd = ws.cost[u] + w;
  const std::uint32_t nh = ws.hops[u] + 1;
  bool better = false;
  if (ws.seen[v] != ws.generation) {
    better = true;
  } else {
    const double cv = ws.cost[v];
    const double scale = std::max(nd, cv);
    if (nd < cv - kCostTieTolerance * scale) {
      better = true;
    } else if (nd <= cv + kCostTieTolerance * scale) {
      if (nh != ws.hops[v]) {
        better = nh < ws.hops[v];
      } else if (ws.parent[v] != u) {
        auto cand = path_to(u, ws);
        cand.push_back(v);
        better = std::lexicographical_compare(cand.begin(), cand.end(), path_to(v, ws).begin(),
                                              path_to(v, ws).end());
      }
    }
  }
  if (better) {
    ws.seen[v] = ws.generation;
    ws.cost[v] = nd;
    ws.hops[v] = nh;
    ws.parent[v] = static_cast<std::uint32_t>(u);
  }
  return better;
}

Route MinPowerRouter::dense_search(std::size_t src, std::size_t dst, RouteWorkspace& ws) const {
  const std::size_t n = net_->size();
  std::fill(ws.cost.begin(), ws.cost.end(), kInf);
  const std::uint32_t gen = ws.generation;
  ws.cost[src] = 0.0;
  ws.hops[src] = 0;
  ws.parent[src] = static_cast<std::uint32_t>(src);
  ws.seen[src] = gen;
  std::size_t u = src;
  while (u != dst) {
    ws.closed[u] = gen;
    const double cu = ws.cost[u];
    const double* row = matrix_.empty() ? nullptr : &matrix_[u * n];
    double best = kInf;
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (ws.closed[v] == gen) continue;
      const double w = row != nullptr ? row[v] : edge_cost(u, v);
      const double nd = cu + w;
      const double cv = ws.cost[v];
      // Fast path: strict improvement or clearly worse; near-ties go through relax().
      if (nd < cv * (1.0 - 2.0 * kCostTieTolerance)) {
        ws.seen[v] = gen;
        ws.cost[v] = nd;
        ws.hops[v] = ws.hops[u] + 1;
        ws.parent[v] = static_cast<std::uint32_t>(u);
      } else if (nd <= cv * (1.0 + 2.0 * kCostTieTolerance)) {
        relax(u, v, w, ws);
      }
      if (ws.cost[v] < best) {
        best = ws.cost[v];
        next = v;
      }
    }
    if (next == n) break;
    u = next;
  }
  return make_route(*net_, path_to(dst, ws), alpha_);
}

Route MinPowerRouter::sparse_search(std::size_t src, std::size_t dst, RouteWorkspace& ws) const {
  const std::uint32_t gen = ws.generation;
  auto h = [&](std::size_t v) {
    double bound = 0.0;
    for (const auto& lc : landmark_cost_) bound = std::max(bound, std::abs(lc[dst] - lc[v]));
    return bound;
  };
  using Entry = std::pair<double, std::uint32_t>;
  std::vector<Entry> heap;
  ws.cost[src] = 0.0;
  ws.hops[src] = 0;
  ws.parent[src] = static_cast<std::uint32_t>(src);
  ws.seen[src] = gen;
  heap.emplace_back(h(src), static_cast<std::uint32_t>(src));
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>());
    const auto [f, u] = heap.back();
    heap.pop_back();
    if (ws.seen[dst] == gen && f > ws.cost[dst] * (1.0 + 2.0 * kCostTieTolerance)) break;
    if (f != ws.cost[u] + h(u)) continue;  // stale entry
    ws.closed[u] = gen;
    if (u == dst) continue;
    for (std::uint32_t e = adj_start_[u]; e < adj_start_[u + 1]; ++e) {
      const std::uint32_t v = adj_[e];
      if (relax(u, v, adj_cost_[e], ws)) {
        heap.emplace_back(ws.cost[v] + h(v), v);
        std::push_heap(heap.begin(), heap.end(), std::greater<>());
      }
    }
  }
  if (ws.seen[dst] != gen) throw ContractError("router: destination unreachable");
  return make_route(*net_, path_to(dst, ws), alpha_);
}

Route MinPowerRouter::route(std::size_t src, std::size_t dst, RouteWorkspace& ws) const {
  const std::size_t n = net_->size();
  if (src >= n || dst >= n) throw DomainError("route: node index out of range");
  if (src == dst) throw ContractError("route: source equals destination");
  prepare(ws);
  return mode_ == Pruning::complete ? dense_search(src, dst, ws) : sparse_search(src, dst, ws);
}

Route MinPowerRouter::route(std::size_t src, RouteWorkspace& ws) const {
  return route(src, net_->dest.at(src), ws);
}

Route MinPowerRouter::route(std::size_t src) const {
  RouteWorkspace ws;
  return route(src, ws);
}

std::vector<Route> MinPowerRouter::all_routes() const {
  RouteWorkspace ws;
  std::vector<Route> out;
  out.reserve(net_->size());
  for (std::size_t s = 0; s < net_->size(); ++s) out.push_back(route(s, ws));
  return out;
}

Route min_power_route(const Network& net, std::size_t src, double alpha, Pruning pruning) {
  return MinPowerRouter(net, alpha, pruning).route(src);
}

Route brute_force_route(const Network& net, std::size_t src, double alpha) {
  const std::size_t n = net.size();
  if (n > 10) throw DomainError("brute_force_route: refused for n > 10");
  if (!net.has_destinations()) throw ContractError("brute_force_route: destinations not assigned");
  const std::size_t dst = net.dest.at(src);
  const Sphere sphere = net.sphere();
  std::vector<std::size_t> path{src};
  std::vector<bool> used(n, false);
  used[src] = true;
  std::vector<std::size_t> best_path;
  double best_cost = kInf;

  std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double cost) {
    if (u == dst) {
      if (best_path.empty() || compare_routes(cost, path, best_cost, best_path) < 0) {
        best_cost = cost;
        best_path = path;
      }
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      path.push_back(v);
      dfs(v, cost + hop_cost(sphere.distance(net.nodes[u], net.nodes[v]), alpha));
      path.pop_back();
      used[v] = false;
    }
  };
  dfs(src, 0.0);
  return make_route(net, best_path, alpha);
}

// ---------------------------------------------------------------------------
// Cell routing

std::size_t HeadAssignment::fallback_count() const {
  return static_cast<std::size_t>(std::count(fallback.begin(), fallback.end(), true));
}

HeadAssignment assign_heads(const Tessellation& tess, const Network& net) {
  if (!(net.sphere() == tess.sphere())) {
    throw ContractError("assign_heads: network and tessellation live on different spheres");
  }
  const std::size_t m = tess.cell_count();
  HeadAssignment h;
  h.cell_of_node.resize(net.size());
  h.head.assign(m, PointIndex::npos);
  h.fallback.assign(m, false);
  std::vector<double> best(m, kInf);
  for (std::size_t i = 0; i < net.size(); ++i) {
    const std::size_t k = tess.cell_of(net.nodes[i]);
    h.cell_of_node[i] = k;
    const double a = central_angle(net.nodes[i], tess.generator(k));
    if (a < best[k]) {
      best[k] = a;
      h.head[k] = i;
    }
  }
  std::unique_ptr<PointIndex> index;
  for (std::size_t k = 0; k < m; ++k) {
    if (h.head[k] != PointIndex::npos) continue;
    if (!index) index = std::make_unique<PointIndex>(net.nodes);
    h.head[k] = index->nearest(tess.generator(k));
    h.fallback[k] = true;
  }
  return h;
}

CellRoute geodesic_cell_route(const Tessellation& tess, const Network& net, const HeadAssignment& heads,
                              std::size_t src) {
  const std::size_t dst = net.dest.at(src);
  CellRoute r;
  sample_geodesic(tess.sphere(), net.nodes[src], net.nodes[dst], 0.25 * tess.rho(), [&](const SpherePoint& p) {
    const std::size_t c = tess.cell_of(p);
    if (r.cells.empty() || r.cells.back() != c) r.cells.push_back(c);
  });
  r.heads.reserve(r.cells.size());
  for (std::size_t c : r.cells) r.heads.push_back(heads.head[c]);
  return r;
}

CellRoute geodesic_cell_route(const Tessellation& tess, const Network& net, std::size_t src) {
  return geodesic_cell_route(tess, net, assign_heads(tess, net), src);
}

std::vector<std::size_t> cell_traffic(const Tessellation& tess, const Network& net) {
  if (!net.has_destinations()) throw ContractError("cell_traffic: destinations not assigned");
  const HeadAssignment heads = assign_heads(tess, net);
  std::vector<std::size_t> traffic(tess.cell_count(), 0);
  std::vector<std::size_t> stamp(tess.cell_count(), PointIndex::npos);
  for (std::size_t s = 0; s < net.size(); ++s) {
    for (std::size_t c : geodesic_cell_route(tess, net, heads, s).cells) {
      if (stamp[c] == s) continue;
      stamp[c] = s;
      ++traffic[c];
    }
  }
  return traffic;
}

std::size_t cells_on_polyline(const Tessellation& tess, const Network& net, std::span<const std::size_t> nodes) {
  std::vector<std::size_t> cells;
  if (nodes.size() == 1) cells.push_back(tess.cell_of(net.nodes[nodes[0]]));
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    sample_geodesic(tess.sphere(), net.nodes[nodes[k - 1]], net.nodes[nodes[k]], 0.25 * tess.rho(),
                    [&](const SpherePoint& p) {
                      const std::size_t c = tess.cell_of(p);
                      if (cells.empty() || cells.back() != c) cells.push_back(c);
                    });
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

Lemma3Audit lemma3_audit(const Tessellation& tess, const Network& net, const Route& route) {
  if (!(net.sphere() == tess.sphere())) {
    throw ContractError("lemma3_audit: network and tessellation live on different spheres");
  }
  Lemma3Audit a;
  a.cells_hit = cells_on_polyline(tess, net, route.nodes);
  const double n = static_cast<double>(tess.n());
  const double log_n = std::log(n);
  // The bound is stated for unit area; express L in unit-area lengths.
  const double length_unit = route.length / std::sqrt(tess.sphere().area());
  a.cell_bound = 32.0 + 16.0 * length_unit * std::sqrt(n) /
                            (10.0 * std::sqrt(std::numbers::pi) * std::sqrt(tess.c_area() * log_n / 100.0));
  a.route_nodes = route.nodes.size();
  a.node_bound = 1.5 * tess.c_area() * log_n * static_cast<double>(a.cells_hit);
  a.passed = static_cast<double>(a.cells_hit) <= a.cell_bound &&
             static_cast<double>(a.route_nodes) <= a.node_bound;
  a.extrapolated = tess.c_area() != 100.0;
  return a;
}

}  // namespace uwbcap
