#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uwbcap/netgen.hpp"
#include "uwbcap/tessellate.hpp"

namespace uwbcap {

/// Edge set used by minimum-power routing.
///  complete  - every pair of nodes (exact for any alpha >= 1)
///  gabriel   - pairs uv with no node w such that d(u,w)^2 + d(w,v)^2 < d(u,v)^2;
///              keeps every minimum-power path when alpha >= 2
///  automatic - complete up to kCompleteLimit nodes or when alpha < 2, else gabriel
enum class Pruning { complete, gabriel, automatic };

inline constexpr std::size_t kCompleteLimit = 2048;

std::string_view to_string(Pruning p);
Pruning parse_pruning(std::string_view text);
/// Resolves `automatic`; throws ContractError for gabriel with alpha < 2.
Pruning resolve_pruning(Pruning p, std::size_t n, double alpha);

/// Relative tolerance under which two route costs count as tied.
inline constexpr double kCostTieTolerance = 1e-12;

struct Route {
  std::vector<std::size_t> nodes;  ///< source first, destination last
  std::vector<double> hops;        ///< hop lengths
  double length = 0.0;             ///< L: sum of hop lengths
  double direct = 0.0;             ///< D: source-destination distance
  double cost = 0.0;               ///< sum of hop^alpha

  std::size_t source() const { return nodes.front(); }
  std::size_t destination() const { return nodes.back(); }
  std::size_t hop_count() const { return hops.size(); }
};

/// Fills hop lengths, L, D and cost for a node sequence.
Route make_route(const Network& net, std::vector<std::size_t> nodes, double alpha);

/// Route ordering: lower cost (outside the tie tolerance), then fewer hops,
/// then lexicographically smaller node sequence. Returns <0, 0, >0.
int compare_routes(double cost_a, std::span<const std::size_t> path_a, double cost_b,
                   std::span<const std::size_t> path_b);

/// Spherical Gabriel graph (see Pruning::gabriel). Candidate pairs are limited
/// to twice a certified covering radius of the node set, outside of which no
/// pair can be unblocked.
std::vector<std::vector<std::size_t>> gabriel_graph(const Network& net);

/// Upper bound on max over sphere points of the distance to the nearest node,
/// certified over a cube-map cell partition of the sphere.
double covering_radius_bound(const Network& net);

/// Scratch buffers for repeated route queries on one router; not shareable
/// across threads.
struct RouteWorkspace {
  std::vector<double> cost;
  std::vector<std::uint32_t> hops;
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> seen;
  std::vector<std::uint32_t> closed;
  std::uint32_t generation = 0;
};

/// Single-source label-setting minimum-power router over a fixed network.
///
/// Complete mode runs array-scan Dijkstra over a precomputed cost matrix.
/// Gabriel mode runs heap-based search over the sparse graph, guided by
/// landmark lower bounds on larger networks.
class MinPowerRouter {
 public:
  MinPowerRouter(const Network& net, double alpha, Pruning pruning = Pruning::automatic);

  Pruning pruning() const { return mode_; }
  std::size_t edge_count() const;
  double alpha() const { return alpha_; }

  /// Minimum-power route from src to its destination.
  Route route(std::size_t src, RouteWorkspace& ws) const;
  Route route(std::size_t src) const;
  Route route(std::size_t src, std::size_t dst, RouteWorkspace& ws) const;

  /// Routes for every source, in source order.
  std::vector<Route> all_routes() const;

 private:
  double edge_cost(std::size_t u, std::size_t v) const;
  void prepare(RouteWorkspace& ws) const;
  Route dense_search(std::size_t src, std::size_t dst, RouteWorkspace& ws) const;
  Route sparse_search(std::size_t src, std::size_t dst, RouteWorkspace& ws) const;
  void build_landmarks();
  bool relax(std::size_t u, std::size_t v, double w, RouteWorkspace& ws) const;
  std::vector<std::size_t> path_to(std::size_t v, const RouteWorkspace& ws) const;

  const Network* net_;
  Sphere sphere_;
  double alpha_;
  Pruning mode_;
  std::vector<double> matrix_;  // complete mode, n <= kMatrixLimit
  std::vector<std::uint32_t> adj_start_;
  std::vector<std::uint32_t> adj_;
  std::vector<double> adj_cost_;
  std::vector<std::vector<double>> landmark_cost_;
};

Route min_power_route(const Network& net, std::size_t src, double alpha,
                      Pruning pruning = Pruning::automatic);

/// Exhaustive search over all simple paths (n <= 10), same ordering rule.
Route brute_force_route(const Network& net, std::size_t src, double alpha);

/// Cell of every node and the relay (head) node of every cell: the node of
/// the cell nearest its generator, or for an empty cell the node nearest the
/// generator overall (flagged as a fallback).
struct HeadAssignment {
  std::vector<std::size_t> cell_of_node;
  std::vector<std::size_t> head;
  std::vector<bool> fallback;
  std::size_t fallback_count() const;
};

HeadAssignment assign_heads(const Tessellation& tess, const Network& net);

struct CellRoute {
  std::vector<std::size_t> cells;  ///< cells met along the geodesic, consecutive duplicates removed
  std::vector<std::size_t> heads;  ///< head node of each cell
};

/// Cells met by the source-destination geodesic, sampled every rho/4.
CellRoute geodesic_cell_route(const Tessellation& tess, const Network& net, const HeadAssignment& heads,
                              std::size_t src);
CellRoute geodesic_cell_route(const Tessellation& tess, const Network& net, std::size_t src);

/// Number of source-destination geodesics meeting each cell.
std::vector<std::size_t> cell_traffic(const Tessellation& tess, const Network& net);

/// Distinct cells met by a polyline of geodesic hops sampled every rho/4.
std::size_t cells_on_polyline(const Tessellation& tess, const Network& net,
                              std::span<const std::size_t> nodes);

struct Lemma3Audit {
  std::size_t cells_hit = 0;
  double cell_bound = 0.0;   ///< 32 + 16 L sqrt(n) / (10 sqrt(pi) sqrt(c_area log n / 100))
  std::size_t route_nodes = 0;
  double node_bound = 0.0;   ///< 1.5 c_area log n * cells_hit
  bool passed = false;
  /// The c_area scaling of the bound is an extrapolation when c_area != 100.
  bool extrapolated = false;
};

Lemma3Audit lemma3_audit(const Tessellation& tess, const Network& net, const Route& route);

}  // namespace uwbcap
