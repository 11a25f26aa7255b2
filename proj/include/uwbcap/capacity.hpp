#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uwbcap/netgen.hpp"
#include "uwbcap/phy.hpp"
#include "uwbcap/routing.hpp"
#include "uwbcap/tessellate.hpp"

namespace uwbcap {

/// r^u = n P0 / (N0 sum_i cost(R_i)): exact uniform throughput under the
/// total-power relaxation, one minimum-power route per source.
/// Requires infinite bandwidth; a zero-cost route is a ContractError.
double relaxed_uniform_throughput(const Network& net, const PhyParams& phy, std::span<const Route> routes);

struct AchievableResult {
  double rate = 0.0;
  /// sum of hop^alpha over every transmission a node makes, one unit of rate per route
  std::vector<double> load;
  /// load * rate * N0; the binding node spends exactly P0
  std::vector<double> power;
  std::size_t binding_node = 0;
  std::size_t binding_cell = 0;

  std::size_t hop_count = 0;
  double max_hop = 0.0;
  /// hops longer than 8 rho + rho/2 with no fallback head at either end
  std::size_t hop_violations = 0;
  /// hops longer than 16 rho through a fallback head (reported, not fatal)
  std::size_t fallback_hops = 0;
  std::size_t fallback_cells = 0;
};

/// Relay scheme: each source sends to the head of its cell, heads forward
/// along the cells met by the source-destination geodesic, the last head
/// delivers. Repeated nodes are cut out of the chain. The rate is
/// P0 / (N0 max_i load_i).
AchievableResult achievable_uniform_throughput(const Network& net, const Tessellation& tess,
                                               const PhyParams& phy);

struct CapacityOptions {
  PhyParams phy;
  double c_area = 5.0;
  AreaMode area;
  Pruning pruning = Pruning::automatic;
  bool achievable = true;
};

struct CapacityReport {
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double alpha = 2.0;
  double c_area = 0.0;
  double p0 = 1.0;
  double r_relaxed = 0.0;
  /// absent when the relay scheme was not run
  std::optional<AchievableResult> achievable;
  double total_route_cost = 0.0;
  /// min over routes of L - D
  double min_length_slack = 0.0;
  double max_node_power = 0.0;
  std::size_t route_hops = 0;

  double r_achievable() const { return achievable ? achievable->rate : 0.0; }
  /// r_achievable <= r_relaxed, node power <= P0 + 1e-9, L >= D
  bool orderings_hold() const;
  /// orderings plus the relay hop-length audit
  bool audits_pass() const;
};

/// Network, routes and (optionally) tessellation plus relay scheme for one
/// replicate seed.
CapacityReport run_capacity(std::size_t n, std::uint64_t seed, const CapacityOptions& options);

/// Same, over a given network (destinations assigned). `tess_seed` drives the
/// tessellation.
CapacityReport run_capacity(const Network& net, std::uint64_t tess_seed, const CapacityOptions& options);

struct BoundConstants {
  double c4 = 1.0;
  double c7 = 1.0;
  double big_c5 = 1.0;
  double big_c7 = 1.0;
};

struct BoundCurves {
  double upper = 0.0;
  double lower = 0.0;
};

/// unit:   upper c4 P0 (n log n)^{(a-1)/2},   lower c7 n^{(a-1)/2} / (log n)^{(a+1)/2}
/// scaled: upper C5 P0 (log n)^{(a-1)/2} / sqrt(n),   lower C7 / (sqrt(n) (log n)^{(a+1)/4})
/// n >= 3.
BoundCurves bound_curves(std::size_t n, const PhyParams& phy, AreaMode::Kind mode,
                         const BoundConstants& k = {});

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual_rms = 0.0;
  std::vector<double> residuals;
};

/// Least squares on (log n, log r). At least 4 points; nonpositive r is a
/// ContractError.
ScalingFit fit_scaling_exponent(std::span<const double> n, std::span<const double> r);

double median(std::vector<double> values);

struct ScalingPoint {
  std::size_t n = 0;
  double median_relaxed = 0.0;
  double median_achievable = 0.0;
  BoundCurves bounds;
};

struct ScalingReport {
  std::vector<CapacityReport> runs;  ///< ordered by (n, seed index)
  std::vector<ScalingPoint> points;
  ScalingFit fit_relaxed;
  std::optional<ScalingFit> fit_achievable;
};

/// Medians per n and exponent fits over already computed runs.
ScalingReport summarize_scaling(std::vector<CapacityReport> runs, const PhyParams& phy, AreaMode::Kind mode,
                                bool with_achievable);

/// run_capacity over ladder x replicate_seed(master, 0..seeds-1), using up to
/// `workers` threads (0 = hardware concurrency). Output order does not depend
/// on the worker count.
ScalingReport run_scaling(std::span<const std::size_t> ladder, std::size_t seeds, std::uint64_t master,
                          const CapacityOptions& options, unsigned workers = 0);

bool strictly_increasing(std::span<const double> v);
bool strictly_decreasing(std::span<const double> v);

}  // namespace uwbcap
