#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "uwbcap/netgen.hpp"
#include "uwbcap/phy.hpp"
#include "uwbcap/rng.hpp"

namespace uwbcap {

/// A single link: total transmit power P_ij and channel gain g_ij.
struct Link {
  double power = 0.0;
  double gain = 1.0;
};

/// Generic TDMA/FDMA partition: K bands, T slots, per-(band, slot) power.
struct ScheduleSpec {
  std::vector<double> time_fractions;  ///< f_t, sum 1
  std::vector<double> band_widths;     ///< W_k, sum W
  std::vector<double> power;           ///< P^{k,t}, row-major [k * T + t]

  std::size_t bands() const { return band_widths.size(); }
  std::size_t slots() const { return time_fractions.size(); }
  double power_at(std::size_t k, std::size_t t) const { return power[k * slots() + t]; }
  double total_bandwidth() const;
  /// sum_{k,t} f_t P^{k,t}
  double link_power() const;

  /// Throws ContractError on a malformed partition: nonpositive parts, time
  /// fractions not summing to 1 within 1e-12, negative powers, or (when the
  /// system bandwidth is finite) bands not summing to it within 1e-12 relative.
  void validate(const Bandwidth& system) const;
};

/// Interference-free upper bound on the TDMA/FDMA link rate:
/// sum_k sum_t f_t W_k ln(1 + P^{k,t} g / (N0 W_k)).
/// The schedule's power accounting must match link.power within 1e-12 relative.
double evaluate_tdma_fdma(const Link& link, const ScheduleSpec& spec, const PhyParams& phy);

/// Random K x T partition whose power accounting equals `link_power`. With an
/// infinite system bandwidth the total band is drawn log-uniformly in [1e-2, 1e4].
ScheduleSpec random_schedule(Rng& rng, std::size_t bands, std::size_t slots, double link_power,
                             const Bandwidth& system);

/// CDMA rate P g / N0 minus the TDMA/FDMA rate; nonnegative up to rounding.
double theorem2_gap(const Link& link, const ScheduleSpec& spec, const PhyParams& phy);

/// Smallest W with worst-case total interference <= eps N0 W, every node
/// transmitting at P0 over the full band. The interference does not depend on
/// W, so the answer is max_j I_j / (eps N0).
double required_bandwidth(const Network& net, const PhyParams& phy, double eps);

/// Per-node FDMA: node i owns [i Wn, (i+1) Wn) with Wn = c n^{alpha/2}.
struct FdmaPlan {
  std::size_t nodes = 0;
  double per_node_bandwidth = 0.0;
  double total_bandwidth = 0.0;

  std::pair<double, double> band(std::size_t i) const {
    return {static_cast<double>(i) * per_node_bandwidth, static_cast<double>(i + 1) * per_node_bandwidth};
  }
};

FdmaPlan fdma_per_node_assignment(std::size_t n, double alpha, double c = 1.0);

/// Finite-band rate over the infinite-band rate for a hop of length d at the
/// given power, inside one FDMA band.
double fdma_rate_ratio(const FdmaPlan& plan, double power, double d, const PhyParams& phy);

/// Smallest c such that fdma_rate_ratio >= 1 - delta for a hop of length
/// `worst_hop` at power P0. Longer hops have higher ratios.
double calibrate_fdma_constant(std::size_t n, double worst_hop, double delta, const PhyParams& phy);

struct ColoringResult {
  std::vector<std::size_t> color;
  std::size_t color_count = 0;
  double locality_radius = 0.0;
  std::size_t max_degree = 0;
};

/// Locality graph G': nodes adjacent when within `radius` (arc length).
std::vector<std::vector<std::size_t>> locality_graph(const Network& net, double radius);

/// Greedy coloring of G' with radius c11 sqrt(log n), vertices taken by
/// descending degree then index, each getting the smallest free color.
/// Requires an area-scaled network and c11 > 0.
ColoringResult hybrid_coloring(const Network& net, double c11);

/// Greedy coloring of an arbitrary adjacency list (same vertex order rule).
ColoringResult greedy_coloring(const std::vector<std::vector<std::size_t>>& adj);

/// True when no edge of `adj` joins two vertices of the same color.
bool coloring_valid(const std::vector<std::vector<std::size_t>>& adj, const ColoringResult& c);

struct AuditRecord {
  std::size_t node = 0;
  std::size_t band = 0;
  double interference = 0.0;       ///< W, from same-color transmitters at P0
  double sinr_degradation = 1.0;   ///< SNR / SINR = 1 + I / (N0 W0)
};

/// Co-channel interference at every node: each node transmits at P0 in the
/// band of its color; requires alpha >= 2. The per-band width W0 is
/// phy.bandwidth (degradation reported as 1 when infinite).
std::vector<AuditRecord> cochannel_interference_audit(const Network& net, const ColoringResult& coloring,
                                                      const PhyParams& phy);

double max_interference(const std::vector<AuditRecord>& records);

}  // namespace uwbcap
