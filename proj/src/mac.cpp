#include "uwbcap/mac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uwbcap/errors.hpp"
#include "uwbcap/spatial_index.hpp"

namespace uwbcap {

double ScheduleSpec::total_bandwidth() const {
  return std::accumulate(band_widths.begin(), band_widths.end(), 0.0);
}

double ScheduleSpec::link_power() const {
  double p = 0.0;
  for (std::size_t k = 0; k < bands(); ++k) {
    for (std::size_t t = 0; t < slots(); ++t) p += time_fractions[t] * power_at(k, t);
  }
  return p;
}

void ScheduleSpec::validate(const Bandwidth& system) const {
  if (time_fractions.empty() || band_widths.empty()) throw ContractError("schedule: empty partition");
  if (power.size() != bands() * slots()) throw ContractError("schedule: power matrix must be K x T");
  for (double f : time_fractions) {
    if (!(f > 0.0)) throw ContractError("schedule: time fractions must be positive");
  }
  for (double w : band_widths) {
    if (!(w > 0.0)) throw ContractError("schedule: bands must be positive");
  }
  for (double p : power) {
    if (!(p >= 0.0)) throw ContractError("schedule: powers must be nonnegative");
  }
  const double fsum = std::accumulate(time_fractions.begin(), time_fractions.end(), 0.0);
  if (std::abs(fsum - 1.0) > 1e-12) throw ContractError("schedule: time fractions must sum to 1");
  if (!system.is_infinite()) {
    const double w = system.hz();
    if (std::abs(total_bandwidth() - w) > 1e-12 * w) {
      throw ContractError("schedule: bands must sum to the system bandwidth");
    }
  }
}

double evaluate_tdma_fdma(const Link& link, const ScheduleSpec& spec, const PhyParams& phy) {
  spec.validate(phy.bandwidth);
  const double accounted = spec.link_power();
  if (std::abs(accounted - link.power) > 1e-12 * std::max(1.0, std::abs(link.power))) {
    throw ContractError("schedule: sum_{k,t} f_t P^{k,t} must equal the link power");
  }
  double rate = 0.0;
  for (std::size_t k = 0; k < spec.bands(); ++k) {
    const double wk = spec.band_widths[k];
    for (std::size_t t = 0; t < spec.slots(); ++t) {
      rate += spec.time_fractions[t] * wk * std::log1p(spec.power_at(k, t) * link.gain / (phy.n0 * wk));
    }
  }
  return rate;
}

ScheduleSpec random_schedule(Rng& rng, std::size_t bands, std::size_t slots, double link_power,
                             const Bandwidth& system) {
  if (bands == 0 || slots == 0) throw DomainError("random_schedule: need K, T >= 1");
  if (link_power < 0.0) throw DomainError("random_schedule: negative power");
  auto positive = [&] { return 0.05 + rng.uniform(); };
  ScheduleSpec s;
  double fsum = 0.0;
  for (std::size_t t = 0; t < slots; ++t) fsum += s.time_fractions.emplace_back(positive());
  for (auto& f : s.time_fractions) f /= fsum;
  const double total = system.is_infinite() ? std::pow(10.0, -2.0 + 6.0 * rng.uniform()) : system.hz();
  double wsum = 0.0;
  for (std::size_t k = 0; k < bands; ++k) wsum += s.band_widths.emplace_back(positive());
  for (auto& w : s.band_widths) w *= total / wsum;
  s.power.resize(bands * slots);
  for (auto& p : s.power) p = rng.uniform() < 0.2 ? 0.0 : positive();
  if (link_power > 0.0 && s.link_power() == 0.0) s.power[0] = 1.0;
  const double scale = s.link_power() > 0.0 ? link_power / s.link_power() : 0.0;
  for (auto& p : s.power) p *= scale;
  return s;
}

double theorem2_gap(const Link& link, const ScheduleSpec& spec, const PhyParams& phy) {
  return rate_infinite_bw(link.power, link.gain, phy.n0) - evaluate_tdma_fdma(link, spec, phy);
}

double required_bandwidth(const Network& net, const PhyParams& phy, double eps) {
  if (!(eps > 0.0)) throw DomainError("required_bandwidth: eps must be positive");
  const auto interference = total_interference(net, phy);
  const double worst = *std::max_element(interference.begin(), interference.end());
  return worst / (eps * phy.n0);
}

FdmaPlan fdma_per_node_assignment(std::size_t n, double alpha, double c) {
  if (n < 1) throw DomainError("fdma: need at least one node");
  if (!(c > 0.0)) throw DomainError("fdma: c must be positive");
  FdmaPlan plan;
  plan.nodes = n;
  plan.per_node_bandwidth = c * std::pow(static_cast<double>(n), 0.5 * alpha);
  plan.total_bandwidth = plan.per_node_bandwidth * static_cast<double>(n);
  return plan;
}

double fdma_rate_ratio(const FdmaPlan& plan, double power, double d, const PhyParams& phy) {
  const double g = gain(d, phy.alpha);
  const double ideal = rate_infinite_bw(power, g, phy.n0);
  if (ideal == 0.0) return 1.0;
  return rate_finite_bw(power, g, phy.n0, plan.per_node_bandwidth) / ideal;
}

double calibrate_fdma_constant(std::size_t n, double worst_hop, double delta, const PhyParams& phy) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("calibrate_fdma_constant: delta in (0,1)");
  // ln(1+y)/y decreases in y; find y* with ln(1+y*)/y* = 1 - delta.
  auto ratio = [](double y) { return std::log1p(y) / y; };
  double lo = 0.0, hi = 1.0;
  while (ratio(hi) > 1.0 - delta) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid > 0.0 && ratio(mid) >= 1.0 - delta ? lo : hi) = mid;
  }
  const double snr_limit = lo;
  const double x = rate_infinite_bw(phy.p0, gain(worst_hop, phy.alpha), phy.n0);
  const double per_node = x / snr_limit;
  return per_node / std::pow(static_cast<double>(n), 0.5 * phy.alpha);
}

std::vector<std::vector<std::size_t>> locality_graph(const Network& net, double radius) {
  const std::size_t n = net.size();
  std::vector<std::vector<std::size_t>> adj(n);
  if (!(radius > 0.0)) return adj;
  const Sphere sphere = net.sphere();
  const PointIndex index(net.nodes);
  const double max_angle = sphere.to_angle(radius);
  for (std::size_t i = 0; i < n; ++i) {
    index.for_each_within(net.nodes[i], max_angle, [&](std::size_t j, double) {
      if (j != i) adj[i].push_back(j);
    });
    std::sort(adj[i].begin(), adj[i].end());
  }
  return adj;
}

ColoringResult greedy_coloring(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  ColoringResult r;
  r.color.assign(n, unset);
  std::vector<std::size_t> seen_at;  // seen_at[c] == v marks color c as used around v
  for (std::size_t v : order) {
    r.max_degree = std::max(r.max_degree, adj[v].size());
    for (std::size_t u : adj[v]) {
      const std::size_t c = r.color[u];
      if (c == unset) continue;
      if (c >= seen_at.size()) seen_at.resize(c + 1, unset);
      seen_at[c] = v;
    }
    std::size_t c = 0;
    while (c < seen_at.size() && seen_at[c] == v) ++c;
    r.color[v] = c;
    r.color_count = std::max(r.color_count, c + 1);
  }
  return r;
}

bool coloring_valid(const std::vector<std::vector<std::size_t>>& adj, const ColoringResult& c) {
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (std::size_t u : adj[v]) {
      if (c.color[u] == c.color[v]) return false;
    }
  }
  return true;
}

ColoringResult hybrid_coloring(const Network& net, double c11) {
  if (net.area.kind != AreaMode::Kind::scaled) {
    throw ContractError("hybrid_coloring: requires an area-scaled network");
  }
  if (!(c11 > 0.0)) throw DomainError("hybrid_coloring: c11 must be positive");
  const double radius = c11 * std::sqrt(std::log(static_cast<double>(net.size())));
  ColoringResult r = greedy_coloring(locality_graph(net, radius));
  r.locality_radius = radius;
  return r;
}

std::vector<AuditRecord> cochannel_interference_audit(const Network& net, const ColoringResult& coloring,
                                                      const PhyParams& phy) {
  if (!(phy.alpha >= 2.0)) {
    throw ContractError("cochannel audit: bounded interference needs alpha >= 2");
  }
  const std::size_t n = net.size();
  std::vector<std::vector<std::size_t>> classes(coloring.color_count);
  for (std::size_t i = 0; i < n; ++i) classes.at(coloring.color[i]).push_back(i);

  const Sphere sphere = net.sphere();
  std::vector<AuditRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].node = i;
    out[i].band = coloring.color[i];
  }
  for (const auto& members : classes) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const std::size_t i = members[a], j = members[b];
        const double rx = phy.p0 * gain(sphere.distance(net.nodes[i], net.nodes[j]), phy.alpha);
        out[i].interference += rx;
        out[j].interference += rx;
      }
    }
  }
  if (!phy.bandwidth.is_infinite()) {
    const double noise = phy.n0 * phy.bandwidth.hz();
    for (auto& r : out) r.sinr_degradation = 1.0 + r.interference / noise;
  }
  return out;
}

double max_interference(const std::vector<AuditRecord>& records) {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.interference);
  return m;
}

}  // namespace uwbcap
