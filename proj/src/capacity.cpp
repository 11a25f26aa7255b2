#include "uwbcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "uwbcap/errors.hpp"
#include "uwbcap/parallel.hpp"

namespace uwbcap {

namespace {

double hop_cost(double d, double alpha) { return alpha == 2.0 ? d * d : std::pow(d, alpha); }

// Relay chain src -> heads -> dst without consecutive repeats or loops.
std::vector<std::size_t> relay_chain(const CellRoute& cells, std::size_t src, std::size_t dst) {
  std::vector<std::size_t> chain;
  std::unordered_map<std::size_t, std::size_t> position;
  auto push = [&](std::size_t v) {
    if (auto it = position.find(v); it != position.end()) {
      for (std::size_t k = it->second + 1; k < chain.size(); ++k) position.erase(chain[k]);
      chain.resize(it->second + 1);
      return;
    }
    position.emplace(v, chain.size());
    chain.push_back(v);
  };
  push(src);
  for (std::size_t h : cells.heads) push(h);
  push(dst);
  return chain;
}

}  // namespace

double relaxed_uniform_throughput(const Network& net, const PhyParams& phy, std::span<const Route> routes) {
  if (!phy.bandwidth.is_infinite()) throw ContractError("relaxed throughput: requires infinite bandwidth");
  if (routes.size() != net.size()) throw ContractError("relaxed throughput: need one route per source");
  double total = 0.0;
  for (const auto& r : routes) {
    if (!(r.cost > 0.0)) throw ContractError("relaxed throughput: zero-cost route");
    total += r.cost;
  }
  return static_cast<double>(net.size()) * phy.p0 / (phy.n0 * total);
}

AchievableResult achievable_uniform_throughput(const Network& net, const Tessellation& tess, const PhyParams& phy) {
  if (!net.has_destinations()) throw ContractError("achievable throughput: destinations not assigned");
  const std::size_t n = net.size();
  const Sphere sphere = net.sphere();
  const HeadAssignment heads = assign_heads(tess, net);
  const double rho = tess.rho();

  std::vector<bool> fallback_node(n, false);
  for (std::size_t k = 0; k < tess.cell_count(); ++k) {
    if (heads.fallback[k]) fallback_node[heads.head[k]] = true;
  }

  AchievableResult res;
  res.load.assign(n, 0.0);
  res.fallback_cells = heads.fallback_count();
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t dst = net.dest[s];
    const auto chain = relay_chain(geodesic_cell_route(tess, net, heads, s), s, dst);
    for (std::size_t k = 1; k < chain.size(); ++k) {
      const std::size_t u = chain[k - 1], v = chain[k];
      const double d = sphere.distance(net.nodes[u], net.nodes[v]);
      res.load[u] += hop_cost(d, phy.alpha);
      ++res.hop_count;
      res.max_hop = std::max(res.max_hop, d);
      const bool via_fallback = fallback_node[u] || fallback_node[v];
      if (via_fallback) {
        if (d > 16.0 * rho) ++res.fallback_hops;
      } else if (d > 8.5 * rho) {
        ++res.hop_violations;
      }
    }
  }
  const auto worst = std::max_element(res.load.begin(), res.load.end());
  if (!(*worst > 0.0)) throw ContractError("achievable throughput: no transmissions");
  res.binding_node = static_cast<std::size_t>(worst - res.load.begin());
  res.binding_cell = heads.cell_of_node[res.binding_node];
  res.rate = phy.p0 / (phy.n0 * *worst);
  res.power.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.power[i] = res.rate * phy.n0 * res.load[i];
  return res;
}

bool CapacityReport::orderings_hold() const {
  if (min_length_slack < 0.0) return false;
  if (!achievable) return true;
  return achievable->rate <= r_relaxed && max_node_power <= p0 + 1e-9;
}

bool CapacityReport::audits_pass() const {
  return orderings_hold() && (!achievable || achievable->hop_violations == 0);
}

CapacityReport run_capacity(const Network& net, std::uint64_t tess_seed, const CapacityOptions& options) {
  options.phy.validate();
  CapacityReport rep;
  rep.n = net.size();
  rep.seed = net.seed;
  rep.alpha = options.phy.alpha;
  rep.c_area = options.c_area;
  rep.p0 = options.phy.p0;

  const MinPowerRouter router(net, options.phy.alpha, options.pruning);
  const auto routes = router.all_routes();
  rep.r_relaxed = relaxed_uniform_throughput(net, options.phy, routes);
  rep.min_length_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : routes) {
    rep.total_route_cost += r.cost;
    rep.route_hops += r.hop_count();
    // Summation order can cost a few ulps on near-straight routes.
    rep.min_length_slack = std::min(rep.min_length_slack, r.length - r.direct + 1e-12 * r.direct);
  }
  if (options.achievable) {
    Rng rng(tess_seed);
    const Tessellation tess = build_tessellation(net.size(), options.c_area, rng, net.sphere());
    rep.achievable = achievable_uniform_throughput(net, tess, options.phy);
    rep.max_node_power = *std::max_element(rep.achievable->power.begin(), rep.achievable->power.end());
  }
  return rep;
}

CapacityReport run_capacity(std::size_t n, std::uint64_t seed, const CapacityOptions& options) {
  const Network net = make_network(n, seed, options.area);
  return run_capacity(net, stream_seed(seed, Stream::tessellation), options);
}

BoundCurves bound_curves(std::size_t n, const PhyParams& phy, AreaMode::Kind mode, const BoundConstants& k) {
  if (n < 3) throw DomainError("bound_curves: n >= 3 required");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double a = phy.alpha;
  BoundCurves b;
  if (mode == AreaMode::Kind::unit) {
    b.upper = k.c4 * phy.p0 * std::pow(nn * ln, 0.5 * (a - 1.0));
    b.lower = k.c7 * std::pow(nn, 0.5 * (a - 1.0)) / std::pow(ln, 0.5 * (a + 1.0));
  } else {
    b.upper = k.big_c5 * phy.p0 * std::pow(ln, 0.5 * (a - 1.0)) / std::sqrt(nn);
    b.lower = k.big_c7 / (std::sqrt(nn) * std::pow(ln, 0.25 * (a + 1.0)));
  }
  return b;
}

ScalingFit fit_scaling_exponent(std::span<const double> n, std::span<const double> r) {
  if (n.size() != r.size()) throw DomainError("fit: size mismatch");
  if (n.size() < 4) throw DomainError("fit: at least 4 grid points required");
  const std::size_t m = n.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n[i] > 0.0)) throw DomainError("fit: grid values must be positive");
    if (!(r[i] > 0.0)) throw ContractError("fit: nonpositive throughput");
    x[i] = std::log(n[i]);
    y[i] = std::log(r[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit: grid values must not all be equal");
  ScalingFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    f.residuals.push_back(e);
    ssr += e * e;
  }
  f.residual_rms = std::sqrt(ssr / static_cast<double>(m));
  f.slope_stderr = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  return f;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

bool strictly_increasing(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
}

bool strictly_decreasing(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a > b); }) == v.end();
}

ScalingReport summarize_scaling(std::vector<CapacityReport> runs, const PhyParams& phy, AreaMode::Kind mode,
                                bool with_achievable) {
  std::stable_sort(runs.begin(), runs.end(),
                   [](const CapacityReport& a, const CapacityReport& b) { return a.n < b.n; });
  ScalingReport rep;
  std::vector<double> grid, relaxed, achievable;
  for (std::size_t i = 0; i < runs.size();) {
    std::size_t j = i;
    std::vector<double> rr, ra;
    while (j < runs.size() && runs[j].n == runs[i].n) {
      rr.push_back(runs[j].r_relaxed);
      ra.push_back(runs[j].r_achievable());
      ++j;
    }
    ScalingPoint p;
    p.n = runs[i].n;
    p.median_relaxed = median(rr);
    p.median_achievable = median(ra);
    p.bounds = bound_curves(p.n, phy, mode);
    rep.points.push_back(p);
    grid.push_back(static_cast<double>(p.n));
    relaxed.push_back(p.median_relaxed);
    achievable.push_back(p.median_achievable);
    i = j;
  }
  rep.fit_relaxed = fit_scaling_exponent(grid, relaxed);
  if (with_achievable) rep.fit_achievable = fit_scaling_exponent(grid, achievable);
  rep.runs = std::move(runs);
  return rep;
}

ScalingReport run_scaling(std::span<const std::size_t> ladder, std::size_t seeds, std::uint64_t master,
                          const CapacityOptions& options, unsigned workers) {
  if (!std::is_sorted(ladder.begin(), ladder.end()) ||
      std::adjacent_find(ladder.begin(), ladder.end()) != ladder.end()) {
    throw DomainError("scaling: ladder must be strictly increasing");
  }
  if (seeds == 0) throw DomainError("scaling: need at least one seed");
  std::vector<CapacityReport> runs(ladder.size() * seeds);
  parallel_for(runs.size(), workers, [&](std::size_t job) {
    const std::size_t n = ladder[job / seeds];
    runs[job] = run_capacity(n, replicate_seed(master, job % seeds), options);
    runs[job].replicate = job % seeds;
  });
  return summarize_scaling(std::move(runs), options.phy, options.area.kind, options.achievable);
}

}  // namespace uwbcap
