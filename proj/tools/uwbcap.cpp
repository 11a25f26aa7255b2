// uwbcap: batch experiment driver.
//
// Exit codes: 0 ok, 1 usage, 2 regime error, 3 invariant-audit failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uwbcap/capacity.hpp"
#include "uwbcap/errors.hpp"
#include "uwbcap/io.hpp"
#include "uwbcap/mac.hpp"
#include "uwbcap/netgen.hpp"
#include "uwbcap/phy.hpp"
#include "uwbcap/routing.hpp"
#include "uwbcap/tessellate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace uwbcap;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRegime = 2;
constexpr int kExitAudit = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::size_t n = 1024;
  std::string ladder;
  std::size_t seeds = 1;
  std::uint64_t seed = 1;
  double alpha = 2.0;
  double p0 = 1.0;
  double n0 = 1.0;
  std::string bandwidth = "inf";
  double c_area = kDefaultCellArea;
  std::string area_mode = "unit";
  double a0 = 1.0;
  std::string pruning = "auto";
  std::string out = "uwbcap-out";
  std::string config;
  std::string network;
  std::string fixture;
  double eps = 0.01;
  double c11 = 2.0;
  std::size_t links = 1000;
  bool relaxed_only = false;
  unsigned workers = 0;

  // derived
  std::vector<std::size_t> grid;
  PhyParams phy;
  AreaMode area;
  Pruning prune = Pruning::automatic;
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config: line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void add_options(CLI::App* sub, Config& c) {
  auto opt = [&](const std::string& name, auto& var, const std::string& help) {
    std::string env = "UWBCAP_" + name;
    for (auto& ch : env) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return sub->add_option("--" + name, var, help)->envname(env);
  };
  opt("n", c.n, "number of nodes");
  opt("ladder", c.ladder, "comma-separated n ladder, strictly increasing");
  opt("seeds", c.seeds, "replicates per n");
  opt("seed", c.seed, "master seed");
  opt("alpha", c.alpha, "distance-loss exponent (>= 1)");
  opt("p0", c.p0, "per-node power budget P0");
  opt("n0", c.n0, "noise spectral density N0");
  opt("bandwidth", c.bandwidth, "inf or bandwidth in Hz");
  opt("c-area", c.c_area, "cell-area constant");
  opt("area-mode", c.area_mode, "unit or scaled");
  opt("a0", c.a0, "area per node in scaled mode");
  opt("pruning", c.pruning, "complete, gabriel or auto");
  opt("out", c.out, "output directory");
  opt("network", c.network, "read the network from this file instead of generating it");
  opt("eps", c.eps, "interference fraction for required bandwidth");
  opt("c11", c.c11, "locality radius constant of the hybrid MAC");
  opt("links", c.links, "random links in the TDMA/FDMA gap sweep");
  opt("workers", c.workers, "worker threads (0 = all cores)");
  sub->add_flag("--relaxed-only", c.relaxed_only, "skip the relay scheme")->envname("UWBCAP_RELAXED_ONLY");
  sub->add_option("--config", c.config, "key = value config file (flags and env win)");
}

void apply_config(CLI::App* sub, const Config& c) {
  if (c.config.empty()) return;
  for (const auto& [key, value] : read_config_file(c.config)) {
    if (key == "config") continue;
    CLI::Option* o = nullptr;
    try {
      o = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("config: unknown key '" + key + "'");
    }
    if (o->count() != 0) continue;
    o->add_result(value);
    try {
      o->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

void finalize(Config& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string("--") + name + " must be positive");
  };
  positive(c.p0, "p0");
  positive(c.n0, "n0");
  positive(c.c_area, "c-area");
  positive(c.a0, "a0");
  positive(c.eps, "eps");
  positive(c.c11, "c11");
  if (!(c.alpha >= 1.0)) throw UsageError("--alpha must be >= 1");
  if (c.seeds == 0) throw UsageError("--seeds must be positive");
  try {
    c.phy.bandwidth = Bandwidth::parse(c.bandwidth);
    c.area = parse_area_kind(c.area_mode) == AreaMode::Kind::unit ? AreaMode::unit() : AreaMode::scaled(c.a0);
    c.prune = parse_pruning(c.pruning);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  c.phy.p0 = c.p0;
  c.phy.n0 = c.n0;
  c.phy.alpha = c.alpha;
  if (!c.ladder.empty()) {
    for (const auto& item : split(c.ladder, ',')) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(item, &used);
      } catch (const std::exception&) {
        throw UsageError("--ladder: bad entry '" + item + "'");
      }
      if (used != item.size()) throw UsageError("--ladder: bad entry '" + item + "'");
      c.grid.push_back(v);
    }
    for (std::size_t i = 1; i < c.grid.size(); ++i) {
      if (c.grid[i] <= c.grid[i - 1]) throw UsageError("--ladder must be strictly increasing");
    }
  } else {
    c.grid = {c.n};
  }
  for (std::size_t n : c.grid) {
    if (n < 2) throw UsageError("--n must be at least 2");
  }
}

json config_json(const Config& c) {
  json j;
  j["ladder"] = c.grid;
  j["seeds"] = c.seeds;
  j["seed"] = c.seed;
  j["alpha"] = c.alpha;
  j["p0"] = c.p0;
  j["n0"] = c.n0;
  j["bandwidth"] = c.phy.bandwidth.to_string();
  j["c_area"] = c.c_area;
  j["area_mode"] = std::string(to_string(c.area.kind));
  j["a0"] = c.a0;
  j["pruning"] = std::string(to_string(c.prune));
  if (!c.network.empty()) j["network"] = c.network;
  return j;
}

struct Replicate {
  std::size_t n;
  std::size_t index;
  std::uint64_t seed;
  Network net;
};

std::vector<Replicate> replicates(const Config& c) {
  std::vector<Replicate> out;
  if (!c.network.empty()) {
    Network net = read_network_file(c.network);
    out.push_back({net.size(), 0, net.seed, std::move(net)});
    return out;
  }
  for (std::size_t n : c.grid) {
    for (std::size_t k = 0; k < c.seeds; ++k) {
      const std::uint64_t s = replicate_seed(c.seed, k);
      out.push_back({n, k, s, make_network(n, s, c.area)});
    }
  }
  return out;
}

std::string tag(const Replicate& r) { return "n" + std::to_string(r.n) + "_s" + std::to_string(r.index); }

class Run {
 public:
  Run(std::string command, const Config& c) : command_(std::move(command)), c_(c) {
    fs::create_directories(c.out);
    summary_["command"] = command_;
    summary_["config"] = config_json(c);
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(fs::path(c_.out) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(c_.out) / name).string());
    f.precision(17);
    return f;
  }

  void fail(const std::string& what) { failures_.push_back(what); }
  json& results() { return summary_["results"]; }

  int finish() {
    summary_["audits"]["passed"] = failures_.empty();
    summary_["audits"]["failures"] = failures_;
    open("summary.json") << summary_.dump(2) << "\n";
    for (const auto& f : failures_) std::cerr << "audit failed: " << f << "\n";
    std::cout << command_ << ": wrote " << c_.out << (failures_.empty() ? "" : " (audit failures)") << "\n";
    return failures_.empty() ? 0 : kExitAudit;
  }

 private:
  std::string command_;
  const Config& c_;
  json summary_;
  std::vector<std::string> failures_;
};

CsvRow row_prefix(const Replicate& r, const Config& c) {
  CsvRow row;
  row << r.n << r.index << static_cast<unsigned long long>(r.seed) << c.alpha << c.c_area;
  return row;
}

const char* kPrefix = "n,replicate,seed,alpha,c_area";

// ---------------------------------------------------------------------------

int cmd_generate(const Config& c) {
  Run run("generate", c);
  auto csv = run.open("networks.csv");
  csv << kPrefix << ",area_mode,radius,d_min,close_pair_threshold,below_threshold\n";
  for (const auto& r : replicates(c)) {
    auto f = run.open("network_" + tag(r) + ".txt");
    write_network(f, r.net);
    const NetworkStats st = min_pairwise_distance(r.net);
    auto row = row_prefix(r, c);
    row << std::string(to_string(r.net.area.kind)) << r.net.sphere().radius() << st.d_min << st.close_pair_threshold
        << (st.d_min < st.close_pair_threshold);
    csv << row.str() << "\n";
  }
  return run.finish();
}

int cmd_tessellate(const Config& c) {
  Run run("tessellate", c);
  auto csv = run.open("tessellate.csv");
  csv << kPrefix
      << ",rho,cells,min_separation,packing,maximality_violations,uncovered_crossings,radius_bound,occupancy_lo,occupancy_hi,"
         "occupancy_violations,max_cell_count,empty_cells,max_uniform_deviation\n";
  for (const auto& r : replicates(c)) {
    Rng rng(stream_seed(r.seed, Stream::tessellation));
    const Tessellation tess = build_tessellation(r.n, c.c_area, rng, r.net.sphere());
    auto f = run.open("tessellation_" + tag(r) + ".txt");
    write_tessellation(f, tess);
    Rng audit(stream_seed(r.seed, Stream::audit));
    const std::size_t holes = maximality_violations(tess, audit, 100000);
    const std::size_t crossings = uncovered_crossings(tess);
    const bool packing = packing_holds(tess);
    const bool radius_ok = cell_radius_bound_holds(tess);
    const CellStats st = occupancy(tess, r.net);
    if (!packing) run.fail("packing " + tag(r));
    if (holes != 0 || crossings != 0) run.fail("maximality " + tag(r));
    if (!radius_ok) run.fail("cell radius bound " + tag(r));
    auto row = row_prefix(r, c);
    row << tess.rho() << tess.cell_count() << min_generator_separation(tess) << packing << holes << crossings << radius_ok << st.lo
        << st.hi << st.violating_cells.size() << st.max_cell_count << st.empty_cells << st.max_uniform_deviation;
    csv << row.str() << "\n";
  }
  return run.finish();
}

int cmd_route(const Config& c) {
  Run run("route", c);
  auto csv = run.open("route.csv");
  csv << kPrefix
      << ",pruning,edges,total_cost,min_length_slack,max_hops,cell_bound_failures,max_cells_hit,"
         "max_cell_bound_ratio,node_bound_failures,extrapolated\n";
  for (const auto& r : replicates(c)) {
    const MinPowerRouter router(r.net, c.alpha, c.prune);
    const auto routes = router.all_routes();
    auto f = run.open("routes_" + tag(r) + ".csv");
    write_routes(f, routes);

    Rng rng(stream_seed(r.seed, Stream::tessellation));
    const Tessellation tess = build_tessellation(r.n, c.c_area, rng, r.net.sphere());
    double total = 0.0, slack = std::numeric_limits<double>::infinity(), worst_ratio = 0.0;
    std::size_t max_hops = 0, failures = 0, node_failures = 0, max_cells = 0;
    bool extrapolated = false;
    for (const auto& route : routes) {
      total += route.cost;
      slack = std::min(slack, route.length - route.direct);
      max_hops = std::max(max_hops, route.hop_count());
      const Lemma3Audit a = lemma3_audit(tess, r.net, route);
      if (static_cast<double>(a.cells_hit) > a.cell_bound) ++failures;
      if (static_cast<double>(a.route_nodes) > a.node_bound) ++node_failures;
      max_cells = std::max(max_cells, a.cells_hit);
      worst_ratio = std::max(worst_ratio, static_cast<double>(a.cells_hit) / a.cell_bound);
      extrapolated = a.extrapolated;
      if (route.length < route.direct * (1.0 - 1e-12)) run.fail("L < D " + tag(r));
    }
    if (failures != 0 || node_failures != 0) run.fail("cell bound " + tag(r));
    auto row = row_prefix(r, c);
    row << std::string(to_string(router.pruning())) << router.edge_count() << total << slack << max_hops << failures
        << max_cells << worst_ratio << node_failures << extrapolated;
    csv << row.str() << "\n";
  }
  return run.finish();
}

int cmd_mac_audit(const Config& c) {
  Run run("mac-audit", c);
  auto csv = run.open("mac.csv");
  csv << kPrefix
      << ",min_cdma_gap,required_bandwidth,envelope_bandwidth,d_min_above_threshold,colors,"
         "coloring_valid,locality_radius,max_cochannel_interference\n";
  for (const auto& r : replicates(c)) {
    // TDMA/FDMA gap sweep over random links and schedules.
    Rng rng(stream_seed(r.seed, Stream::audit));
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c.links; ++k) {
      const Link link{std::pow(10.0, -3.0 + 6.0 * rng.uniform()), std::pow(10.0, -3.0 + 6.0 * rng.uniform())};
      const ScheduleSpec s = random_schedule(rng, 1 + rng.index(8), 1 + rng.index(8), link.power, c.phy.bandwidth);
      min_gap = std::min(min_gap, theorem2_gap(link, s, c.phy));
    }
    if (min_gap < -1e-12) run.fail("cdma gap " + tag(r));

    const NetworkStats st = min_pairwise_distance(r.net);
    const bool above = st.d_min >= st.close_pair_threshold;
    const double required = required_bandwidth(r.net, c.phy, c.eps);
    const double envelope = interference_envelope(r.n, c.phy, r.net.sphere()) / (c.eps * c.n0);
    if (above && required > envelope) run.fail("interference envelope " + tag(r));

    auto row = row_prefix(r, c);
    row << min_gap << required << envelope << above;
    if (r.net.area.kind == AreaMode::Kind::scaled && c.alpha >= 2.0) {
      const ColoringResult col = hybrid_coloring(r.net, c.c11);
      const bool valid = coloring_valid(locality_graph(r.net, col.locality_radius), col);
      if (!valid) run.fail("coloring " + tag(r));
      const auto records = cochannel_interference_audit(r.net, col, c.phy);
      auto f = run.open("audit_" + tag(r) + ".csv");
      write_audit_records(f, records);
      row << col.color_count << valid << col.locality_radius << max_interference(records);
    } else {
      row << "" << "" << "" << "";
    }
    csv << row.str() << "\n";
  }
  return run.finish();
}

void write_capacity_row(std::ostream& csv, const CapacityReport& rep, const Replicate& r, const Config& c) {
  auto row = row_prefix(r, c);
  row << rep.r_relaxed;
  if (rep.achievable) {
    const auto& a = *rep.achievable;
    row << a.rate << rep.max_node_power << a.binding_node << a.binding_cell << a.max_hop << a.hop_violations
        << a.fallback_hops << a.fallback_cells;
  } else {
    row << "" << "" << "" << "" << "" << "" << "" << "";
  }
  row << rep.min_length_slack << rep.total_route_cost << rep.orderings_hold();
  csv << row.str() << "\n";
}

const char* kCapacityHeader =
    ",r_relaxed,r_achievable,max_node_power,binding_node,binding_cell,max_relay_hop,hop_violations,"
    "fallback_hops,fallback_cells,min_length_slack,total_route_cost,orderings_hold\n";

CapacityOptions capacity_options(const Config& c) {
  CapacityOptions o;
  o.phy = c.phy;
  o.c_area = c.c_area;
  o.area = c.area;
  o.pruning = c.prune;
  o.achievable = !c.relaxed_only;
  return o;
}

int cmd_capacity(const Config& c) {
  Run run("capacity", c);
  auto csv = run.open("capacity.csv");
  csv << kPrefix << kCapacityHeader;
  json rows = json::array();
  for (const auto& r : replicates(c)) {
    const CapacityReport rep = run_capacity(r.net, stream_seed(r.seed, Stream::tessellation), capacity_options(c));
    write_capacity_row(csv, rep, r, c);
    if (!rep.audits_pass()) run.fail("capacity " + tag(r));
    rows.push_back({{"n", r.n}, {"replicate", r.index}, {"r_relaxed", rep.r_relaxed},
                    {"r_achievable", rep.achievable ? json(rep.r_achievable()) : json(nullptr)}});
  }
  run.results()["runs"] = rows;
  return run.finish();
}

ScalingReport scaling_from_fixture(const Config& c) {
  std::ifstream in(c.fixture);
  if (!in) throw UsageError("--fixture: cannot open '" + c.fixture + "'");
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  auto col = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto cn = col("n"), cs = col("seed"), cr = col("r_relaxed"), ca = col("r_achievable");
  if (cn < 0 || cr < 0) throw UsageError("--fixture: needs columns n and r_relaxed");
  std::vector<CapacityReport> runs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    CapacityReport rep;
    try {
      rep.n = std::stoull(f.at(cn));
      if (cs >= 0) rep.replicate = std::stoull(f.at(cs));
      rep.r_relaxed = std::stod(f.at(cr));
      if (ca >= 0) rep.achievable = AchievableResult{.rate = std::stod(f.at(ca))};
    } catch (const std::exception&) {
      throw UsageError("--fixture: bad row '" + line + "'");
    }
    runs.push_back(std::move(rep));
  }
  return summarize_scaling(std::move(runs), c.phy, c.area.kind, ca >= 0);
}

json fit_json(const ScalingFit& f) {
  return {{"slope", f.slope},
          {"stderr", f.slope_stderr},
          {"intercept", f.intercept},
          {"residual_rms", f.residual_rms},
          {"residuals", f.residuals}};
}

int cmd_scaling(const Config& c) {
  Run run("scaling", c);
  ScalingReport rep;
  if (!c.fixture.empty()) {
    rep = scaling_from_fixture(c);
  } else {
    if (c.grid.size() < 4) throw UsageError("--ladder needs at least 4 values for a fit");
    rep = run_scaling(c.grid, c.seeds, c.seed, capacity_options(c), c.workers);
    auto csv = run.open("scaling.csv");
    csv << kPrefix << kCapacityHeader;
    for (const auto& r : rep.runs) {
      const Replicate id{r.n, r.replicate, r.seed, {}};
      write_capacity_row(csv, r, id, c);
      if (!r.audits_pass()) run.fail("capacity " + tag(id));
    }
  }
  auto pts = run.open("scaling_points.csv");
  pts << "n,seeds,alpha,c_area,median_r_relaxed,median_r_achievable,upper_bound,lower_bound\n";
  std::vector<double> relaxed;
  for (const auto& p : rep.points) {
    CsvRow row;
    row << p.n << (rep.runs.size() / rep.points.size()) << c.alpha << c.c_area << p.median_relaxed << p.median_achievable << p.bounds.upper << p.bounds.lower;
    pts << row.str() << "\n";
    relaxed.push_back(p.median_relaxed);
  }
  auto& res = run.results();
  res["target_exponent"] = c.area.kind == AreaMode::Kind::unit ? 0.5 * (c.alpha - 1.0) : -0.5;
  res["fit_relaxed"] = fit_json(rep.fit_relaxed);
  res["relaxed_monotone"] = c.area.kind == AreaMode::Kind::unit ? strictly_increasing(relaxed)
                                                                : strictly_decreasing(relaxed);
  if (rep.fit_achievable) res["fit_achievable"] = fit_json(*rep.fit_achievable);
  return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uwbcap: capacity scaling experiments for power-constrained ad hoc networks"};
  app.require_subcommand(1);
  Config c;
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Config&);
  };
  const std::vector<Cmd> cmds = {
      {"generate", "dump random networks", cmd_generate},
      {"tessellate", "build tessellations and run packing/maximality/occupancy audits", cmd_tessellate},
      {"route", "minimum-power routes and the cell-intersection audit", cmd_route},
      {"mac-audit", "TDMA/FDMA gap sweep, required bandwidth, hybrid coloring audit", cmd_mac_audit},
      {"capacity", "relaxed and achievable uniform throughput per seed", cmd_capacity},
      {"scaling", "throughput ladder and exponent fits", cmd_scaling},
  };
  std::vector<CLI::App*> subs;
  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_options(sub, c);
    if (std::string(cmd.name) == "scaling") {
      sub->add_option("--fixture", c.fixture, "CSV with n, seed, r_relaxed[, r_achievable]; skips simulation");
    }
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      apply_config(subs[i], c);
      finalize(c);
      return cmds[i].fn(c);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const RegimeError& e) {
      std::cerr << e.what() << "\n";
      return kExitRegime;
    } catch (const DomainError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitAudit;
    }
  }
  return kExitUsage;
}
