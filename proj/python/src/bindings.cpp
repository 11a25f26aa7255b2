#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "uwbcap/capacity.hpp"
#include "uwbcap/errors.hpp"
#include "uwbcap/io.hpp"
#include "uwbcap/mac.hpp"
#include "uwbcap/netgen.hpp"
#include "uwbcap/phy.hpp"
#include "uwbcap/routing.hpp"
#include "uwbcap/tessellate.hpp"

namespace py = pybind11;
using namespace uwbcap;

namespace {

AreaMode area_of(const std::string& mode, double a0) {
  return parse_area_kind(mode) == AreaMode::Kind::unit ? AreaMode::unit() : AreaMode::scaled(a0);
}

PhyParams phy_of(double alpha, double p0, double n0, const std::string& bandwidth) {
  PhyParams p;
  p.alpha = alpha;
  p.p0 = p0;
  p.n0 = n0;
  p.bandwidth = Bandwidth::parse(bandwidth);
  p.validate();
  return p;
}

py::array_t<double> coords(const std::vector<SpherePoint>& pts) {
  py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto ii = static_cast<py::ssize_t>(i);
    m(ii, 0) = pts[i].x();
    m(ii, 1) = pts[i].y();
    m(ii, 2) = pts[i].z();
  }
  return a;
}

py::dict fit_dict(const ScalingFit& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["slope_stderr"] = f.slope_stderr;
  d["residual_rms"] = f.residual_rms;
  d["residuals"] = f.residuals;
  return d;
}

py::dict report_dict(const CapacityReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["replicate"] = r.replicate;
  d["seed"] = r.seed;
  d["alpha"] = r.alpha;
  d["c_area"] = r.c_area;
  d["p0"] = r.p0;
  d["r_relaxed"] = r.r_relaxed;
  d["r_achievable"] = r.achievable ? py::cast(r.achievable->rate) : py::none();
  d["max_node_power"] = r.max_node_power;
  d["min_length_slack"] = r.min_length_slack;
  d["total_route_cost"] = r.total_route_cost;
  d["hop_violations"] = r.achievable ? py::cast(r.achievable->hop_violations) : py::none();
  d["orderings_hold"] = r.orderings_hold();
  d["audits_pass"] = r.audits_pass();
  return d;
}

CapacityOptions capacity_options(double alpha, double p0, double n0, double c_area, const std::string& area_mode,
                                 double a0, const std::string& pruning, bool achievable) {
  CapacityOptions o;
  o.phy = phy_of(alpha, p0, n0, "inf");
  o.c_area = c_area;
  o.area = area_of(area_mode, a0);
  o.pruning = parse_pruning(pruning);
  o.achievable = achievable;
  return o;
}

}  // namespace

PYBIND11_MODULE(_uwbcap, m) {
  m.doc() = "Capacity scaling experiments for power-constrained ad hoc networks on the sphere";

  static py::exception<RegimeError> regime(m, "RegimeError", PyExc_RuntimeError);
  static py::exception<ContractError> contract(m, "ContractError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const RegimeError& e) {
      regime(e.what());
    } catch (const ContractError& e) {
      contract(e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Network>(m, "Network")
      .def_property_readonly("n", &Network::size)
      .def_readonly("seed", &Network::seed)
      .def_property_readonly("area_mode", [](const Network& n) { return std::string(to_string(n.area.kind)); })
      .def_property_readonly("a0", [](const Network& n) { return n.area.a0; })
      .def_property_readonly("radius", [](const Network& n) { return n.sphere().radius(); })
      .def_property_readonly("positions", [](const Network& n) { return coords(n.nodes); })
      .def_readonly("dest", &Network::dest)
      .def("distance", [](const Network& n, std::size_t i, std::size_t j) {
        if (i >= n.size() || j >= n.size()) throw py::index_error("node index out of range");
        return n.distance(i, j);
      })
      .def("to_text", [](const Network& n) {
        std::ostringstream out;
        write_network(out, n);
        return out.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return read_network(in);
      })
      .def("__len__", &Network::size);

  m.def("generate", [](std::size_t n, std::uint64_t seed, const std::string& area_mode, double a0) {
        return generate(n, seed, area_of(area_mode, a0));
      },
      py::arg("n"), py::arg("seed"), py::arg("area_mode") = "unit", py::arg("a0") = 1.0);
  m.def("make_network", [](std::size_t n, std::uint64_t seed, const std::string& area_mode, double a0) {
        return make_network(n, seed, area_of(area_mode, a0));
      },
      py::arg("n"), py::arg("seed"), py::arg("area_mode") = "unit", py::arg("a0") = 1.0,
      "Nodes plus destinations from the standard sub-streams of seed.");
  m.def("replicate_seed", &replicate_seed, py::arg("master"), py::arg("index"));
  m.def("min_pairwise_distance", [](const Network& net) {
    const NetworkStats s = min_pairwise_distance(net);
    py::dict d;
    d["d_min"] = s.d_min;
    d["close_pair_threshold"] = s.close_pair_threshold;
    d["pair"] = py::make_tuple(s.first, s.second);
    return d;
  });

  m.def("gain", &gain, py::arg("d"), py::arg("alpha"));
  m.def("rate_infinite_bw", &rate_infinite_bw, py::arg("power"), py::arg("gain"), py::arg("n0"));
  m.def("rate_finite_bw", &rate_finite_bw, py::arg("power"), py::arg("gain"), py::arg("n0"), py::arg("w"),
        py::arg("interference") = 0.0);
  m.def("power_for_rate", &power_for_rate, py::arg("rate"), py::arg("d"), py::arg("alpha"), py::arg("n0"));
  m.def("theorem2_gap",
        [](double power, double g, std::vector<double> time_fractions, std::vector<double> band_widths,
           std::vector<double> powers, double n0, const std::string& bandwidth) {
          PhyParams phy = phy_of(2.0, 1.0, n0, bandwidth);
          return theorem2_gap(Link{power, g}, ScheduleSpec{std::move(time_fractions), std::move(band_widths),
                                                           std::move(powers)},
                              phy);
        },
        py::arg("power"), py::arg("gain"), py::arg("time_fractions"), py::arg("band_widths"), py::arg("powers"),
        py::arg("n0") = 1.0, py::arg("bandwidth") = "inf",
        "CDMA rate minus the TDMA/FDMA rate; powers are row-major [band][slot].");
  m.def("required_bandwidth",
        [](const Network& net, double eps, double alpha, double p0, double n0) {
          return required_bandwidth(net, phy_of(alpha, p0, n0, "inf"), eps);
        },
        py::arg("net"), py::arg("eps") = 0.01, py::arg("alpha") = 2.0, py::arg("p0") = 1.0, py::arg("n0") = 1.0);

  py::class_<Tessellation>(m, "Tessellation")
      .def_property_readonly("rho", &Tessellation::rho)
      .def_property_readonly("cell_count", &Tessellation::cell_count)
      .def_property_readonly("generators", [](const Tessellation& t) { return coords(t.generators()); })
      .def("packing_holds", &packing_holds)
      .def("uncovered_crossings", &uncovered_crossings)
      .def("cell_radius_bound_holds", &cell_radius_bound_holds)
      .def("occupancy", [](const Tessellation& t, const Network& net) {
        const CellStats s = occupancy(t, net);
        py::dict d;
        d["cell_counts"] = s.cell_counts;
        d["inner_counts"] = s.inner_counts;
        d["lo"] = s.lo;
        d["hi"] = s.hi;
        d["empty_cells"] = s.empty_cells;
        return d;
      });
  m.def("rho_for", [](std::size_t n, double c_area) { return rho_for(n, c_area); }, py::arg("n"),
        py::arg("c_area") = kDefaultCellArea);
  m.def("build_tessellation",
        [](std::size_t n, double c_area, std::uint64_t seed, const std::string& area_mode, double a0) {
          Rng rng(seed);
          return build_tessellation(n, c_area, rng, area_of(area_mode, a0).sphere_for(n));
        },
        py::arg("n"), py::arg("c_area") = kDefaultCellArea, py::arg("seed") = 1, py::arg("area_mode") = "unit",
        py::arg("a0") = 1.0);

  py::class_<Route>(m, "Route")
      .def_readonly("nodes", &Route::nodes)
      .def_readonly("hops", &Route::hops)
      .def_readonly("length", &Route::length)
      .def_readonly("direct", &Route::direct)
      .def_readonly("cost", &Route::cost);
  m.def("min_power_route",
        [](const Network& net, std::size_t src, double alpha, const std::string& pruning) {
          if (src >= net.size()) throw py::index_error("source out of range");
          return min_power_route(net, src, alpha, parse_pruning(pruning));
        },
        py::arg("net"), py::arg("src"), py::arg("alpha") = 2.0, py::arg("pruning") = "auto");
  m.def("all_routes",
        [](const Network& net, double alpha, const std::string& pruning) {
          return MinPowerRouter(net, alpha, parse_pruning(pruning)).all_routes();
        },
        py::arg("net"), py::arg("alpha") = 2.0, py::arg("pruning") = "auto");
  m.def("brute_force_route", &brute_force_route, py::arg("net"), py::arg("src"), py::arg("alpha") = 2.0);

  m.def("run_capacity",
        [](std::size_t n, std::uint64_t seed, double alpha, double p0, double n0, double c_area,
           const std::string& area_mode, double a0, const std::string& pruning, bool achievable) {
          py::gil_scoped_release release;
          const CapacityReport r =
              run_capacity(n, seed, capacity_options(alpha, p0, n0, c_area, area_mode, a0, pruning, achievable));
          py::gil_scoped_acquire acquire;
          return report_dict(r);
        },
        py::arg("n"), py::arg("seed"), py::arg("alpha") = 2.0, py::arg("p0") = 1.0, py::arg("n0") = 1.0,
        py::arg("c_area") = 5.0, py::arg("area_mode") = "unit", py::arg("a0") = 1.0, py::arg("pruning") = "auto",
        py::arg("achievable") = true);
  m.def("relaxed_throughput",
        [](const Network& net, double alpha, double p0, double n0) {
          const auto routes = MinPowerRouter(net, alpha).all_routes();
          return relaxed_uniform_throughput(net, phy_of(alpha, p0, n0, "inf"), routes);
        },
        py::arg("net"), py::arg("alpha") = 2.0, py::arg("p0") = 1.0, py::arg("n0") = 1.0);
  m.def("run_scaling",
        [](std::vector<std::size_t> ladder, std::size_t seeds, std::uint64_t master, double alpha, double c_area,
           const std::string& area_mode, double a0, bool achievable, unsigned workers) {
          const CapacityOptions o = capacity_options(alpha, 1.0, 1.0, c_area, area_mode, a0, "auto", achievable);
          ScalingReport rep;
          {
            py::gil_scoped_release release;
            rep = run_scaling(ladder, seeds, master, o, workers);
          }
          py::dict d;
          py::list runs, points;
          for (const auto& r : rep.runs) runs.append(report_dict(r));
          for (const auto& p : rep.points) {
            py::dict q;
            q["n"] = p.n;
            q["median_relaxed"] = p.median_relaxed;
            q["median_achievable"] = p.median_achievable;
            q["upper"] = p.bounds.upper;
            q["lower"] = p.bounds.lower;
            points.append(q);
          }
          d["runs"] = runs;
          d["points"] = points;
          d["fit_relaxed"] = fit_dict(rep.fit_relaxed);
          d["fit_achievable"] = rep.fit_achievable ? py::object(fit_dict(*rep.fit_achievable)) : py::none();
          return d;
        },
        py::arg("ladder"), py::arg("seeds"), py::arg("master") = 1, py::arg("alpha") = 2.0, py::arg("c_area") = 5.0,
        py::arg("area_mode") = "unit", py::arg("a0") = 1.0, py::arg("achievable") = true, py::arg("workers") = 0);
  m.def("fit_scaling_exponent",
        [](const std::vector<double>& n, const std::vector<double>& r) { return fit_dict(fit_scaling_exponent(n, r)); },
        py::arg("n"), py::arg("r"));
  m.def("bound_curves",
        [](std::size_t n, double alpha, double p0, const std::string& area_mode) {
          const BoundCurves b = bound_curves(n, phy_of(alpha, p0, 1.0, "inf"), parse_area_kind(area_mode));
          return py::make_tuple(b.upper, b.lower);
        },
        py::arg("n"), py::arg("alpha") = 2.0, py::arg("p0") = 1.0, py::arg("area_mode") = "unit");
}
