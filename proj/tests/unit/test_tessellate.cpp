#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "support.hpp"
#include "uwbcap/errors.hpp"
#include "uwbcap/tessellate.hpp"

using namespace uwbcap;

TEST_CASE("rho for the default cell constant") {
  const Sphere s = Sphere::unit_area();
  const double a = 100.0 * std::log(1e5) / 1e5;
  CHECK(a == doctest::Approx(0.011513).epsilon(1e-4));
  CHECK(rho_for(100000, 100.0) == s.cap_radius_for_area(a));
  CHECK(s.cap_area(rho_for(100000, 100.0)) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("regime error below the minimum n") {
  CHECK(100.0 * std::log(1000.0) / 1000.0 == doctest::Approx(0.691).epsilon(1e-3));
  CHECK_THROWS_AS(rho_for(1000, 100.0), RegimeError);
  // oracle: linear scan for the first n with c log n / n < 1/2
  for (double c : {1.0, 5.0, 20.0, 100.0}) {
    std::size_t n = 3;
    while (!(c * std::log(static_cast<double>(n)) / static_cast<double>(n) < 0.5)) ++n;
    CHECK(minimum_n_for(c) == n);
    CHECK_NOTHROW(rho_for(n, c));
    if (n > 3) CHECK_THROWS_AS(rho_for(n - 1, c), RegimeError);
  }
  try {
    rho_for(500, 100.0);
    FAIL("expected a regime error");
  } catch (const RegimeError& e) {
    CHECK(e.minimum_n() == minimum_n_for(100.0));
  }
}

TEST_CASE("cell radius bound over a range of n") {
  for (double n : {1e4, 3e4, 1e5, 3e5, 1e6}) {
    const auto nn = static_cast<std::size_t>(n);
    CHECK(4.0 * rho_for(nn, 100.0) <= cell_radius_bound(nn, 100.0));
    CHECK(cell_radius_bound(nn, 100.0) == doctest::Approx(std::sqrt(3200.0 * std::log(n) / (std::numbers::pi * n))));
  }
}

TEST_CASE("built tessellation satisfies packing, maximality and cell bounds") {
  const Sphere s = Sphere::unit_area();
  Rng rng(4);
  const Tessellation t = build_tessellation(20000, 20.0, rng, s);
  const double rho = t.rho();
  CHECK(packing_holds(t));
  CHECK(min_generator_separation(t) >= 2.0 * rho);
  Rng audit(5);
  CHECK(maximality_violations(t, audit, 100000) == 0);
  CHECK(uncovered_crossings(t) == 0);
  CHECK(cell_radius_bound_holds(t));
  const double lo = s.area() / s.cap_area(2.0 * rho);
  const double hi = s.area() / s.cap_area(rho);
  CHECK(static_cast<double>(t.cell_count()) >= lo);
  CHECK(static_cast<double>(t.cell_count()) <= hi);

  for (std::size_t k = 0; k < t.cell_count(); ++k) CHECK(t.cell_of(t.generator(k)) == k);
  Rng q(6);
  for (int i = 0; i < 2000; ++i) {
    const auto p = sample_uniform(q);
    const std::size_t k = t.cell_of(p);
    CHECK(s.distance(p, t.generator(k)) <= 2.0 * rho);
    // a point inside an inner cap belongs to that cell
    const std::size_t g = q.index(t.cell_count());
    const GeodesicSegment seg{t.generator(g), p};
    const double len = s.length(seg);
    if (len > rho && len < 0.999 * s.max_distance()) {
      CHECK(t.cell_of(s.interpolate(seg, 0.99 * rho / len)) == g);
    }
  }
}

TEST_CASE("uncovered crossings detect a missing generator") {
  Rng rng(12);
  const Tessellation t = build_tessellation(20000, 20.0, rng);
  auto gens = t.generators();
  gens.erase(gens.begin() + 3);
  const Tessellation holed(gens, t.n(), t.c_area(), t.rho(), t.sphere());
  CHECK(uncovered_crossings(holed) > 0);
}

TEST_CASE("occupancy") {
  Rng rng(7);
  const Tessellation t = build_tessellation(20000, 20.0, rng);
  const Network net = generate(20000, 8);
  const CellStats st = occupancy(t, net);
  CHECK(std::accumulate(st.cell_counts.begin(), st.cell_counts.end(), std::size_t{0}) == 20000);
  CHECK(st.lo == doctest::Approx(0.5 * 20.0 * std::log(20000.0)));
  CHECK(st.hi == doctest::Approx(1.5 * 20.0 * std::log(20000.0)));
  for (std::size_t k = 0; k < t.cell_count(); ++k) CHECK(st.inner_counts[k] <= st.cell_counts[k]);
  CHECK(st.inner_cap_fraction == doctest::Approx(20.0 * std::log(20000.0) / 20000.0));
  // brute-force inner counts
  std::vector<std::size_t> inner(t.cell_count(), 0);
  for (const auto& p : net.nodes) {
    for (std::size_t k = 0; k < t.cell_count(); ++k) {
      if (central_angle(p, t.generator(k)) <= t.sphere().to_angle(t.rho())) ++inner[k];
    }
  }
  CHECK(inner == st.inner_counts);

  // nodes only in the northern hemisphere leave far-south cells empty
  Network north = net;
  std::erase_if(north.nodes, [](const SpherePoint& p) { return p.z() < 0.0; });
  const CellStats hs = occupancy(t, north);
  for (std::size_t k = 0; k < t.cell_count(); ++k) {
    if (t.generator(k).z() < -0.5) CHECK(hs.cell_counts[k] == 0);
  }
  CHECK(hs.empty_cells > 0);

  const Network scaled = generate(20000, 8, AreaMode::scaled(1.0));
  CHECK_THROWS_AS(occupancy(t, scaled), ContractError);
}

TEST_CASE("interfering cell graph") {
  Rng rng(9);
  const Tessellation t = build_tessellation(30000, 20.0, rng);
  const auto none = interfering_cell_graph(t, 0.0);
  for (const auto& a : none) CHECK(a.empty());
  const auto g = interfering_cell_graph(t, 8.0 * t.rho());
  const std::size_t bound = interfering_degree_bound(t, 8.0 * t.rho());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i].size() <= bound);
    for (std::size_t j : g[i]) {
      CHECK(std::find(g[j].begin(), g[j].end(), i) != g[j].end());
      CHECK(j != i);
    }
  }
  const Sphere s = t.sphere();
  CHECK(bound == static_cast<std::size_t>(std::floor(s.cap_area(9.0 * t.rho()) / s.cap_area(t.rho()))) - 1);
}

TEST_CASE("tessellation on a scaled sphere") {
  const Sphere s = Sphere::scaled_area(20000, 1.0);
  Rng rng(10);
  const Tessellation t = build_tessellation(20000, 20.0, rng, s);
  CHECK(t.rho() == doctest::Approx(rho_for(20000, 20.0) * std::sqrt(20000.0)).epsilon(1e-12));
  CHECK(packing_holds(t));
  CHECK(uncovered_crossings(t) == 0);
  CHECK(cell_radius_bound_holds(t));
}
