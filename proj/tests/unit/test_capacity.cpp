#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "uwbcap/capacity.hpp"
#include "uwbcap/errors.hpp"

using namespace uwbcap;

TEST_CASE("relaxed throughput for two nodes") {
  const Network net = test::equator({0.0, 0.7}, {1, 0});
  const double d = net.distance(0, 1);
  for (double alpha : {1.0, 2.0, 3.5}) {
    PhyParams phy;
    phy.alpha = alpha;
    phy.p0 = 2.0;
    phy.n0 = 0.5;
    const auto routes = MinPowerRouter(net, alpha).all_routes();
    const double r = relaxed_uniform_throughput(net, phy, routes);
    CHECK(r == doctest::Approx(2.0 / (0.5 * std::pow(d, alpha))).epsilon(1e-14));
    phy.p0 = 4.0;
    CHECK(relaxed_uniform_throughput(net, phy, routes) == doctest::Approx(2.0 * r).epsilon(1e-14));
  }
  PhyParams finite;
  finite.bandwidth = Bandwidth::hz(1.0);
  const auto routes = MinPowerRouter(net, 2.0).all_routes();
  CHECK_THROWS_AS(relaxed_uniform_throughput(net, finite, routes), ContractError);
  auto zero = routes;
  zero[0].cost = 0.0;
  CHECK_THROWS_AS(relaxed_uniform_throughput(net, PhyParams{}, zero), ContractError);
}

TEST_CASE("relaxed throughput matches the exhaustive oracle") {
  for (double alpha : {1.5, 2.0, 3.0}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Network net = make_network(8, replicate_seed(5, s));
      PhyParams phy;
      phy.alpha = alpha;
      double total = 0.0;
      for (std::size_t i = 0; i < 8; ++i) total += brute_force_route(net, i, alpha).cost;
      const auto routes = MinPowerRouter(net, alpha).all_routes();
      CHECK(test::close_rel(relaxed_uniform_throughput(net, phy, routes), 8.0 / total, 1e-12));
    }
  }
}

TEST_CASE("achievable throughput with a single cell collapses to direct hops") {
  const Network net = test::equator({0.0, 0.7}, {1, 0});
  const Tessellation one({net.nodes[0]}, 2, 1.0, 1.0, Sphere::unit_area());
  PhyParams phy;
  phy.p0 = 3.0;
  const AchievableResult res = achievable_uniform_throughput(net, one, phy);
  const double d = net.distance(0, 1);
  CHECK(res.hop_count == 2);
  CHECK(res.rate == doctest::Approx(3.0 / (d * d)).epsilon(1e-14));
  CHECK(res.power[0] == doctest::Approx(3.0));
  CHECK(res.power[1] == doctest::Approx(3.0));
  CHECK(res.hop_violations == 0);
}

TEST_CASE("capacity runs hold the orderings") {
  CapacityOptions opt;
  opt.c_area = 5.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const CapacityReport rep = run_capacity(512, replicate_seed(1, s), opt);
    CHECK(rep.orderings_hold());
    CHECK(rep.audits_pass());
    REQUIRE(rep.achievable);
    CHECK(rep.r_achievable() <= rep.r_relaxed);
    CHECK(rep.max_node_power <= rep.p0 * (1.0 + 1e-12));
    CHECK(rep.max_node_power == doctest::Approx(rep.p0));
    CHECK(rep.r_relaxed == doctest::Approx(512.0 / rep.total_route_cost));
    // binding node spends its whole budget
    CHECK(rep.achievable->power[rep.achievable->binding_node] == doctest::Approx(rep.p0));
  }
  opt.phy.p0 = 7.0;
  const CapacityReport a = run_capacity(512, 9, CapacityOptions{});
  const CapacityReport b = run_capacity(512, 9, opt);
  CHECK(b.r_relaxed == doctest::Approx(7.0 * a.r_relaxed).epsilon(1e-12));
  CHECK(b.r_achievable() == doctest::Approx(7.0 * a.r_achievable()).epsilon(1e-12));
}

TEST_CASE("bound curves") {
  PhyParams phy;
  phy.alpha = 1.0;
  phy.p0 = 2.0;
  for (std::size_t n : {10u, 1000u, 100000u}) {
    const BoundCurves b = bound_curves(n, phy, AreaMode::Kind::unit);
    CHECK(b.upper == doctest::Approx(2.0));
    CHECK(b.lower == doctest::Approx(1.0 / std::log(static_cast<double>(n))));
  }
  phy.alpha = 2.0;
  phy.p0 = 1.0;
  double up = 0.0, sup = INFINITY;
  for (std::size_t n = 512; n <= 65536; n *= 2) {
    const BoundCurves b = bound_curves(n, phy, AreaMode::Kind::unit);
    const double ln = std::log(static_cast<double>(n));
    CHECK(b.upper / b.lower == doctest::Approx(ln * ln).epsilon(1e-12));
    CHECK(b.upper > up);
    up = b.upper;
    const BoundCurves s = bound_curves(n, phy, AreaMode::Kind::scaled);
    CHECK(s.upper < sup);
    sup = s.upper;
    CHECK(s.lower < s.upper);
  }
  const BoundCurves k = bound_curves(100, phy, AreaMode::Kind::unit, BoundConstants{3.0, 0.5, 1.0, 1.0});
  CHECK(k.upper == doctest::Approx(3.0 * bound_curves(100, phy, AreaMode::Kind::unit).upper));
  CHECK_THROWS_AS(bound_curves(2, phy, AreaMode::Kind::unit), DomainError);
}

TEST_CASE("scaling exponent fit") {
  const std::vector<double> n{512, 1024, 2048, 4096, 8192};
  std::vector<double> sq, nl, flat(5, 3.0);
  for (double x : n) {
    sq.push_back(std::sqrt(x));
    nl.push_back(std::sqrt(x * std::log(x)));
  }
  const ScalingFit a = fit_scaling_exponent(n, sq);
  CHECK(a.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.slope_stderr < 1e-12);
  CHECK(a.residual_rms < 1e-12);
  const ScalingFit b = fit_scaling_exponent(n, nl);
  // oracle: d log((n log n)^0.5) / d log n = 0.5 (1 + 1/log n), between the ladder ends
  CHECK(b.slope >= 0.5 * (1.0 + 1.0 / std::log(8192.0)));
  CHECK(b.slope <= 0.5 * (1.0 + 1.0 / std::log(512.0)));
  CHECK(b.slope >= 0.5);
  CHECK(b.slope <= 0.62);
  CHECK(fit_scaling_exponent(n, flat).slope == doctest::Approx(0.0));
  CHECK(b.residuals.size() == 5);

  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(fit_scaling_exponent(three, three), DomainError);
  std::vector<double> bad = sq;
  bad[2] = 0.0;
  CHECK_THROWS_AS(fit_scaling_exponent(n, bad), ContractError);
}

TEST_CASE("median and monotone helpers") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS(median({}));
  const std::vector<double> up{1, 2, 3}, flat{1, 1, 2}, down{3, 2, 1};
  CHECK(strictly_increasing(up));
  CHECK_FALSE(strictly_increasing(flat));
  CHECK(strictly_decreasing(down));
  CHECK_FALSE(strictly_decreasing(up));
}

TEST_CASE("scaling runs do not depend on the worker count") {
  CapacityOptions opt;
  opt.achievable = false;
  const std::vector<std::size_t> ladder{64, 128, 256, 512};
  const ScalingReport one = run_scaling(ladder, 3, 11, opt, 1);
  const ScalingReport many = run_scaling(ladder, 3, 11, opt, 4);
  REQUIRE(one.runs.size() == 12);
  for (std::size_t i = 0; i < one.runs.size(); ++i) {
    CHECK(one.runs[i].r_relaxed == many.runs[i].r_relaxed);
    CHECK(one.runs[i].seed == many.runs[i].seed);
    CHECK(one.runs[i].replicate == i % 3);
  }
  CHECK(one.fit_relaxed.slope == many.fit_relaxed.slope);
  CHECK_FALSE(one.fit_achievable);
  REQUIRE(one.points.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> v;
    for (std::size_t s = 0; s < 3; ++s) v.push_back(one.runs[3 * k + s].r_relaxed);
    CHECK(one.points[k].median_relaxed == median(v));
  }
}
