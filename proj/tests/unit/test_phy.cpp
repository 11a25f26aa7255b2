#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "uwbcap/errors.hpp"
#include "uwbcap/phy.hpp"

using namespace uwbcap;

TEST_CASE("gain") {
  CHECK(gain(1.0, 2.0) == 1.0);
  CHECK(gain(1.0, 3.7) == 1.0);
  CHECK(gain(0.5, 2.0) == 4.0);
  CHECK(gain(0.1, 3.0) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK_THROWS_AS(gain(0.0, 2.0), SingularityError);
}

TEST_CASE("rates") {
  CHECK(rate_infinite_bw(1, 1, 1) == 1.0);
  CHECK(rate_infinite_bw(2, 4, 0.5) == 16.0);
  CHECK(rate_finite_bw(0, 1, 1, 5) == 0.0);
  CHECK(rate_finite_bw(1, 1, 1, 1, 1) == doctest::Approx(0.405465).epsilon(1e-6));
  CHECK(rate_finite_bw(1, 1, 1, 1, 1) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  const double big = rate_finite_bw(1, 1, 1, 1e6);
  CHECK(big == doctest::Approx(0.9999995).epsilon(1e-9));
  CHECK(std::abs(big - 1.0) <= 5e-7);
  CHECK_THROWS_AS(rate_finite_bw(1, 1, 1, 0.0), DomainError);
  CHECK_THROWS_AS(rate_finite_bw(1, 1, 1, 1.0, -1.0), DomainError);
}

TEST_CASE("finite-band rate never exceeds the power-limited rate") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double c = std::pow(10.0, -4.0 + 8.0 * rng.uniform());
    const double w = std::pow(10.0, -4.0 + 8.0 * rng.uniform());
    CHECK(w * std::log1p(c / w) <= c * (1.0 + 1e-15));
    CHECK(rate_finite_bw(c, 1.0, 1.0, w) <= rate_infinite_bw(c, 1.0, 1.0) * (1.0 + 1e-15));
  }
}

TEST_CASE("finite-band rate rises with bandwidth toward the limit") {
  double prev = 0.0;
  for (double w = 0.01; w < 1e7; w *= 2.0) {
    const double r = rate_finite_bw(3.0, 0.7, 1.3, w);
    CHECK(r > prev);
    CHECK(r < rate_infinite_bw(3.0, 0.7, 1.3));
    prev = r;
  }
  CHECK(prev == doctest::Approx(rate_infinite_bw(3.0, 0.7, 1.3)).epsilon(1e-6));
}

TEST_CASE("finite-band rate is monotone in power and interference") {
  CHECK(rate_finite_bw(2, 1, 1, 3) > rate_finite_bw(1, 1, 1, 3));
  CHECK(rate_finite_bw(1, 1, 1, 3, 2) < rate_finite_bw(1, 1, 1, 3, 1));
}

TEST_CASE("power for rate") {
  CHECK(power_for_rate(1, 1, 2, 1) == 1.0);
  CHECK(power_for_rate(2, 0.5, 2, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(power_for_rate(1, 0, 2, 1), SingularityError);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const double r = 10 * rng.uniform(), d = 0.01 + rng.uniform(), a = 1 + 3 * rng.uniform(),
                 n0 = 0.1 + rng.uniform();
    const double back = rate_infinite_bw(power_for_rate(r, d, a, n0), gain(d, a), n0);
    CHECK(std::abs(back - r) <= 1e-12 * std::max(1.0, r));
  }
}

TEST_CASE("bandwidth values") {
  CHECK(Bandwidth::parse("inf").is_infinite());
  CHECK(Bandwidth::parse("2.5e6").hz() == 2.5e6);
  CHECK_THROWS_AS(Bandwidth::parse("-3"), DomainError);
  CHECK_THROWS_AS(Bandwidth::parse("abc"), DomainError);
  CHECK_THROWS_AS(Bandwidth::parse("5x"), DomainError);
  CHECK_THROWS_AS(Bandwidth::infinite().hz(), ContractError);
  CHECK(Bandwidth::parse(Bandwidth::hz(0.1).to_string()) == Bandwidth::hz(0.1));
  PhyParams p;
  p.alpha = 0.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("sinr") {
  using test::lonlat;
  const PhyParams phy;
  // 0 -> 1 alone in its band
  const Network net = test::network_of({lonlat(0, 0), lonlat(0.3, 0), lonlat(1.2, 0.4), lonlat(2.0, -0.3)},
                                       {1, 0, 3, 2});
  const std::vector<LinkAllocation> one{{0, 1, 2.0, 0.0}};
  const BandPlan bands = BandPlan::single(4, 5.0);
  CHECK(sinr(net, one, 1, bands, phy) == doctest::Approx(2.0 * gain(net.distance(0, 1), 2.0) / 5.0));
  CHECK_THROWS_AS(sinr(net, one, 2, bands, phy), DomainError);

  // hand-summed interference at node 1 from 2 and 3
  const std::vector<LinkAllocation> three{{0, 1, 2.0, 0}, {2, 3, 1.5, 0}, {3, 0, 0.7, 0}};
  const double i1 = 1.5 / std::pow(net.distance(2, 1), 2) + 0.7 / std::pow(net.distance(3, 1), 2);
  const double want = 2.0 / std::pow(net.distance(0, 1), 2) / (5.0 + i1);
  CHECK(std::abs(sinr(net, three, 1, bands, phy) - want) <= 1e-12 * want);

  // different band removes interference
  BandPlan split{{0, 0, 1, 1}, {5.0, 5.0}};
  CHECK(sinr(net, three, 1, split, phy) == doctest::Approx(2.0 * gain(net.distance(0, 1), 2.0) / 5.0));
}

TEST_CASE("symmetric links see equal sinr") {
  using test::lonlat;
  const Network net = test::network_of({lonlat(0, 0), lonlat(0.2, 0), lonlat(1.0, 0), lonlat(0.8, 0)}, {1, 0, 3, 2});
  const std::vector<LinkAllocation> a{{0, 1, 1.0, 0}, {2, 3, 1.0, 0}};
  const BandPlan bands = BandPlan::single(4, 1.0);
  CHECK(sinr(net, a, 1, bands, PhyParams{}) == doctest::Approx(sinr(net, a, 3, bands, PhyParams{})).epsilon(1e-12));
}

TEST_CASE("total interference and envelope") {
  PhyParams phy;
  phy.p0 = 2.0;
  phy.alpha = 3.0;
  const Network net = generate(60, 3);
  const auto got = total_interference(net, phy);
  for (std::size_t j = 0; j < net.size(); ++j) {
    double want = 0.0;
    for (std::size_t k = 0; k < net.size(); ++k) {
      if (k != j) want += 2.0 * std::pow(net.distance(k, j), -3.0);
    }
    CHECK(got[j] == doctest::Approx(want).epsilon(1e-12));
  }
  const double n = 60.0;
  CHECK(interference_envelope(60, phy, Sphere::unit_area()) ==
        doctest::Approx(2.0 * n * std::pow(n * n * std::log(n), 1.5)).epsilon(1e-12));
}
