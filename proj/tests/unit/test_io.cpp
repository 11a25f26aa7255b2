#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "uwbcap/errors.hpp"
#include "uwbcap/io.hpp"

using namespace uwbcap;

namespace {

Network reread(const std::string& text) {
  std::istringstream in(text);
  return read_network(in);
}

}  // namespace

TEST_CASE("network text round trip is bit exact") {
  for (const AreaMode area : {AreaMode::unit(), AreaMode::scaled(2.5)}) {
    const Network net = make_network(500, 77, area);
    std::ostringstream out;
    write_network(out, net);
    const Network back = reread(out.str());
    CHECK(back.nodes == net.nodes);
    CHECK(back.dest == net.dest);
    CHECK(back.seed == 77);
    CHECK(back.area.kind == area.kind);
    CHECK(back.area.a0 == area.a0);
    std::ostringstream again;
    write_network(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("networks without destinations") {
  const Network net = generate(5, 3);
  std::ostringstream out;
  write_network(out, net);
  CHECK(out.str().find(",-\n") != std::string::npos);
  CHECK_FALSE(reread(out.str()).has_destinations());
}

TEST_CASE("hand-written networks are normalized") {
  const Network net = reread("index,x,y,z,dest\n0,0,0,2,1\n1,3,0,0,0\n");
  CHECK(net.nodes[0].z() == 1.0);
  CHECK(net.nodes[1].x() == 1.0);
  CHECK(net.area.kind == AreaMode::Kind::unit);
}

TEST_CASE("malformed network input") {
  const std::string h = "index,x,y,z,dest\n";
  CHECK_THROWS_AS(reread("0,1,0,0,1\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,1,0,0,1\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,1,0,0,1\n1,0,1,0\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,1,0,0,1\n2,0,1,0,0\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,1,0,0,0\n1,0,1,0,0\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,1,0,0,5\n1,0,1,0,0\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,1,zz,0,1\n1,0,1,0,0\n"), DomainError);
  CHECK_THROWS_AS(reread(h + "0,0,0,0,1\n1,0,1,0,0\n"), DomainError);
  CHECK_THROWS_AS(reread("# n=3\n" + h + "0,1,0,0,1\n1,0,1,0,0\n"), DomainError);
  CHECK_THROWS_AS(read_network_file("/nonexistent/net.txt"), DomainError);
}

TEST_CASE("route dump") {
  const Network net = test::equator({0.0, 0.2, 0.4}, {2, 0, 0});
  const std::vector<Route> routes{make_route(net, {0, 1, 2}, 2.0)};
  std::ostringstream out;
  write_routes(out, routes);
  const auto lines = split(out.str(), '\n');
  CHECK(lines[0] == "source,destination,hops,nodes,L,D,cost");
  const auto cols = split(lines[1], ',');
  REQUIRE(cols.size() == 7);
  CHECK(cols[0] == "0");
  CHECK(cols[1] == "2");
  CHECK(cols[2] == "2");
  CHECK(cols[3] == "0;1;2");
  CHECK(std::stod(cols[6]) == routes[0].cost);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(format_double(INFINITY) == "inf");
  CsvRow row;
  row << std::size_t{3} << 0.5 << true << "x";
  CHECK(row.str() == "3,0.5,1,x");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
}
