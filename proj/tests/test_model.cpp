#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "mrmc/model.hpp"
#include "oracle.hpp"

using namespace mrmc;

namespace {

Topology two_nodes(int radios = 1, int channels = 1) {
  Topology t;
  t.nodes = {{"A", 0, 0, radios}, {"B", 100, 0, radios}};
  t.channels = channels;
  t.comm_range = 250;
  t.interference_range = 500;
  t.commodities = {{0, 1, 1.0}};
  return t;
}

Topology chain3(int radios = 1, int channels = 1) {
  Topology t;
  t.nodes = {{"A", 0, 0, radios}, {"M", 200, 0, radios}, {"D", 400, 0, radios}};
  t.channels = channels;
  t.comm_range = 250;
  t.interference_range = 500;
  t.commodities = {{0, 2, 1.0}};
  return t;
}

// out-edge lists under the endpoint exclusions, built independently of the
// library enumeration
std::vector<std::vector<int>> exclusion_graph(const Topology& t) {
  std::set<int> sources, destinations;
  for (const auto& c : t.commodities) {
    sources.insert(c.source);
    destinations.insert(c.destination);
  }
  const int n = static_cast<int>(t.nodes.size());
  std::vector<std::vector<int>> edges(n);
  for (int u = 0; u < n; ++u) {
    if (destinations.count(u)) continue;
    for (int v = 0; v < n; ++v) {
      if (u == v || sources.count(v)) continue;
      const double dx = t.nodes[u].x - t.nodes[v].x;
      const double dy = t.nodes[u].y - t.nodes[v].y;
      if (std::sqrt(dx * dx + dy * dy) <= t.comm_range) edges[u].push_back(v);
    }
  }
  return edges;
}

}  // namespace

TEST_CASE("two adjacent nodes yield exactly one tuple") {
  const auto tuples = enumerate_tuples(two_nodes());
  REQUIRE(tuples.size() == 1);
  CHECK(tuples[0].tx == 0);
  CHECK(tuples[0].rx == 1);  // B->A excluded: B is a destination, A a source
  CHECK(tuples[0].capacity == doctest::Approx(1.0));
}

TEST_CASE("tuple count multiplies radios and channels") {
  const auto tuples = enumerate_tuples(two_nodes(2, 2));
  CHECK(tuples.size() == 2 * 2 * 2);
}

TEST_CASE("3-node chain enumerates the two relay hops") {
  const auto tuples = enumerate_tuples(chain3());
  REQUIRE(tuples.size() == 2);
  CHECK(tuples[0].tx == 0);
  CHECK(tuples[0].rx == 1);
  CHECK(tuples[1].tx == 1);
  CHECK(tuples[1].rx == 2);
}

TEST_CASE("tuples are sorted by tx, rx, tx_radio, rx_radio, channel") {
  Topology t = chain3(2, 3);
  const auto tuples = enumerate_tuples(t);
  auto key = [](const Tuple& p) {
    return std::tuple{p.tx, p.rx, p.tx_radio, p.rx_radio, p.channel};
  };
  for (std::size_t i = 1; i < tuples.size(); ++i) CHECK(key(tuples[i - 1]) < key(tuples[i]));
}

TEST_CASE("channel growth strictly extends the tuple set in per-channel mode") {
  Topology small = chain3(2, 2);
  Topology large = chain3(2, 3);
  const auto a = enumerate_tuples(small);
  const auto b = enumerate_tuples(large);
  CHECK(b.size() > a.size());
  std::set<std::tuple<int, int, int, int, int>> in_b;
  for (const auto& p : b) in_b.insert({p.tx, p.rx, p.tx_radio, p.rx_radio, p.channel});
  for (const auto& p : a) {
    CHECK(in_b.count({p.tx, p.rx, p.tx_radio, p.rx_radio, p.channel}) == 1);
    CHECK(p.capacity == doctest::Approx(1.0));  // rate untouched by channel count
  }
}

TEST_CASE("total-fixed bandwidth splits capacity over channels") {
  Topology t = chain3(1, 4);
  t.bandwidth = {BandwidthMode::TotalFixed, 8.0};
  const auto tuples = enumerate_tuples(t);
  for (const auto& p : tuples) CHECK(p.capacity * t.channels == doctest::Approx(8.0));
}

TEST_CASE("per-link energy overrides reach the tuples") {
  Topology t = chain3();
  t.energy_overrides = {{0, 1, 2.0, 3.0}};
  const auto tuples = enumerate_tuples(t);
  CHECK(tuples[0].e_tx == doctest::Approx(2.0));
  CHECK(tuples[0].e_rx == doctest::Approx(3.0));
  CHECK(tuples[1].e_tx == doctest::Approx(0.5));
}

TEST_CASE("shortest path hops: adjacent, forced relay, grid") {
  CHECK(shortest_path_hops(two_nodes(), two_nodes().commodities[0]) == 1);
  CHECK(shortest_path_hops(chain3(), chain3().commodities[0]) == 2);

  // 5x5 grid, 200 m spacing, comm 250: axis-aligned links only
  Topology grid;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x)
      grid.nodes.push_back({"g" + std::to_string(y * 5 + x), x * 200.0, y * 200.0, 1});
  grid.comm_range = 250;
  grid.interference_range = 500;
  grid.commodities = {{0, 24, 1.0}};
  const int expected = oracle::bfs_hops(exclusion_graph(grid), 0, 24);
  CHECK(expected == 8);
  CHECK(shortest_path_hops(grid, grid.commodities[0]) == 8);
}

TEST_CASE("shortest path hops agrees with the oracle on random topologies") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GenerateParams params;
    params.nodes = 8;
    params.area_side = 520;
    params.seed = seed;
    params.commodities = 2;
    const Topology t = generate_random(params);
    const auto edges = exclusion_graph(t);
    for (const auto& c : t.commodities) {
      const int expected = oracle::bfs_hops(edges, c.source, c.destination);
      if (expected < 0) {
        CHECK_THROWS_AS(shortest_path_hops(t, c), NoPathError);
      } else {
        CHECK(shortest_path_hops(t, c) == expected);
      }
    }
  }
}

TEST_CASE("hop count is invariant under relabeling and uniform scaling") {
  Topology t = chain3();
  const int base = shortest_path_hops(t, t.commodities[0]);

  Topology relabeled = t;
  std::swap(relabeled.nodes[0], relabeled.nodes[2]);
  relabeled.commodities = {{2, 0, 1.0}};
  CHECK(shortest_path_hops(relabeled, relabeled.commodities[0]) == base);

  Topology scaled = t;
  for (auto& n : scaled.nodes) {
    n.x *= 0.5;
    n.y *= 0.5;
  }
  scaled.comm_range *= 0.5;
  scaled.interference_range *= 0.5;
  CHECK(shortest_path_hops(scaled, scaled.commodities[0]) == base);
}

TEST_CASE("unreachable destination raises a no-path error") {
  Topology t = two_nodes();
  t.nodes[1].x = 1000;  // out of range
  CHECK_THROWS_AS(shortest_path_hops(t, t.commodities[0]), NoPathError);
}

TEST_CASE("shared endpoints are shut out by the literal exclusions") {
  // B is A's destination and also a source toward C. Applied literally, B
  // can neither receive (it is a source) nor transmit (it is a
  // destination), so both commodities are cut off until the relaxation
  // flag is set.
  Topology t;
  t.nodes = {{"A", 0, 0, 1}, {"B", 200, 0, 1}, {"C", 400, 0, 1}};
  t.comm_range = 250;
  t.interference_range = 500;
  t.commodities = {{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK_THROWS_AS(shortest_path_hops(t, t.commodities[0]), NoPathError);
  CHECK_THROWS_AS(shortest_path_hops(t, t.commodities[1]), NoPathError);

  Topology relaxed = t;
  relaxed.relax_endpoint_exclusions = true;
  CHECK(shortest_path_hops(relaxed, relaxed.commodities[0]) == 1);
  CHECK(shortest_path_hops(relaxed, relaxed.commodities[1]) == 1);
}

TEST_CASE("topology validation names the violated invariant") {
  Topology t = two_nodes();
  t.interference_range = 100;
  CHECK_THROWS_WITH_AS(validate_topology(t), "interference_range must be >= comm_range",
                       ValidationError);

  Topology dup = two_nodes();
  dup.nodes[1].id = "A";
  CHECK_THROWS_AS(validate_topology(dup), ValidationError);

  Topology bad_radio = two_nodes();
  bad_radio.nodes[0].radios = 0;
  CHECK_THROWS_AS(validate_topology(bad_radio), ValidationError);

  Topology bad_commodity = two_nodes();
  bad_commodity.commodities[0].destination = 0;
  CHECK_THROWS_AS(validate_topology(bad_commodity), ValidationError);

  Topology bad_demand = two_nodes();
  bad_demand.commodities[0].demand = 0.0;
  CHECK_THROWS_AS(validate_topology(bad_demand), ValidationError);
}

TEST_CASE("topology JSON round-trips") {
  Topology t = chain3(2, 3);
  t.energy.e_tx = 0.7;
  t.energy.e_rx = 0.3;
  t.energy_overrides = {{0, 1, 1.0, 1.0}};
  const LoadResult back = load_topology_text(topology_to_json(t));
  CHECK(back.topology.nodes.size() == 3);
  CHECK(back.topology.channels == 3);
  CHECK(back.topology.nodes[1].radios == 2);
  CHECK(back.topology.energy.e_tx == doctest::Approx(0.7));
  CHECK(back.topology.energy_overrides.size() == 1);
  CHECK(back.topology.commodities[0].destination == 2);
}

TEST_CASE("parser rejects unknown fields unless lenient") {
  const std::string text = R"({
    "nodes": [{"id": "A", "x": 0, "y": 0}, {"id": "B", "x": 100, "y": 0}],
    "comm_range": 250, "interference_range": 500,
    "commodities": [{"src": "A", "dst": "B"}],
    "space_weather": true
  })";
  CHECK_THROWS_AS(load_topology_text(text), ParseError);
  const LoadResult lenient = load_topology_text(text, {.strict = false});
  REQUIRE(lenient.warnings.size() == 1);
  CHECK(lenient.warnings[0].find("space_weather") != std::string::npos);
}

TEST_CASE("parser defaults sleep power to 1% of unit energy") {
  const std::string text = R"({
    "nodes": [{"id": "A", "x": 0, "y": 0}, {"id": "B", "x": 100, "y": 0}],
    "comm_range": 250, "interference_range": 500,
    "commodities": [{"src": "A", "dst": "B"}],
    "energy": {"e_tx": 1.5, "e_rx": 0.5}
  })";
  const LoadResult r = load_topology_text(text);
  CHECK(r.topology.energy.p0_sleep == doctest::Approx(0.02));
}

TEST_CASE("generation is deterministic and validates its inputs") {
  GenerateParams p;
  p.nodes = 25;
  p.area_side = 1000;
  p.seed = 7;
  p.commodities = 3;
  const Topology a = generate_random(p);
  const Topology b = generate_random(p);
  REQUIRE(a.nodes.size() == 25);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].x == b.nodes[i].x);
    CHECK(a.nodes[i].y == b.nodes[i].y);
    CHECK(a.nodes[i].x >= 0.0);
    CHECK(a.nodes[i].x <= 1000.0);
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(a.commodities[k].source == b.commodities[k].source);
    CHECK(a.commodities[k].destination == b.commodities[k].destination);
  }
  // endpoints sampled without replacement
  std::set<int> endpoints;
  for (const auto& c : a.commodities) {
    endpoints.insert(c.source);
    endpoints.insert(c.destination);
  }
  CHECK(endpoints.size() == 6);

  GenerateParams one;
  one.nodes = 1;
  CHECK_THROWS_AS(generate_random(one), ValidationError);
}
