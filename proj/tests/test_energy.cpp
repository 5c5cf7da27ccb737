#include <cmath>

#include "doctest.h"
#include "mrmc/energy.hpp"

using namespace mrmc;

namespace {

Topology chain3(int radios = 1, int channels = 1) {
  Topology t;
  t.nodes = {{"A", 0, 0, radios}, {"M", 200, 0, radios}, {"D", 400, 0, radios}};
  t.channels = channels;
  t.comm_range = 250;
  t.interference_range = 500;
  t.commodities = {{0, 2, 1.0}};
  return t;
}

// the optimal chain plan for one radio and one channel, written by hand
SchedulePlan chain_plan() {
  SchedulePlan plan;
  plan.num_commodities = 1;
  plan.lambda = 0.5;
  plan.tuple_flows = {0.5, 0.5};
  plan.active_sets = {{{0}}, {{1}}};
  plan.alphas = {0.5, 0.5};
  return plan;
}

}  // namespace

TEST_CASE("transmission energy sums flow times unit energy") {
  const Topology t = chain3();
  const auto tuples = enumerate_tuples(t);

  SchedulePlan idle;
  idle.num_commodities = 1;
  idle.tuple_flows = {0.0, 0.0};
  CHECK(transmission_energy(idle, tuples) == doctest::Approx(0.0));

  CHECK(transmission_energy(chain_plan(), tuples) == doctest::Approx(1.0));
}

TEST_CASE("transmission energy over a two-path split") {
  // flows (0.3, 0.3) on a 2-hop path and (0.7, 0.7, 0.7) on a 3-hop path
  std::vector<Tuple> tuples(5);
  for (auto& p : tuples) {
    p.e_tx = 0.5;
    p.e_rx = 0.5;
  }
  SchedulePlan plan;
  plan.num_commodities = 1;
  plan.tuple_flows = {0.3, 0.3, 0.7, 0.7, 0.7};
  CHECK(transmission_energy(plan, tuples) == doctest::Approx(2.7));
}

TEST_CASE("transmission energy is linear in the flows") {
  const Topology t = chain3();
  const auto tuples = enumerate_tuples(t);
  SchedulePlan plan = chain_plan();
  const double base = transmission_energy(plan, tuples);
  for (double& f : plan.tuple_flows) f *= 3.0;
  CHECK(transmission_energy(plan, tuples) == doctest::Approx(3.0 * base));
}

TEST_CASE("sleep energy counts idle radios") {
  // 25 nodes x 2 radios, idle network
  Topology big;
  for (int i = 0; i < 25; ++i)
    big.nodes.push_back({"n" + std::to_string(i), double(i * 10), 0.0, 2});
  big.comm_range = 250;
  big.interference_range = 500;
  big.commodities = {{0, 24, 1.0}};
  SchedulePlan idle;
  idle.num_commodities = 1;
  CHECK(sleep_energy(idle, big) == doctest::Approx(0.5));  // 0.01 * 50

  // chain plan: 3 radios, two singleton sets half a slot each
  const Topology t = chain3();
  CHECK(sleep_energy(chain_plan(), t) == doctest::Approx(0.01));

  // fully busy single-tuple network: 2 radios, alpha = 1, |I| = 1
  Topology pair;
  pair.nodes = {{"A", 0, 0, 1}, {"B", 100, 0, 1}};
  pair.comm_range = 250;
  pair.interference_range = 500;
  pair.commodities = {{0, 1, 1.0}};
  SchedulePlan busy;
  busy.num_commodities = 1;
  busy.tuple_flows = {1.0};
  busy.active_sets = {{{0}}};
  busy.alphas = {1.0};
  CHECK(sleep_energy(busy, pair) == doctest::Approx(0.0));
}

TEST_CASE("sleep energy rejects impossible activity") {
  const Topology t = chain3();
  SchedulePlan bogus;
  bogus.num_commodities = 1;
  bogus.tuple_flows = {0.0, 0.0};
  bogus.active_sets = {{{0, 1}}};
  bogus.alphas = {1.0};  // 2 alpha |I| = 4 > 3 radios
  CHECK_THROWS_AS(sleep_energy(bogus, t), ValidationError);
}

TEST_CASE("upper bound from shortest paths") {
  CHECK(ee_upper_bound(chain3()) == doctest::Approx(0.5));  // one 2-hop commodity

  Topology pair;
  pair.nodes = {{"A", 0, 0, 1}, {"B", 100, 0, 1}};
  pair.comm_range = 250;
  pair.interference_range = 500;
  pair.commodities = {{0, 1, 1.0}};
  CHECK(ee_upper_bound(pair) == doctest::Approx(1.0));

  // three disjoint component paths with hops 2, 3, 4 -> 1 / mean = 1/3
  Topology three;
  int first = 0;
  for (int hops : {2, 3, 4}) {
    const double y = hops * 2000.0;
    for (int i = 0; i <= hops; ++i)
      three.nodes.push_back({"p" + std::to_string(hops) + "_" + std::to_string(i), i * 200.0, y, 1});
    three.commodities.push_back({first, first + hops, 1.0});
    first += hops + 1;
  }
  three.comm_range = 250;
  three.interference_range = 500;
  CHECK(ee_upper_bound(three) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("upper bound requires homogeneous energies") {
  Topology t = chain3();
  t.energy_overrides = {{0, 1, 2.0, 2.0}};
  CHECK_THROWS_AS(ee_upper_bound(t), ValidationError);
}

TEST_CASE("upper bound requires reachable commodities") {
  Topology t = chain3();
  t.nodes[1].x = 5000.0;
  CHECK_THROWS_AS(ee_upper_bound(t), NoPathError);
}

TEST_CASE("efficiency report composes the terms") {
  const Topology t = chain3();
  const auto tuples = enumerate_tuples(t);
  const EnergyReport r = energy_efficiency(chain_plan(), tuples, t);
  CHECK(r.e_transmission == doctest::Approx(1.0));
  CHECK(r.e_sleep == doctest::Approx(0.01));
  CHECK(r.throughput == doctest::Approx(0.5));
  CHECK(r.efficiency == doctest::Approx(0.5 / 1.01));
  CHECK(r.has_upper_bound);
  CHECK(r.upper_bound == doctest::Approx(0.5));
  CHECK(r.efficiency_fraction == doctest::Approx((0.5 / 1.01) / 0.5));
  CHECK(r.efficiency <= r.upper_bound);
}

TEST_CASE("idle network reports zero efficiency") {
  const Topology t = chain3();
  const auto tuples = enumerate_tuples(t);
  SchedulePlan idle;
  idle.num_commodities = 1;
  idle.tuple_flows = {0.0, 0.0};
  const EnergyReport r = energy_efficiency(idle, tuples, t);
  CHECK(r.efficiency == doctest::Approx(0.0));
  CHECK(r.throughput == doctest::Approx(0.0));
}

TEST_CASE("single-hop commodity at capacity attains the bound exactly") {
  Topology pair;
  pair.nodes = {{"A", 0, 0, 1}, {"B", 100, 0, 1}};
  pair.comm_range = 250;
  pair.interference_range = 500;
  pair.commodities = {{0, 1, 1.0}};
  pair.energy.p0_sleep = 0.0;
  const auto tuples = enumerate_tuples(pair);
  SchedulePlan busy;
  busy.num_commodities = 1;
  busy.lambda = 1.0;
  busy.tuple_flows = {1.0};
  busy.active_sets = {{{0}}};
  busy.alphas = {1.0};
  const EnergyReport r = energy_efficiency(busy, tuples, pair);
  CHECK(r.efficiency == doctest::Approx(1.0));
  CHECK(r.upper_bound == doctest::Approx(1.0));
  CHECK(r.efficiency_fraction == doctest::Approx(1.0));
}

TEST_CASE("heterogeneous overrides drop the upper bound fields only") {
  Topology t = chain3();
  t.energy_overrides = {{0, 1, 2.0, 2.0}};
  auto tuples = enumerate_tuples(t);
  SchedulePlan plan = chain_plan();
  const EnergyReport r = energy_efficiency(plan, tuples, t);
  CHECK_FALSE(r.has_upper_bound);
  CHECK(r.e_transmission == doctest::Approx(0.5 * 4.0 + 0.5 * 1.0));
  CHECK(r.efficiency > 0.0);
}
