#include "mrmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mrmc {

namespace {

using nlohmann::json;

bool in_range(const Topology& t, int a, int b) { return t.distance(a, b) <= t.comm_range; }

std::set<int> source_set(const Topology& t) {
  std::set<int> s;
  for (const auto& c : t.commodities) s.insert(c.source);
  return s;
}

std::set<int> destination_set(const Topology& t) {
  std::set<int> s;
  for (const auto& c : t.commodities) s.insert(c.destination);
  return s;
}

}  // namespace

int Topology::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

double Topology::distance(int a, int b) const {
  const double dx = nodes[a].x - nodes[b].x;
  const double dy = nodes[a].y - nodes[b].y;
  return std::hypot(dx, dy);
}

bool Topology::is_source(int node) const {
  for (const auto& c : commodities)
    if (c.source == node) return true;
  return false;
}

bool Topology::is_destination(int node) const {
  for (const auto& c : commodities)
    if (c.destination == node) return true;
  return false;
}

int Topology::total_radios() const {
  int total = 0;
  for (const auto& n : nodes) total += n.radios;
  return total;
}

void validate_topology(const Topology& t) {
  if (t.nodes.size() < 2) throw ValidationError("topology needs at least 2 nodes");
  std::set<std::string> ids;
  for (const auto& n : t.nodes) {
    if (!ids.insert(n.id).second)
      throw ValidationError("duplicate node id '" + n.id + "'");
    if (!std::isfinite(n.x) || !std::isfinite(n.y))
      throw ValidationError("non-finite position for node '" + n.id + "'");
    if (n.radios < 1)
      throw ValidationError("node '" + n.id + "' must have at least 1 radio");
  }
  if (t.channels < 1) throw ValidationError("channel count must be >= 1");
  if (!(t.comm_range > 0.0)) throw ValidationError("comm_range must be positive");
  if (t.interference_range < t.comm_range)
    throw ValidationError("interference_range must be >= comm_range");
  if (!(t.bandwidth.rate > 0.0)) throw ValidationError("bandwidth rate must be positive");
  if (t.energy.e_tx < 0.0 || t.energy.e_rx < 0.0)
    throw ValidationError("unit energies must be non-negative");
  if (t.energy.p0_sleep < 0.0) throw ValidationError("sleep power must be non-negative");
  for (const auto& c : t.commodities) {
    if (c.source < 0 || c.source >= static_cast<int>(t.nodes.size()) || c.destination < 0 ||
        c.destination >= static_cast<int>(t.nodes.size()))
      throw ValidationError("commodity references an unknown node");
    if (c.source == c.destination)
      throw ValidationError("commodity source and destination must be distinct");
    if (!(c.demand > 0.0)) throw ValidationError("commodity demand must be positive");
  }
  for (const auto& o : t.energy_overrides) {
    if (o.tx < 0 || o.tx >= static_cast<int>(t.nodes.size()) || o.rx < 0 ||
        o.rx >= static_cast<int>(t.nodes.size()))
      throw ValidationError("energy override references an unknown node");
    if (o.e_tx < 0.0 || o.e_rx < 0.0)
      throw ValidationError("override unit energies must be non-negative");
  }
}

std::vector<Tuple> enumerate_tuples(const Topology& t) {
  validate_topology(t);
  const auto sources = source_set(t);
  const auto destinations = destination_set(t);
  const int n = static_cast<int>(t.nodes.size());

  const double tuple_rate = t.bandwidth.mode == BandwidthMode::PerChannelFixed
                                ? t.bandwidth.rate
                                : t.bandwidth.rate / t.channels;

  std::vector<Tuple> tuples;
  for (int u = 0; u < n; ++u) {
    if (!t.relax_endpoint_exclusions && destinations.count(u)) continue;
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (!t.relax_endpoint_exclusions && sources.count(v)) continue;
      if (!in_range(t, u, v)) continue;
      double e_tx = t.energy.e_tx;
      double e_rx = t.energy.e_rx;
      for (const auto& o : t.energy_overrides) {
        if (o.tx == u && o.rx == v) {
          e_tx = o.e_tx;
          e_rx = o.e_rx;
        }
      }
      for (int ru = 0; ru < t.nodes[u].radios; ++ru)
        for (int rv = 0; rv < t.nodes[v].radios; ++rv)
          for (int c = 0; c < t.channels; ++c)
            tuples.push_back({u, v, ru, rv, c, tuple_rate, e_tx, e_rx});
    }
  }
  return tuples;  // loop order == (tx, rx, tx_radio, rx_radio, channel) sort
}

int shortest_path_hops(const Topology& t, const Commodity& commodity) {
  const auto sources = source_set(t);
  const auto destinations = destination_set(t);
  const int n = static_cast<int>(t.nodes.size());

  std::vector<int> dist(n, -1);
  std::queue<int> queue;
  dist[commodity.source] = 0;
  queue.push(commodity.source);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    if (u == commodity.destination) return dist[u];
    if (!t.relax_endpoint_exclusions && destinations.count(u)) continue;  // cannot transmit
    for (int v = 0; v < n; ++v) {
      if (v == u || dist[v] >= 0) continue;
      if (!t.relax_endpoint_exclusions && sources.count(v)) continue;  // cannot receive
      if (!in_range(t, u, v)) continue;
      dist[v] = dist[u] + 1;
      queue.push(v);
    }
  }
  if (dist[commodity.destination] >= 0) return dist[commodity.destination];
  throw NoPathError("no path from '" + t.nodes[commodity.source].id + "' to '" +
                    t.nodes[commodity.destination].id + "'");
}

namespace {

const char* const kTopLevelKeys[] = {"nodes",
                                     "channels",
                                     "comm_range",
                                     "interference_range",
                                     "commodities",
                                     "bandwidth_mode",
                                     "per_channel_rate",
                                     "total_capacity",
                                     "energy",
                                     "energy_overrides",
                                     "relax_endpoint_exclusions"};

void check_keys(const json& object, std::initializer_list<const char*> known,
                const std::string& where, const ParseOptions& options,
                std::vector<std::string>* warnings) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) {
      const std::string msg = "unknown field '" + it.key() + "' in " + where;
      if (options.strict) throw ParseError(msg);
      warnings->push_back(msg);
    }
  }
}

double require_number(const json& object, const char* key, const std::string& where) {
  if (!object.contains(key)) throw ParseError("missing field '" + std::string(key) + "' in " + where);
  if (!object[key].is_number()) throw ParseError("field '" + std::string(key) + "' in " + where + " must be a number");
  return object[key].get<double>();
}

std::string node_ref(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw ParseError("node reference in " + where + " must be a string or integer id");
}

}  // namespace

LoadResult load_topology_text(const std::string& text, const ParseOptions& options) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("topology JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("topology JSON root must be an object");

  LoadResult result;
  Topology& t = result.topology;
  check_keys(root, {kTopLevelKeys[0], kTopLevelKeys[1], kTopLevelKeys[2], kTopLevelKeys[3],
                    kTopLevelKeys[4], kTopLevelKeys[5], kTopLevelKeys[6], kTopLevelKeys[7],
                    kTopLevelKeys[8], kTopLevelKeys[9], kTopLevelKeys[10]},
             "topology", options, &result.warnings);

  if (!root.contains("nodes") || !root["nodes"].is_array())
    throw ParseError("topology requires a 'nodes' array");
  for (const auto& jn : root["nodes"]) {
    check_keys(jn, {"id", "x", "y", "radios"}, "node", options, &result.warnings);
    NodeSpec n;
    if (!jn.contains("id")) throw ParseError("node without 'id'");
    n.id = node_ref(jn["id"], "node");
    n.x = require_number(jn, "x", "node '" + n.id + "'");
    n.y = require_number(jn, "y", "node '" + n.id + "'");
    n.radios = jn.contains("radios") ? jn["radios"].get<int>() : 1;
    t.nodes.push_back(std::move(n));
  }

  t.channels = root.contains("channels") ? root["channels"].get<int>() : 1;
  t.comm_range = require_number(root, "comm_range", "topology");
  t.interference_range = require_number(root, "interference_range", "topology");

  if (root.contains("commodities")) {
    for (const auto& jc : root["commodities"]) {
      check_keys(jc, {"src", "dst", "demand"}, "commodity", options, &result.warnings);
      Commodity c;
      if (!jc.contains("src") || !jc.contains("dst"))
        throw ParseError("commodity requires 'src' and 'dst'");
      const std::string src = node_ref(jc["src"], "commodity");
      const std::string dst = node_ref(jc["dst"], "commodity");
      c.source = t.node_index(src);
      c.destination = t.node_index(dst);
      if (c.source < 0) throw ParseError("commodity src '" + src + "' is not a node");
      if (c.destination < 0) throw ParseError("commodity dst '" + dst + "' is not a node");
      c.demand = jc.contains("demand") ? jc["demand"].get<double>() : 1.0;
      t.commodities.push_back(c);
    }
  }

  if (root.contains("bandwidth_mode")) {
    const std::string mode = root["bandwidth_mode"].get<std::string>();
    if (mode == "per_channel")
      t.bandwidth.mode = BandwidthMode::PerChannelFixed;
    else if (mode == "total")
      t.bandwidth.mode = BandwidthMode::TotalFixed;
    else
      throw ParseError("bandwidth_mode must be 'per_channel' or 'total'");
  }
  if (t.bandwidth.mode == BandwidthMode::PerChannelFixed) {
    if (root.contains("per_channel_rate")) t.bandwidth.rate = root["per_channel_rate"].get<double>();
    if (root.contains("total_capacity"))
      throw ParseError("'total_capacity' requires bandwidth_mode 'total'");
  } else {
    if (!root.contains("total_capacity"))
      throw ParseError("bandwidth_mode 'total' requires 'total_capacity'");
    t.bandwidth.rate = root["total_capacity"].get<double>();
  }

  if (root.contains("energy")) {
    const auto& je = root["energy"];
    check_keys(je, {"e_tx", "e_rx", "p0_sleep"}, "energy", options, &result.warnings);
    if (je.contains("e_tx")) t.energy.e_tx = je["e_tx"].get<double>();
    if (je.contains("e_rx")) t.energy.e_rx = je["e_rx"].get<double>();
    if (je.contains("p0_sleep"))
      t.energy.p0_sleep = je["p0_sleep"].get<double>();
    else
      t.energy.p0_sleep = 0.01 * (t.energy.e_tx + t.energy.e_rx);
  }

  if (root.contains("energy_overrides")) {
    for (const auto& jo : root["energy_overrides"]) {
      check_keys(jo, {"tx", "rx", "e_tx", "e_rx"}, "energy override", options, &result.warnings);
      LinkEnergyOverride o;
      const std::string tx = node_ref(jo.at("tx"), "energy override");
      const std::string rx = node_ref(jo.at("rx"), "energy override");
      o.tx = t.node_index(tx);
      o.rx = t.node_index(rx);
      if (o.tx < 0 || o.rx < 0) throw ParseError("energy override references unknown node");
      o.e_tx = require_number(jo, "e_tx", "energy override");
      o.e_rx = require_number(jo, "e_rx", "energy override");
      t.energy_overrides.push_back(o);
    }
  }

  if (root.contains("relax_endpoint_exclusions"))
    t.relax_endpoint_exclusions = root["relax_endpoint_exclusions"].get<bool>();

  validate_topology(t);
  return result;
}

LoadResult load_topology_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topology file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_topology_text(buffer.str(), options);
}

std::string topology_to_json(const Topology& t) {
  json root;
  for (const auto& n : t.nodes)
    root["nodes"].push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}, {"radios", n.radios}});
  root["channels"] = t.channels;
  root["comm_range"] = t.comm_range;
  root["interference_range"] = t.interference_range;
  for (const auto& c : t.commodities)
    root["commodities"].push_back({{"src", t.nodes[c.source].id},
                                   {"dst", t.nodes[c.destination].id},
                                   {"demand", c.demand}});
  if (t.bandwidth.mode == BandwidthMode::PerChannelFixed) {
    root["bandwidth_mode"] = "per_channel";
    root["per_channel_rate"] = t.bandwidth.rate;
  } else {
    root["bandwidth_mode"] = "total";
    root["total_capacity"] = t.bandwidth.rate;
  }
  root["energy"] = {{"e_tx", t.energy.e_tx}, {"e_rx", t.energy.e_rx}, {"p0_sleep", t.energy.p0_sleep}};
  for (const auto& o : t.energy_overrides)
    root["energy_overrides"].push_back({{"tx", t.nodes[o.tx].id},
                                        {"rx", t.nodes[o.rx].id},
                                        {"e_tx", o.e_tx},
                                        {"e_rx", o.e_rx}});
  if (t.relax_endpoint_exclusions) root["relax_endpoint_exclusions"] = true;
  return root.dump(2);
}

namespace {

// Portable uniform sampling on top of mt19937_64: the distributions in
// <random> are implementation-defined, these are not.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int bound) {  // [0, bound)
  const std::uint64_t span = static_cast<std::uint64_t>(bound);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<int>(draw % span);
}

}  // namespace

Topology generate_random(const GenerateParams& p) {
  if (p.nodes < 2) throw ValidationError("generation needs at least 2 nodes");
  if (p.commodities < 1) throw ValidationError("generation needs at least 1 commodity");
  if (p.nodes < 2 * p.commodities)
    throw ValidationError("generation needs 2 distinct endpoints per commodity");

  std::mt19937_64 rng(p.seed);
  Topology t;
  t.channels = p.channels;
  t.comm_range = p.comm_range;
  t.interference_range = p.interference_range;
  t.bandwidth = p.bandwidth;
  t.energy = p.energy;

  for (int i = 0; i < p.nodes; ++i) {
    NodeSpec n;
    n.id = "n" + std::to_string(i);
    n.x = uniform01(rng) * p.area_side;
    n.y = uniform01(rng) * p.area_side;
    n.radios = p.radios;
    t.nodes.push_back(std::move(n));
  }

  // Endpoints sampled without replacement: partial Fisher-Yates.
  std::vector<int> pool(p.nodes);
  for (int i = 0; i < p.nodes; ++i) pool[i] = i;
  for (int i = 0; i < 2 * p.commodities; ++i) {
    const int j = i + uniform_int(rng, p.nodes - i);
    std::swap(pool[i], pool[j]);
  }
  for (int k = 0; k < p.commodities; ++k)
    t.commodities.push_back({pool[2 * k], pool[2 * k + 1], p.demand});

  validate_topology(t);
  return t;
}

}  // namespace mrmc
