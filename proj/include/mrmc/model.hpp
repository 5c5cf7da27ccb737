#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrmc/errors.hpp"

namespace mrmc {

/// A node of the physical network. Positions are meters, `radios` is the
/// number of radio interfaces installed on the node.
struct NodeSpec {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  int radios = 1;
};

/// A commodity flow: `demand` is the requested end-to-end rate; the solver
/// delivers a common fraction lambda of every demand.
struct Commodity {
  int source = -1;       // node index
  int destination = -1;  // node index
  double demand = 1.0;
};

enum class BandwidthMode {
  PerChannelFixed,  // every tuple gets `rate`, independent of channel count
  TotalFixed,       // `rate` is the system bandwidth, split evenly: rate / |C|
};

struct Bandwidth {
  BandwidthMode mode = BandwidthMode::PerChannelFixed;
  double rate = 1.0;
};

/// Uniform per-bit energies and the sleeping-radio power draw. Directed-link
/// overrides live in Topology::energy_overrides.
struct EnergyParams {
  double e_tx = 0.5;
  double e_rx = 0.5;
  double p0_sleep = 0.01;  // defaults to 1% of (e_tx + e_rx) per unit rate
};

/// Per-link energy override; applies to every tuple of the directed link.
struct LinkEnergyOverride {
  int tx = -1;
  int rx = -1;
  double e_tx = 0.0;
  double e_rx = 0.0;
};

struct Topology {
  std::vector<NodeSpec> nodes;
  int channels = 1;
  double comm_range = 250.0;
  double interference_range = 500.0;
  std::vector<Commodity> commodities;
  Bandwidth bandwidth;
  EnergyParams energy;
  std::vector<LinkEnergyOverride> energy_overrides;
  // When true, sources may receive and destinations may transmit; flow
  // conservation at foreign endpoints then carries relayed traffic.
  bool relax_endpoint_exclusions = false;

  int node_index(const std::string& id) const;  // -1 if unknown
  double distance(int a, int b) const;
  bool is_source(int node) const;
  bool is_destination(int node) const;
  int total_radios() const;
};

/// One point of the multi-dimensional resource space: a directed in-range
/// link plus the transmit radio, receive radio and channel it uses.
struct Tuple {
  int tx = -1;
  int rx = -1;
  int tx_radio = 0;
  int rx_radio = 0;
  int channel = 0;
  double capacity = 1.0;
  double e_tx = 0.5;
  double e_rx = 0.5;
};

/// Throws ValidationError naming the first violated invariant.
void validate_topology(const Topology& topology);

/// All tuples of the topology, sorted by (tx, rx, tx_radio, rx_radio,
/// channel). Links out of commodity destinations and into commodity sources
/// are excluded unless `relax_endpoint_exclusions` is set.
std::vector<Tuple> enumerate_tuples(const Topology& topology);

/// Minimum hop count from the commodity source to its destination over the
/// communication-range link graph (honoring the same endpoint exclusions as
/// enumerate_tuples). Throws NoPathError when unreachable.
int shortest_path_hops(const Topology& topology, const Commodity& commodity);

struct ParseOptions {
  bool strict = true;  // unknown fields: error when true, warning otherwise
};

struct LoadResult {
  Topology topology;
  std::vector<std::string> warnings;
};

/// Parses the JSON topology format (see README for the schema) and validates
/// the result. Throws ParseError / ValidationError.
LoadResult load_topology_text(const std::string& text, const ParseOptions& options = {});
LoadResult load_topology_file(const std::string& path, const ParseOptions& options = {});

std::string topology_to_json(const Topology& topology);

struct GenerateParams {
  int nodes = 25;
  double area_side = 1000.0;  // square side, meters
  std::uint64_t seed = 1;
  int commodities = 3;
  double comm_range = 250.0;
  double interference_range = 500.0;
  int radios = 1;
  int channels = 1;
  double demand = 1.0;
  Bandwidth bandwidth;
  EnergyParams energy;
};

/// Deterministic random topology: uniform node placement, commodity
/// endpoints sampled without replacement.
Topology generate_random(const GenerateParams& params);

}  // namespace mrmc
