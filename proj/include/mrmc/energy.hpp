#pragma once

#include <vector>

#include "mrmc/model.hpp"
#include "mrmc/scheduling.hpp"

namespace mrmc {

/// Per-slot energy breakdown and the efficiency metrics derived from it.
/// `upper_bound` / `efficiency_fraction` are only meaningful when
/// `has_upper_bound` is set (homogeneous unit energies, all commodities
/// reachable).
struct EnergyReport {
  double e_transmission = 0.0;
  double e_sleep = 0.0;
  double throughput = 0.0;
  double efficiency = 0.0;
  double upper_bound = 0.0;
  double efficiency_fraction = 0.0;
  bool has_upper_bound = false;
};

/// Sum over tuples and commodities of flow * (e_tx + e_rx).
double transmission_energy(const SchedulePlan& plan, const std::vector<Tuple>& tuples);

/// p0 * (total radios - sum over active sets of 2 * alpha * |I|). Throws
/// ValidationError if the result is negative beyond tolerance (impossible
/// for a valid plan).
double sleep_energy(const SchedulePlan& plan, const Topology& topology);

/// Closed-form efficiency upper bound for homogeneous unit energies:
/// 1 / (mean over commodities of (e_tx + e_rx) * shortest-path hops).
/// Throws ValidationError for heterogeneous energies, NoPathError when a
/// commodity is unreachable.
double ee_upper_bound(const Topology& topology);

/// Full report: throughput per unit of energy, with the upper bound filled
/// in when it is defined for this topology.
EnergyReport energy_efficiency(const SchedulePlan& plan, const std::vector<Tuple>& tuples,
                               const Topology& topology);

}  // namespace mrmc
