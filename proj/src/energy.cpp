#include "mrmc/energy.hpp"

#include <cmath>

namespace mrmc {

double transmission_energy(const SchedulePlan& plan, const std::vector<Tuple>& tuples) {
  double total = 0.0;
  for (std::size_t t = 0; t < tuples.size(); ++t)
    total += plan.total_flow(static_cast<int>(t)) * (tuples[t].e_tx + tuples[t].e_rx);
  return total;
}

double sleep_energy(const SchedulePlan& plan, const Topology& topology) {
  double active = 0.0;
  for (std::size_t m = 0; m < plan.active_sets.size(); ++m)
    active += 2.0 * plan.alphas[m] * static_cast<double>(plan.active_sets[m].members.size());
  const double value = topology.energy.p0_sleep * (topology.total_radios() - active);
  if (value < -1e-9)
    throw ValidationError("negative sleep energy: schedule activates more radios than exist");
  return std::max(value, 0.0);
}

double ee_upper_bound(const Topology& topology) {
  if (topology.commodities.empty())
    throw ValidationError("upper bound undefined without commodities");
  const double unit = topology.energy.e_tx + topology.energy.e_rx;
  for (const auto& o : topology.energy_overrides)
    if (o.e_tx + o.e_rx != unit)
      throw ValidationError("upper bound undefined for heterogeneous unit energies");
  const double count = static_cast<double>(topology.commodities.size());
  double denom = 0.0;
  for (const auto& c : topology.commodities)
    denom += (1.0 / count) * unit * static_cast<double>(shortest_path_hops(topology, c));
  if (denom <= 0.0) throw ValidationError("upper bound undefined for zero-energy paths");
  return 1.0 / denom;
}

EnergyReport energy_efficiency(const SchedulePlan& plan, const std::vector<Tuple>& tuples,
                               const Topology& topology) {
  EnergyReport report;
  report.e_transmission = transmission_energy(plan, tuples);
  report.e_sleep = sleep_energy(plan, topology);
  double demand = 0.0;
  for (const auto& c : topology.commodities) demand += c.demand;
  report.throughput = plan.lambda * demand;
  const double total_energy = report.e_transmission + report.e_sleep;
  report.efficiency =
      (report.throughput > 0.0 && total_energy > 0.0) ? report.throughput / total_energy : 0.0;
  try {
    report.upper_bound = ee_upper_bound(topology);
    report.has_upper_bound = true;
    report.efficiency_fraction = report.efficiency / report.upper_bound;
  } catch (const Error&) {
    report.upper_bound = 0.0;
    report.efficiency_fraction = 0.0;
    report.has_upper_bound = false;
  }
  return report;
}

}  // namespace mrmc
