#pragma once

#include <string>
#include <vector>

#include "mrmc/energy.hpp"
#include "mrmc/scheduling.hpp"

namespace mrmc {

/// A (channel count, radios per node) operating point.
struct CrConfig {
  int channels = 1;
  int radios = 1;
};

struct ConfigResult {
  CrConfig config;
  double capacity = 0.0;
  EnergyReport report;
  SolveStats stats;
  SchedulePlan plan;
  std::string status = "ok";  // "ok", "capped" or "error: ..."
  double wall_ms = 0.0;
};

/// Applies the configuration (channel count, uniform radios) to a copy of
/// the base topology.
Topology apply_config(const Topology& base, const CrConfig& config);

/// Full pipeline for one configuration: enumerate tuples, build the MDCG,
/// two-stage solve, energy report. An unreachable commodity yields capacity
/// zero, not an error.
ConfigResult run_config(const Topology& base, const CrConfig& config,
                        const TwoStageOptions& options = {});

struct SweepOptions {
  TwoStageOptions solve;
  int workers = 1;  // grid points solved in parallel; results order-independent
};

/// One result per (channels, radios) grid point, sorted by (channels,
/// radios). Per-config errors are recorded in the row; the sweep continues.
std::vector<ConfigResult> sweep_cr(const Topology& base, int channels_from, int channels_to,
                                   int radios_from, int radios_to,
                                   const SweepOptions& options = {});

struct RelaxationPoint {
  double rho = 1.0;
  EnergyReport report;
  SchedulePlan plan;
  double wall_ms = 0.0;
};

/// Stage 1 is solved once at the given configuration; stage 2 is re-run at
/// every throughput target rho * capacity. rho = 1 reproduces run_config.
std::vector<RelaxationPoint> relaxation_sweep(const Topology& base, const CrConfig& config,
                                              const std::vector<double>& fractions,
                                              const TwoStageOptions& options = {});

}  // namespace mrmc
