#pragma once

#include <string>
#include <vector>

#include "mrmc/conflict.hpp"
#include "mrmc/lp.hpp"
#include "mrmc/model.hpp"

namespace mrmc {

/// A fractional TDMA schedule plus the routed flows it carries.
struct SchedulePlan {
  std::vector<IndependentSet> active_sets;
  std::vector<double> alphas;        // slot fraction per active set
  std::vector<double> tuple_flows;   // [tuple * num_commodities + commodity]
  int num_commodities = 0;
  double lambda = 0.0;               // achieved fraction of every demand

  double flow(int tuple, int commodity) const {
    return tuple_flows[static_cast<std::size_t>(tuple) * num_commodities + commodity];
  }
  double total_flow(int tuple) const;
  double sum_alpha() const;
};

/// Column/variable layout of a built scheduling LP, used to read solutions
/// back and to price new independent-set columns.
struct LpLayout {
  int lambda_col = -1;
  int flow_col_base = -1;   // f(t,k) = flow_col_base + t * num_commodities + k
  int num_commodities = 0;
  int num_tuples = 0;
  std::vector<int> alpha_cols;          // one per independent set, in order
  std::vector<int> activity_row_of_tuple;
  int sum_alpha_row = -1;
  int throughput_row = -1;              // stage-2 equality row, -1 if absent
};

struct BuiltLp {
  LpProblem problem;
  LpLayout layout;
};

/// Stage-1 LP: maximize sum(lambda * f0) subject to per-commodity flow
/// conservation, the slot budget and per-tuple activity limits.
BuiltLp build_capacity_lp(const std::vector<Tuple>& tuples,
                          const std::vector<IndependentSet>& independent_sets,
                          const Topology& topology);

/// Stage-2 LP: the capacity LP plus the throughput equality
/// sum(lambda * f0) = f_star, objective min total transmission energy.
BuiltLp build_min_energy_lp(const std::vector<Tuple>& tuples,
                            const std::vector<IndependentSet>& independent_sets,
                            const Topology& topology, double f_star);

enum class Strategy { FullEnumeration, ColumnGeneration };

struct TwoStageOptions {
  Strategy strategy = Strategy::ColumnGeneration;
  double pricing_tol = 1e-7;
  int maximal_is_cap = kDefaultMaximalIsCap;
  int max_columns = 0;       // 0 = unlimited, reaching it sets the capped flag
  double time_limit_ms = 0;  // 0 = unlimited, exceeding it raises an error
  SolverOptions solver;
};

struct SolveStats {
  long simplex_iterations = 0;
  int pricing_rounds = 0;
  int columns = 0;
  bool capped = false;
};

struct TwoStageResult {
  double capacity = 0.0;        // f* = sum over commodities of lambda* f0
  double energy = 0.0;          // stage-2 transmission energy at f*
  SchedulePlan plan;            // minimum-energy plan achieving f*
  SolveStats stats;
};

/// Capacity stage followed by the minimum-energy stage at the achieved
/// capacity. ColumnGeneration prices independent sets on demand and keeps
/// stage-1 columns for stage 2; FullEnumeration requires an enumerable
/// maximal-IS space.
TwoStageResult solve_two_stage(const std::vector<Tuple>& tuples, const ConflictGraph& graph,
                               const Topology& topology, const TwoStageOptions& options = {});

/// Keeps the stage-1 state so stage 2 can be re-run at different throughput
/// targets (the relaxation experiment) without re-solving stage 1.
class TwoStageSolver {
 public:
  TwoStageSolver(const std::vector<Tuple>& tuples, const ConflictGraph& graph,
                 const Topology& topology, const TwoStageOptions& options = {});
  ~TwoStageSolver();
  TwoStageSolver(const TwoStageSolver&) = delete;

  double solve_capacity();
  /// Stage 2 at throughput `target` (must be <= capacity). Deterministic:
  /// always restarts from the stage-1 optimum.
  TwoStageResult solve_min_energy(double target);
  const SolveStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct PlanCheck {
  double max_conservation_residual = 0.0;  // flow balance rows
  double max_activity_excess = 0.0;        // per-tuple time over coverage
  double alpha_sum_excess = 0.0;           // over the unit slot
  double min_flow = 0.0;                   // most negative flow seen
  double max_alpha_bound_excess = 0.0;     // alpha outside [0,1]
  bool independent_sets_valid = true;

  bool ok(double tol = 1e-7) const;
  std::string describe() const;
};

/// Independent re-check of a plan against the scheduling constraints. Works
/// purely from the plan, tuples and topology; never consults the solver.
PlanCheck validate_plan(const SchedulePlan& plan, const std::vector<Tuple>& tuples,
                        const Topology& topology);

}  // namespace mrmc
