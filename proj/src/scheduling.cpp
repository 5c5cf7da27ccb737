#include "mrmc/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mrmc {

double SchedulePlan::total_flow(int tuple) const {
  double s = 0.0;
  for (int k = 0; k < num_commodities; ++k) s += flow(tuple, k);
  return s;
}

double SchedulePlan::sum_alpha() const {
  double s = 0.0;
  for (double a : alphas) s += a;
  return s;
}

namespace {

double total_demand(const Topology& t) {
  double s = 0.0;
  for (const auto& c : t.commodities) s += c.demand;
  return s;
}

}  // namespace

BuiltLp build_capacity_lp(const std::vector<Tuple>& tuples,
                          const std::vector<IndependentSet>& independent_sets,
                          const Topology& topology) {
  const int T = static_cast<int>(tuples.size());
  const int K = static_cast<int>(topology.commodities.size());
  const int N = static_cast<int>(topology.nodes.size());

  BuiltLp built;
  LpProblem& p = built.problem;
  LpLayout& layout = built.layout;
  p.sense = Sense::Maximize;
  layout.num_commodities = K;
  layout.num_tuples = T;

  layout.lambda_col = p.add_variable("lambda", 0.0, kInfinity, total_demand(topology));
  layout.flow_col_base = static_cast<int>(p.variables.size());
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < K; ++k)
      p.add_variable("f_p" + std::to_string(t) + "_c" + std::to_string(k), 0.0, kInfinity);
  for (std::size_t m = 0; m < independent_sets.size(); ++m)
    layout.alpha_cols.push_back(p.add_variable("a" + std::to_string(m), 0.0, 1.0));

  auto flow_col = [&](int t, int k) { return layout.flow_col_base + t * K + k; };

  // Net flow balance per commodity: outflow(s) - inflow(s) = lambda f0 at the
  // source, inflow(d) - outflow(d) = lambda f0 at the destination, zero at
  // every other node.
  for (int k = 0; k < K; ++k) {
    const auto& c = topology.commodities[k];
    for (int u = 0; u < N; ++u) {
      std::vector<LpTerm> terms;
      const double out_sign = (u == c.destination) ? -1.0 : 1.0;
      for (int t = 0; t < T; ++t) {
        if (tuples[t].tx == u) terms.push_back({flow_col(t, k), out_sign});
        if (tuples[t].rx == u) terms.push_back({flow_col(t, k), -out_sign});
      }
      if (u == c.source || u == c.destination) {
        terms.push_back({layout.lambda_col, -c.demand});
        const char* tag = (u == c.source) ? "src_c" : "dst_c";
        p.add_constraint(tag + std::to_string(k), Relation::Equal, 0.0, std::move(terms));
      } else if (!terms.empty()) {
        p.add_constraint("bal_c" + std::to_string(k) + "_n" + std::to_string(u), Relation::Equal,
                         0.0, std::move(terms));
      }
    }
  }

  for (int t = 0; t < T; ++t) {
    std::vector<LpTerm> terms;
    for (int k = 0; k < K; ++k) terms.push_back({flow_col(t, k), 1.0 / tuples[t].capacity});
    layout.activity_row_of_tuple.push_back(p.add_constraint(
        "act_p" + std::to_string(t), Relation::LessEqual, 0.0, std::move(terms)));
  }
  for (std::size_t m = 0; m < independent_sets.size(); ++m)
    for (const int t : independent_sets[m].members)
      p.constraints[layout.activity_row_of_tuple[t]].terms.push_back({layout.alpha_cols[m], -1.0});

  {
    std::vector<LpTerm> terms;
    for (const int col : layout.alpha_cols) terms.push_back({col, 1.0});
    layout.sum_alpha_row = p.add_constraint("slot", Relation::LessEqual, 1.0, std::move(terms));
  }
  return built;
}

BuiltLp build_min_energy_lp(const std::vector<Tuple>& tuples,
                            const std::vector<IndependentSet>& independent_sets,
                            const Topology& topology, double f_star) {
  BuiltLp built = build_capacity_lp(tuples, independent_sets, topology);
  LpProblem& p = built.problem;
  LpLayout& layout = built.layout;

  layout.throughput_row =
      p.add_constraint("thr", Relation::Equal, f_star,
                       {{layout.lambda_col, total_demand(topology)}});

  p.sense = Sense::Minimize;
  std::fill(p.objective.begin(), p.objective.end(), 0.0);
  const int K = layout.num_commodities;
  for (int t = 0; t < layout.num_tuples; ++t) {
    const double unit = tuples[t].e_tx + tuples[t].e_rx;
    for (int k = 0; k < K; ++k) p.set_objective(layout.flow_col_base + t * K + k, unit);
  }
  return built;
}

// ---------------------------------------------------------------------------
// two-stage solve

struct TwoStageSolver::Impl {
  const std::vector<Tuple>& tuples;
  const ConflictGraph& graph;
  const Topology& topology;
  TwoStageOptions options;

  std::vector<IndependentSet> columns;
  std::set<std::vector<int>> known_columns;
  std::vector<int> channel_hint;  // clique-cover hint for the pricing search
  LpLayout layout;
  std::unique_ptr<SimplexSolver> stage1;  // kept at the stage-1 optimum
  double capacity = 0.0;
  double lambda_star = 0.0;
  SolveStats stats;
  bool capacity_solved = false;

  Impl(const std::vector<Tuple>& tuples_, const ConflictGraph& graph_, const Topology& topology_,
       const TwoStageOptions& options_)
      : tuples(tuples_), graph(graph_), topology(topology_), options(options_) {
    channel_hint.reserve(tuples.size());
    for (const Tuple& t : tuples) channel_hint.push_back(t.channel);
    if (options.time_limit_ms > 0)
      options.solver.deadline = std::chrono::steady_clock::now() +
                                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double, std::milli>(options.time_limit_ms));
  }

  // Greedy maximal covers seeded from each tuple not covered yet; together
  // they touch every tuple, which keeps the first restricted master feasible
  // for any flow pattern.
  std::vector<IndependentSet> initial_columns() const {
    std::vector<IndependentSet> result;
    std::vector<char> covered(tuples.size(), 0);
    for (int t = 0; t < static_cast<int>(tuples.size()); ++t) {
      if (covered[t]) continue;
      IndependentSet is = extend_to_maximal(graph, {t});
      for (const int member : is.members) covered[member] = 1;
      result.push_back(std::move(is));
    }
    return result;
  }

  // Weights for the pricing subproblem from the activity-row duals, and the
  // slot-budget dual it must beat. Signs depend on the master's sense.
  std::pair<std::vector<double>, double> pricing_input(const LpSolution& sol, Sense sense) const {
    const double sign = sense == Sense::Maximize ? 1.0 : -1.0;
    std::vector<double> weights(tuples.size(), 0.0);
    for (std::size_t t = 0; t < tuples.size(); ++t)
      weights[t] = std::max(0.0, sign * sol.duals[layout.activity_row_of_tuple[t]]);
    const double threshold = std::max(0.0, sign * sol.duals[layout.sum_alpha_row]);
    return {std::move(weights), threshold};
  }

  // Runs the pricing loop on `solver` until the master is proven optimal.
  // Intermediate rounds use a budget-capped search (any improving column
  // will do); only the closing round needs the proven optimum.
  static constexpr long kInterimPricingBudget = 400000;
  static constexpr long kCertifyPricingBudget = 50000000;

  // Wentges smoothing: price on a convex blend of the previous and current
  // duals to damp the oscillation that stalls column generation, falling
  // back to the true duals whenever the blend misprices. Termination is
  // always certified against the true duals.
  static constexpr double kSmoothing = 0.5;

  LpSolution price_to_optimality(SimplexSolver& solver, Sense sense,
                                 std::vector<IndependentSet>& column_list,
                                 std::vector<int>& alpha_cols,
                                 std::set<std::vector<int>>& known) {
    LpSolution sol = solver.solve();
    if (sol.status != LpStatus::Optimal) return sol;

    std::vector<double> smooth;
    bool have_center = false;

    auto enter = [&](const IndependentSet& is) {
      if (!known.insert(is.members).second) return false;
      std::vector<LpTerm> column;
      for (const int t : is.members) column.push_back({layout.activity_row_of_tuple[t], -1.0});
      column.push_back({layout.sum_alpha_row, 1.0});
      alpha_cols.push_back(solver.add_variable(0.0, 1.0, 0.0, column));
      column_list.push_back(is);
      return true;
    };

    while (true) {
      if (options.max_columns > 0 && static_cast<int>(column_list.size()) >= options.max_columns) {
        stats.capped = true;
        break;
      }
      auto [weights, threshold] = pricing_input(sol, sense);
      auto true_weight = [&](const IndependentSet& is) {
        double w = 0.0;
        for (const int t : is.members) w += weights[t];
        return w;
      };

      int entered = 0;
      if (have_center) {
        for (std::size_t i = 0; i < weights.size(); ++i)
          smooth[i] = kSmoothing * smooth[i] + (1.0 - kSmoothing) * weights[i];
        const PricedIs guess =
            max_weight_is_limited(graph, smooth, kInterimPricingBudget, channel_hint, 0.0);
        if (true_weight(guess.set) > threshold + options.pricing_tol && enter(guess.set)) ++entered;
        for (const IndependentSet& extra : guess.extras)
          if (true_weight(extra) > threshold + options.pricing_tol && enter(extra)) ++entered;
      } else {
        smooth = weights;
        have_center = true;
      }

      if (entered == 0) {
        // true duals: either find a genuine column or certify optimality
        PricedIs priced = max_weight_is_limited(graph, weights, kInterimPricingBudget,
                                                channel_hint, threshold + options.pricing_tol);
        if (!priced.proven && priced.weight <= threshold + options.pricing_tol) {
          priced = max_weight_is_limited(graph, weights, kCertifyPricingBudget, channel_hint,
                                         threshold + options.pricing_tol);
          if (!priced.proven)
            throw EnumerationLimitError(
                "pricing could not certify optimality within its node budget");
        }
        if (priced.weight <= threshold + options.pricing_tol) break;
        if (enter(priced.set)) ++entered;
        for (const IndependentSet& extra : priced.extras)
          if (true_weight(extra) > threshold + options.pricing_tol && enter(extra)) ++entered;
        smooth = weights;  // recenter after a mispricing
      }
      if (entered == 0) break;  // every candidate already known: proven by the true pass
      ++stats.pricing_rounds;
      sol = solver.solve();
      if (sol.status != LpStatus::Optimal) return sol;
    }
    return sol;
  }

  double solve_capacity() {
    if (capacity_solved) return capacity;
    if (options.strategy == Strategy::FullEnumeration)
      columns = enumerate_maximal_is(graph, options.maximal_is_cap);
    else
      columns = initial_columns();
    for (const auto& is : columns) known_columns.insert(is.members);

    BuiltLp built = build_capacity_lp(tuples, columns, topology);
    layout = built.layout;
    stage1 = std::make_unique<SimplexSolver>(built.problem, options.solver);

    LpSolution sol;
    if (options.strategy == Strategy::FullEnumeration) {
      sol = stage1->solve();
    } else {
      sol = price_to_optimality(*stage1, Sense::Maximize, columns, layout.alpha_cols,
                                known_columns);
    }
    if (sol.status != LpStatus::Optimal)
      throw SolverError("capacity stage did not reach optimality");
    capacity = sol.objective_value;
    lambda_star = sol.primal[layout.lambda_col];
    stats.simplex_iterations = stage1->total_iterations();
    stats.columns = static_cast<int>(columns.size());
    capacity_solved = true;
    return capacity;
  }

  TwoStageResult solve_min_energy(double target) {
    solve_capacity();
    if (target > capacity + 1e-6)
      throw ValidationError("stage-2 throughput target exceeds capacity");

    SimplexSolver solver(*stage1);  // restart from the stage-1 optimum
    std::vector<IndependentSet> column_list = columns;
    std::vector<int> alpha_cols = layout.alpha_cols;
    std::set<std::vector<int>> known = known_columns;

    LpLayout stage2_layout = layout;
    stage2_layout.throughput_row = solver.add_constraint(
        Relation::Equal, target, {{layout.lambda_col, total_demand(topology)}});

    std::vector<double> objective(solver.num_structural(), 0.0);
    const int K = layout.num_commodities;
    for (int t = 0; t < layout.num_tuples; ++t) {
      const double unit = tuples[t].e_tx + tuples[t].e_rx;
      for (int k = 0; k < K; ++k) objective[layout.flow_col_base + t * K + k] = unit;
    }
    solver.set_objective(Sense::Minimize, objective);

    LpSolution sol;
    if (options.strategy == Strategy::FullEnumeration) {
      sol = solver.solve();
    } else {
      sol = price_to_optimality(solver, Sense::Minimize, column_list, alpha_cols, known);
    }
    if (sol.status == LpStatus::Infeasible)
      throw SolverError("min-energy stage infeasible at the requested throughput");
    if (sol.status != LpStatus::Optimal)
      throw SolverError("min-energy stage did not reach optimality");

    TwoStageResult result;
    result.capacity = capacity;
    result.energy = sol.objective_value;
    result.stats = stats;
    result.stats.simplex_iterations += solver.total_iterations();
    result.stats.columns = static_cast<int>(column_list.size());
    result.plan = extract_plan(sol, column_list, alpha_cols);
    return result;
  }

  SchedulePlan extract_plan(const LpSolution& sol, const std::vector<IndependentSet>& column_list,
                            const std::vector<int>& alpha_cols) const {
    SchedulePlan plan;
    const int K = layout.num_commodities;
    plan.num_commodities = K;
    plan.lambda = sol.primal[layout.lambda_col];
    plan.tuple_flows.assign(static_cast<std::size_t>(layout.num_tuples) * K, 0.0);
    for (int t = 0; t < layout.num_tuples; ++t)
      for (int k = 0; k < K; ++k)
        plan.tuple_flows[static_cast<std::size_t>(t) * K + k] =
            sol.primal[layout.flow_col_base + t * K + k];
    for (std::size_t m = 0; m < column_list.size(); ++m) {
      const double a = sol.primal[alpha_cols[m]];
      if (a > 1e-12) {
        plan.active_sets.push_back(column_list[m]);
        plan.alphas.push_back(a);
      }
    }
    return plan;
  }
};

TwoStageSolver::TwoStageSolver(const std::vector<Tuple>& tuples, const ConflictGraph& graph,
                               const Topology& topology, const TwoStageOptions& options)
    : impl_(std::make_unique<Impl>(tuples, graph, topology, options)) {}

TwoStageSolver::~TwoStageSolver() = default;

double TwoStageSolver::solve_capacity() { return impl_->solve_capacity(); }

TwoStageResult TwoStageSolver::solve_min_energy(double target) {
  return impl_->solve_min_energy(target);
}

const SolveStats& TwoStageSolver::stats() const { return impl_->stats; }

TwoStageResult solve_two_stage(const std::vector<Tuple>& tuples, const ConflictGraph& graph,
                               const Topology& topology, const TwoStageOptions& options) {
  TwoStageSolver solver(tuples, graph, topology, options);
  const double capacity = solver.solve_capacity();
  return solver.solve_min_energy(capacity);
}

// ---------------------------------------------------------------------------
// independent plan validation

bool PlanCheck::ok(double tol) const {
  return independent_sets_valid && max_conservation_residual <= tol && max_activity_excess <= tol &&
         alpha_sum_excess <= tol && min_flow >= -tol && max_alpha_bound_excess <= tol;
}

std::string PlanCheck::describe() const {
  std::ostringstream out;
  out << "conservation=" << max_conservation_residual << " activity=" << max_activity_excess
      << " slot=" << alpha_sum_excess << " min_flow=" << min_flow
      << " alpha_bounds=" << max_alpha_bound_excess
      << " sets=" << (independent_sets_valid ? "ok" : "conflict");
  return out.str();
}

PlanCheck validate_plan(const SchedulePlan& plan, const std::vector<Tuple>& tuples,
                        const Topology& topology) {
  PlanCheck check;
  const int T = static_cast<int>(tuples.size());
  const int K = plan.num_commodities;
  const int N = static_cast<int>(topology.nodes.size());

  for (int k = 0; k < K; ++k) {
    const auto& c = topology.commodities[k];
    for (int u = 0; u < N; ++u) {
      double net_out = 0.0;
      for (int t = 0; t < T; ++t) {
        if (tuples[t].tx == u) net_out += plan.flow(t, k);
        if (tuples[t].rx == u) net_out -= plan.flow(t, k);
      }
      double residual;
      if (u == c.source)
        residual = net_out - plan.lambda * c.demand;
      else if (u == c.destination)
        residual = net_out + plan.lambda * c.demand;
      else
        residual = net_out;
      check.max_conservation_residual =
          std::max(check.max_conservation_residual, std::abs(residual));
    }
  }

  std::vector<double> coverage(T, 0.0);
  for (std::size_t m = 0; m < plan.active_sets.size(); ++m) {
    const double a = plan.alphas[m];
    check.max_alpha_bound_excess =
        std::max({check.max_alpha_bound_excess, -a, a - 1.0});
    for (const int t : plan.active_sets[m].members) coverage[t] += a;
    const auto& members = plan.active_sets[m].members;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        if (conflicts(tuples[members[i]], tuples[members[j]], topology))
          check.independent_sets_valid = false;
  }
  check.alpha_sum_excess = std::max(0.0, plan.sum_alpha() - 1.0);

  for (int t = 0; t < T; ++t) {
    const double used = plan.total_flow(t) / tuples[t].capacity;
    check.max_activity_excess = std::max(check.max_activity_excess, used - coverage[t]);
    for (int k = 0; k < K; ++k) check.min_flow = std::min(check.min_flow, plan.flow(t, k));
  }
  check.max_activity_excess = std::max(check.max_activity_excess, 0.0);
  return check;
}

}  // namespace mrmc
