#pragma once

#include <chrono>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mrmc/errors.hpp"

namespace mrmc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpTerm {
  int variable = -1;
  double coeff = 0.0;
};

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

struct LpConstraint {
  std::string name;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::vector<LpTerm> terms;
};

/// Sparse linear program. Objective coefficients default to zero.
struct LpProblem {
  Sense sense = Sense::Maximize;
  std::vector<LpVariable> variables;
  std::vector<double> objective;  // aligned with variables
  std::vector<LpConstraint> constraints;

  int add_variable(std::string name, double lower, double upper, double obj = 0.0);
  int add_constraint(std::string name, Relation relation, double rhs,
                     std::vector<LpTerm> terms);
  void set_objective(int variable, double coeff);

  /// Throws ValidationError on dangling variable references, inverted
  /// bounds or non-finite coefficients.
  void validate() const;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective_value = 0.0;
  std::vector<double> primal;  // structural variables
  std::vector<double> duals;   // one per constraint, in the problem's sense
  long iterations = 0;
};

struct SolverOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;   // reduced-cost threshold
  long max_iterations = 2000000;
  // wall-clock cutoff; exceeding it raises SolverError
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

/// Revised bounded-variable simplex with a dense maintained basis inverse.
/// Supports warm-started incremental edits (new columns, new rows, objective
/// and rhs changes) between solves. Deterministic for identical inputs.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& problem, SolverOptions options = {});
  SimplexSolver(const SimplexSolver&);
  SimplexSolver& operator=(const SimplexSolver&) = delete;
  ~SimplexSolver();

  LpSolution solve();

  // Incremental edits; the current basis is kept. For add_variable the
  // column terms use LpTerm::variable as the constraint row index.
  void set_objective(Sense sense, const std::vector<double>& objective);
  void set_rhs(int row, double rhs);
  int add_variable(double lower, double upper, double obj, const std::vector<LpTerm>& column);
  int add_constraint(Relation relation, double rhs, const std::vector<LpTerm>& terms);

  int num_rows() const;
  int num_structural() const;
  long total_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot solve. Infeasible/unbounded are reported as statuses; numerical
/// failures throw SolverError.
LpSolution solve_lp(const LpProblem& problem, const SolverOptions& options = {});

/// CPLEX LP text format, for cross-checking against external solvers.
std::string write_lp_format(const LpProblem& problem);

}  // namespace mrmc
