#include "mrmc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace mrmc {

int LpProblem::add_variable(std::string name, double lower, double upper, double obj) {
  variables.push_back({std::move(name), lower, upper});
  objective.push_back(obj);
  return static_cast<int>(variables.size()) - 1;
}

int LpProblem::add_constraint(std::string name, Relation relation, double rhs,
                              std::vector<LpTerm> terms) {
  constraints.push_back({std::move(name), relation, rhs, std::move(terms)});
  return static_cast<int>(constraints.size()) - 1;
}

void LpProblem::set_objective(int variable, double coeff) { objective[variable] = coeff; }

void LpProblem::validate() const {
  const int n = static_cast<int>(variables.size());
  if (objective.size() != variables.size())
    throw ValidationError("objective length does not match variable count");
  for (const auto& v : variables) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw ValidationError("variable '" + v.name + "' has inverted or NaN bounds");
  }
  for (double c : objective)
    if (std::isnan(c) || std::isinf(c)) throw ValidationError("non-finite objective coefficient");
  for (const auto& row : constraints) {
    if (std::isnan(row.rhs) || std::isinf(row.rhs))
      throw ValidationError("constraint '" + row.name + "' has non-finite rhs");
    for (const auto& term : row.terms) {
      if (term.variable < 0 || term.variable >= n)
        throw ValidationError("constraint '" + row.name + "' references unknown variable");
      if (std::isnan(term.coeff) || std::isinf(term.coeff))
        throw ValidationError("constraint '" + row.name + "' has non-finite coefficient");
    }
  }
}

namespace {

enum class VarState : unsigned char { Basic, AtLower, AtUpper, Free };

constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-11;
constexpr int kBlandTrigger = 400;
constexpr int kRefreshInterval = 256;

}  // namespace

struct SimplexSolver::Impl {
  SolverOptions options;
  Sense user_sense = Sense::Maximize;

  int n = 0;  // structural variables
  int m = 0;  // rows == slack variables
  std::vector<std::vector<LpTerm>> cols;  // structural columns (row, coeff)
  std::vector<double> lower, upper;       // size n + m
  std::vector<double> cost;               // internal minimize costs, size n + m
  std::vector<double> rhs;                // size m

  std::vector<int> basis;          // row -> variable
  std::vector<int> basis_pos;      // variable -> row, -1 nonbasic
  std::vector<VarState> state;     // size n + m
  std::vector<double> x;           // size n + m
  std::vector<double> binv;        // m * m row-major
  bool started = false;
  bool values_dirty = true;
  long iterations_total = 0;

  // scratch
  std::vector<double> y, w, d;

  explicit Impl(const LpProblem& p, SolverOptions opt) : options(opt) {
    p.validate();
    user_sense = p.sense;
    n = static_cast<int>(p.variables.size());
    m = static_cast<int>(p.constraints.size());
    cols.assign(n, {});
    lower.assign(n + m, 0.0);
    upper.assign(n + m, 0.0);
    cost.assign(n + m, 0.0);
    rhs.assign(m, 0.0);
    const double sign = user_sense == Sense::Maximize ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      lower[j] = p.variables[j].lower;
      upper[j] = p.variables[j].upper;
      cost[j] = sign * p.objective[j];
    }
    for (int i = 0; i < m; ++i) {
      const auto& row = p.constraints[i];
      rhs[i] = row.rhs;
      for (const auto& t : row.terms) cols[t.variable].push_back({i, t.coeff});
      set_slack_bounds(i, row.relation);
    }
  }

  void set_slack_bounds(int row, Relation rel) {
    const int s = n + row;
    switch (rel) {
      case Relation::LessEqual:
        lower[s] = 0.0;
        upper[s] = kInfinity;
        break;
      case Relation::Equal:
        lower[s] = 0.0;
        upper[s] = 0.0;
        break;
      case Relation::GreaterEqual:
        lower[s] = -kInfinity;
        upper[s] = 0.0;
        break;
    }
  }

  double nonbasic_rest_value(int j) const {
    if (std::isfinite(lower[j])) return lower[j];
    if (std::isfinite(upper[j])) return upper[j];
    return 0.0;
  }

  VarState nonbasic_rest_state(int j) const {
    if (std::isfinite(lower[j])) return VarState::AtLower;
    if (std::isfinite(upper[j])) return VarState::AtUpper;
    return VarState::Free;
  }

  void start() {
    basis.resize(m);
    basis_pos.assign(n + m, -1);
    state.assign(n + m, VarState::AtLower);
    x.assign(n + m, 0.0);
    for (int j = 0; j < n + m; ++j) {
      state[j] = nonbasic_rest_state(j);
      x[j] = nonbasic_rest_value(j);
    }
    for (int i = 0; i < m; ++i) {
      basis[i] = n + i;
      basis_pos[n + i] = i;
      state[n + i] = VarState::Basic;
    }
    binv.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) binv[static_cast<std::size_t>(i) * m + i] = 1.0;
    started = true;
    values_dirty = true;
  }

  // column of variable j applied through a functor(row, coeff); inside
  // `cols` the LpTerm::variable slot stores the row index
  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n) {
      for (const auto& t : cols[j]) f(t.variable, t.coeff);
    } else {
      f(j - n, 1.0);
    }
  }

  void recompute_values() {
    // x_B = Binv (b - N x_N)
    std::vector<double> r = rhs;
    for (int j = 0; j < n + m; ++j) {
      if (state[j] == VarState::Basic) continue;
      x[j] = state[j] == VarState::AtLower   ? lower[j]
             : state[j] == VarState::AtUpper ? upper[j]
                                             : 0.0;
      if (x[j] == 0.0) continue;
      for_column(j, [&](int row, double a) { r[row] -= a * x[j]; });
    }
    for (int i = 0; i < m; ++i) {
      const double* bi = binv.data() + static_cast<std::size_t>(i) * m;
      double v = 0.0;
      for (int k = 0; k < m; ++k) v += bi[k] * r[k];
      x[basis[i]] = v;
    }
    values_dirty = false;
  }

  double true_residual() const {
    std::vector<double> r = rhs;
    for (int j = 0; j < n + m; ++j) {
      if (x[j] == 0.0) continue;
      for_column(j, [&](int row, double a) { r[row] -= a * x[j]; });
    }
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return worst;
  }

  void refactorize() {
    // dense Gauss-Jordan inversion of the basis matrix
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
      for_column(basis[i], [&](int row, double coeff) {
        a[static_cast<std::size_t>(row) * m + i] = coeff;
      });
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<std::size_t>(i) * m + i] = 1.0;
    for (int c = 0; c < m; ++c) {
      int p = -1;
      double bestval = kPivotTol;
      for (int r2 = c; r2 < m; ++r2) {
        const double v = std::abs(a[static_cast<std::size_t>(r2) * m + c]);
        if (v > bestval) {
          bestval = v;
          p = r2;
        }
      }
      if (p < 0) throw SolverError("singular basis during refactorization");
      if (p != c) {
        for (int k = 0; k < m; ++k) {
          std::swap(a[static_cast<std::size_t>(p) * m + k], a[static_cast<std::size_t>(c) * m + k]);
          std::swap(inv[static_cast<std::size_t>(p) * m + k],
                    inv[static_cast<std::size_t>(c) * m + k]);
        }
      }
      const double piv = a[static_cast<std::size_t>(c) * m + c];
      for (int k = 0; k < m; ++k) {
        a[static_cast<std::size_t>(c) * m + k] /= piv;
        inv[static_cast<std::size_t>(c) * m + k] /= piv;
      }
      for (int r2 = 0; r2 < m; ++r2) {
        if (r2 == c) continue;
        const double f = a[static_cast<std::size_t>(r2) * m + c];
        if (std::abs(f) < kZeroTol) continue;
        for (int k = 0; k < m; ++k) {
          a[static_cast<std::size_t>(r2) * m + k] -= f * a[static_cast<std::size_t>(c) * m + k];
          inv[static_cast<std::size_t>(r2) * m + k] -= f * inv[static_cast<std::size_t>(c) * m + k];
        }
      }
    }
    binv = std::move(inv);
    values_dirty = true;
  }

  bool below(int j) const { return x[j] < lower[j] - options.feasibility_tol; }
  bool above(int j) const { return x[j] > upper[j] + options.feasibility_tol; }

  double infeasibility() const {
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      const int k = basis[i];
      if (below(k)) total += lower[k] - x[k];
      if (above(k)) total += x[k] - upper[k];
    }
    return total;
  }

  // y = cB^T Binv for the current phase costs
  void compute_duals(bool phase_one) {
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const int k = basis[i];
      double c = 0.0;
      if (phase_one) {
        if (below(k))
          c = -1.0;
        else if (above(k))
          c = 1.0;
      } else {
        c = cost[k];
      }
      if (c == 0.0) continue;
      const double* bi = binv.data() + static_cast<std::size_t>(i) * m;
      for (int k2 = 0; k2 < m; ++k2) y[k2] += c * bi[k2];
    }
  }

  double reduced_cost(int j, bool phase_one) const {
    double c = phase_one ? 0.0 : cost[j];
    double acc = 0.0;
    if (j < n) {
      for (const auto& t : cols[j]) acc += t.coeff * y[t.variable];
    } else {
      acc = y[j - n];
    }
    return c - acc;
  }

  void ftran(int j) {
    w.assign(m, 0.0);
    if (j < n) {
      for (int i = 0; i < m; ++i) {
        const double* bi = binv.data() + static_cast<std::size_t>(i) * m;
        double acc = 0.0;
        for (const auto& t : cols[j]) acc += bi[t.variable] * t.coeff;
        w[i] = acc;
      }
    } else {
      const int r = j - n;
      for (int i = 0; i < m; ++i) w[i] = binv[static_cast<std::size_t>(i) * m + r];
    }
  }

  void check_consistency() const {
    std::vector<char> seen(n + m, 0);
    for (int i = 0; i < m; ++i) {
      const int k = basis[i];
      if (k < 0 || k >= n + m || seen[k] || basis_pos[k] != i ||
          state[k] != VarState::Basic)
        throw SolverError("internal basis bookkeeping corrupted");
      seen[k] = 1;
    }
    for (int j = 0; j < n + m; ++j)
      if (state[j] == VarState::Basic && !seen[j])
        throw SolverError("internal basis bookkeeping corrupted");
  }

  void refactor_or_restart(int* restarts) {
    try {
      refactorize();
    } catch (const SolverError&) {
      if (++*restarts > 2) throw;
      start();
    }
    recompute_values();
  }

  void check_deadline() const {
    if (std::chrono::steady_clock::now() > options.deadline)
      throw SolverError("solve time limit exceeded");
  }

  LpStatus iterate(LpSolution* out) {
    if (!started) start();
    if (values_dirty) recompute_values();
    check_deadline();

    long iter_this_call = 0;
    int stall = 0;
    bool bland = false;
    bool refactor_retry = false;
    int restarts = 0;
    double last_measure = kInfinity;

    while (true) {
      if (iter_this_call++ > options.max_iterations)
        throw SolverError("simplex iteration limit exceeded");
      ++iterations_total;

      if (iter_this_call % kRefreshInterval == 0) {
        check_deadline();
        check_consistency();
        recompute_values();
        if (true_residual() > 1e-6) refactor_or_restart(&restarts);
      }

      const double infeas = infeasibility();
      const bool phase_one = infeas > 0.0;
      double measure = infeas;
      if (!phase_one) {
        measure = 0.0;
        for (int j = 0; j < n + m; ++j)
          if (cost[j] != 0.0) measure += cost[j] * x[j];
      }
      if (measure < last_measure - 1e-12) {
        stall = 0;
        bland = false;
      } else if (++stall > kBlandTrigger) {
        bland = true;
      }
      last_measure = measure;

      compute_duals(phase_one);

      // entering variable
      int entering = -1;
      double best_violation = options.optimality_tol;
      for (int j = 0; j < n + m; ++j) {
        if (state[j] == VarState::Basic) continue;
        if (lower[j] == upper[j]) continue;  // fixed, cannot move
        const double dj = reduced_cost(j, phase_one);
        double violation = 0.0;
        if (state[j] == VarState::AtLower || state[j] == VarState::Free) {
          if (dj < -options.optimality_tol) violation = -dj;
        }
        if (violation == 0.0 && (state[j] == VarState::AtUpper || state[j] == VarState::Free)) {
          if (dj > options.optimality_tol) violation = dj;
        }
        if (violation > 0.0) {
          if (bland) {
            entering = j;
            break;
          }
          if (violation > best_violation) {
            best_violation = violation;
            entering = j;
          }
        }
      }

      if (entering < 0) {
        if (phase_one) {
          out->status = LpStatus::Infeasible;
          return LpStatus::Infeasible;
        }
        recompute_values();
        out->status = LpStatus::Optimal;
        return LpStatus::Optimal;
      }

      const double dq = reduced_cost(entering, phase_one);
      const int direction = state[entering] == VarState::AtUpper ? -1
                            : state[entering] == VarState::Free  ? (dq < 0.0 ? 1 : -1)
                                                                 : 1;

      ftran(entering);

      // Harris two-pass ratio test: pass 1 finds the tolerance-relaxed step
      // limit, pass 2 picks the largest pivot among rows whose strict ratio
      // fits under it. Other blocking rows overshoot their bound by at most
      // the feasibility tolerance, which the phase logic absorbs.
      const double relax = options.feasibility_tol;
      auto row_ratios = [&](int i, double* strict, double* relaxed, bool* at_upper) {
        const double wi = w[i];
        *strict = kInfinity;
        *relaxed = kInfinity;
        if (std::abs(wi) < kZeroTol) return;
        const int k = basis[i];
        const double delta = -direction * wi;  // d x_k / d t
        if (phase_one && below(k)) {
          if (delta > 0.0) {
            *strict = (lower[k] - x[k]) / delta;
            *relaxed = (lower[k] + relax - x[k]) / delta;
            *at_upper = false;
          }
        } else if (phase_one && above(k)) {
          if (delta < 0.0) {
            *strict = (upper[k] - x[k]) / delta;
            *relaxed = (upper[k] - relax - x[k]) / delta;
            *at_upper = true;
          }
        } else if (delta > 0.0) {
          if (std::isfinite(upper[k])) {
            *strict = (upper[k] - x[k]) / delta;
            *relaxed = (upper[k] + relax - x[k]) / delta;
            *at_upper = true;
          }
        } else if (delta < 0.0) {
          if (std::isfinite(lower[k])) {
            *strict = (lower[k] - x[k]) / delta;
            *relaxed = (lower[k] - relax - x[k]) / delta;
            *at_upper = false;
          }
        }
        if (std::isfinite(*strict)) *strict = std::max(*strict, 0.0);
        if (std::isfinite(*relaxed)) *relaxed = std::max(*relaxed, 0.0);
      };

      double theta_relaxed = kInfinity;
      for (int i = 0; i < m; ++i) {
        double strict, relaxed;
        bool at_upper = false;
        row_ratios(i, &strict, &relaxed, &at_upper);
        theta_relaxed = std::min(theta_relaxed, relaxed);
      }

      double best_ratio = kInfinity;
      int leave_row = -1;
      bool leave_at_upper = false;
      double leave_pivot = 0.0;
      for (int i = 0; i < m; ++i) {
        double strict, relaxed;
        bool at_upper = false;
        row_ratios(i, &strict, &relaxed, &at_upper);
        if (!std::isfinite(strict) || strict > theta_relaxed) continue;
        bool take = false;
        if (leave_row < 0) {
          take = true;
        } else if (bland) {
          take = basis[i] < basis[leave_row];
        } else if (std::abs(w[i]) > std::abs(leave_pivot) + kZeroTol) {
          take = true;
        } else if (std::abs(w[i]) > std::abs(leave_pivot) - kZeroTol && strict < best_ratio) {
          take = true;
        }
        if (take) {
          best_ratio = strict;
          leave_row = i;
          leave_at_upper = at_upper;
          leave_pivot = w[i];
        }
      }
      const double span = upper[entering] - lower[entering];
      if (std::isfinite(span) && span < best_ratio) {
        // bound flip, no basis change
        const double t = span;
        for (int i = 0; i < m; ++i) x[basis[i]] -= direction * t * w[i];
        x[entering] = state[entering] == VarState::AtLower ? upper[entering] : lower[entering];
        state[entering] = state[entering] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        refactor_retry = false;
        continue;
      }

      if (leave_row >= 0 && std::abs(leave_pivot) < kPivotTol && !refactor_retry) {
        // suspicious pivot, likely inverse drift; rebuild and retry once
        refactor_or_restart(&restarts);
        refactor_retry = true;
        continue;
      }

      if (leave_row < 0) {
        if (phase_one) throw SolverError("phase-1 ratio test failed (numerical breakdown)");
        out->status = LpStatus::Unbounded;
        return LpStatus::Unbounded;
      }

      const double t = best_ratio;
      const int leaving = basis[leave_row];

      for (int i = 0; i < m; ++i) x[basis[i]] -= direction * t * w[i];
      x[entering] = (state[entering] == VarState::AtUpper ? upper[entering]
                     : state[entering] == VarState::Free  ? 0.0
                                                          : lower[entering]) +
                    direction * t;
      x[leaving] = leave_at_upper ? upper[leaving] : lower[leaving];

      // basis update: Binv <- E Binv
      const double piv = w[leave_row];
      double* rowr = binv.data() + static_cast<std::size_t>(leave_row) * m;
      for (int k2 = 0; k2 < m; ++k2) rowr[k2] /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave_row) continue;
        const double f = w[i];
        if (std::abs(f) < kZeroTol) continue;
        double* rowi = binv.data() + static_cast<std::size_t>(i) * m;
        for (int k2 = 0; k2 < m; ++k2) rowi[k2] -= f * rowr[k2];
      }

      basis[leave_row] = entering;
      basis_pos[entering] = leave_row;
      basis_pos[leaving] = -1;
      state[entering] = VarState::Basic;
      state[leaving] = leave_at_upper ? VarState::AtUpper : VarState::AtLower;
      refactor_retry = false;
    }
  }

  LpSolution solve() {
    LpSolution out;
    const LpStatus status = iterate(&out);
    out.iterations = iterations_total;
    if (status != LpStatus::Optimal) return out;

    double internal = 0.0;
    for (int j = 0; j < n + m; ++j)
      if (cost[j] != 0.0) internal += cost[j] * x[j];
    const double sign = user_sense == Sense::Maximize ? -1.0 : 1.0;
    out.objective_value = sign * internal;
    out.primal.assign(x.begin(), x.begin() + n);
    compute_duals(false);
    out.duals.resize(m);
    for (int i = 0; i < m; ++i) out.duals[i] = sign * y[i];
    return out;
  }
};

SimplexSolver::SimplexSolver(const LpProblem& problem, SolverOptions options)
    : impl_(std::make_unique<Impl>(problem, options)) {}

SimplexSolver::SimplexSolver(const SimplexSolver& other)
    : impl_(std::make_unique<Impl>(*other.impl_)) {}

SimplexSolver::~SimplexSolver() = default;

LpSolution SimplexSolver::solve() { return impl_->solve(); }

void SimplexSolver::set_objective(Sense sense, const std::vector<double>& objective) {
  if (static_cast<int>(objective.size()) != impl_->n)
    throw ValidationError("objective length does not match variable count");
  impl_->user_sense = sense;
  const double sign = sense == Sense::Maximize ? -1.0 : 1.0;
  for (int j = 0; j < impl_->n; ++j) impl_->cost[j] = sign * objective[j];
}

void SimplexSolver::set_rhs(int row, double rhs) {
  impl_->rhs[row] = rhs;
  impl_->values_dirty = true;
}

int SimplexSolver::add_variable(double lower, double upper, double obj,
                                const std::vector<LpTerm>& column) {
  Impl& s = *impl_;
  const int j = s.n;
  s.cols.insert(s.cols.begin() + j, column);
  s.lower.insert(s.lower.begin() + j, lower);
  s.upper.insert(s.upper.begin() + j, upper);
  const double sign = s.user_sense == Sense::Maximize ? -1.0 : 1.0;
  s.cost.insert(s.cost.begin() + j, sign * obj);
  ++s.n;
  if (s.started) {
    s.x.insert(s.x.begin() + j, s.nonbasic_rest_value(j));
    s.state.insert(s.state.begin() + j, s.nonbasic_rest_state(j));
    s.basis_pos.insert(s.basis_pos.begin() + j, -1);
    for (int& b : s.basis)
      if (b >= j) ++b;  // slack indices shifted by the insert
    s.values_dirty = true;
  }
  return j;
}

int SimplexSolver::add_constraint(Relation relation, double rhs, const std::vector<LpTerm>& terms) {
  Impl& s = *impl_;
  const int row = s.m;
  s.rhs.push_back(rhs);
  for (const auto& t : terms) {
    if (t.variable < 0 || t.variable >= s.n)
      throw ValidationError("new constraint references unknown variable");
    s.cols[t.variable].push_back({row, t.coeff});
  }
  ++s.m;
  s.lower.push_back(0.0);
  s.upper.push_back(0.0);
  s.cost.push_back(0.0);
  s.set_slack_bounds(row, relation);

  if (s.started) {
    // grow Binv: B' = [[B, 0], [a_B, 1]] so Binv' = [[Binv, 0], [-a_B Binv, 1]]
    const int old_m = s.m - 1;
    std::vector<double> grown(static_cast<std::size_t>(s.m) * s.m, 0.0);
    for (int i = 0; i < old_m; ++i)
      std::copy(s.binv.begin() + static_cast<std::size_t>(i) * old_m,
                s.binv.begin() + static_cast<std::size_t>(i) * old_m + old_m,
                grown.begin() + static_cast<std::size_t>(i) * s.m);
    std::vector<double> a_b(old_m, 0.0);
    for (const auto& t : terms) {
      const int pos = s.basis_pos[t.variable];
      if (pos >= 0) a_b[pos] = t.coeff;
    }
    double* last = grown.data() + static_cast<std::size_t>(old_m) * s.m;
    for (int k = 0; k < old_m; ++k) {
      double acc = 0.0;
      for (int i = 0; i < old_m; ++i) acc -= a_b[i] * s.binv[static_cast<std::size_t>(i) * old_m + k];
      last[k] = acc;
    }
    last[old_m] = 1.0;
    s.binv = std::move(grown);

    const int slack = s.n + row;
    s.basis.push_back(slack);
    s.basis_pos.push_back(row);
    s.state.push_back(VarState::Basic);
    s.x.push_back(0.0);
    s.values_dirty = true;
  } else {
    s.state.push_back(VarState::AtLower);
    s.x.push_back(0.0);
    s.basis_pos.push_back(-1);
  }
  return row;
}

int SimplexSolver::num_rows() const { return impl_->m; }
int SimplexSolver::num_structural() const { return impl_->n; }
long SimplexSolver::total_iterations() const { return impl_->iterations_total; }

LpSolution solve_lp(const LpProblem& problem, const SolverOptions& options) {
  SimplexSolver solver(problem, options);
  return solver.solve();
}

std::string write_lp_format(const LpProblem& p) {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto var_name = [&](int j) {
    std::string s = p.variables[j].name.empty() ? "x" + std::to_string(j) : p.variables[j].name;
    for (char& c : s)
      if (c == ' ' || c == '+' || c == '-') c = '_';
    return s;
  };
  out << (p.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  bool any = false;
  for (std::size_t j = 0; j < p.objective.size(); ++j) {
    if (p.objective[j] == 0.0) continue;
    out << (p.objective[j] >= 0.0 ? " + " : " - ") << num(std::abs(p.objective[j])) << ' '
        << var_name(static_cast<int>(j));
    any = true;
  }
  if (!any) out << " 0 " << (p.variables.empty() ? "x0" : var_name(0));
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& row = p.constraints[i];
    out << ' ' << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ':';
    for (const auto& t : row.terms)
      out << (t.coeff >= 0.0 ? " + " : " - ") << num(std::abs(t.coeff)) << ' '
          << var_name(t.variable);
    switch (row.relation) {
      case Relation::LessEqual: out << " <= "; break;
      case Relation::Equal: out << " = "; break;
      case Relation::GreaterEqual: out << " >= "; break;
    }
    out << num(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < p.variables.size(); ++j) {
    const auto& v = p.variables[j];
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << ' ' << var_name(static_cast<int>(j)) << " free\n";
    } else if (!std::isfinite(v.upper)) {
      out << ' ' << num(v.lower) << " <= " << var_name(static_cast<int>(j)) << '\n';
    } else if (!std::isfinite(v.lower)) {
      out << ' ' << var_name(static_cast<int>(j)) << " <= " << num(v.upper) << '\n';
    } else {
      out << ' ' << num(v.lower) << " <= " << var_name(static_cast<int>(j)) << " <= "
          << num(v.upper) << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace mrmc
