#include "ccsm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ccsm/errors.hpp"

namespace ccsm {

int LpProblem::add_variable(double obj, double lo, double hi) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  for (LpRow& row : rows) row.coeffs.push_back(0.0);
  return num_vars() - 1;
}

void LpProblem::add_row(std::vector<double> coeffs, LpRelation rel, double rhs) {
  rows.push_back(LpRow{std::move(coeffs), rel, rhs});
}

void LpProblem::validate() const {
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n)
    throw InputError("lp: bound vectors must match the objective length");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(objective[j]) || std::isnan(lower[j]) || std::isnan(upper[j]))
      throw InputError("lp: NaN in objective or bounds");
    if (lower[j] > upper[j]) throw InputError("lp: empty variable bound interval");
  }
  for (const LpRow& row : rows) {
    if (row.coeffs.size() != n) throw InputError("lp: row length mismatch");
    if (std::isnan(row.rhs)) throw InputError("lp: NaN right-hand side");
    for (double c : row.coeffs)
      if (std::isnan(c)) throw InputError("lp: NaN row coefficient");
  }
}

namespace {

// Slack bounds encode the row relation: a'x + s = rhs with s >= 0 for <=,
// s <= 0 for >=, s == 0 for equalities.
void slack_bounds(LpRelation rel, double* lo, double* hi) {
  switch (rel) {
    case LpRelation::kLessEqual: *lo = 0.0; *hi = kLpInfinity; return;
    case LpRelation::kEqual: *lo = 0.0; *hi = 0.0; return;
    case LpRelation::kGreaterEqual: *lo = -kLpInfinity; *hi = 0.0; return;
  }
  throw std::logic_error("unreachable relation");
}

}  // namespace

struct SimplexSolver::Work {
  const LpProblem* problem = nullptr;
  SimplexOptions opt;

  int m = 0;      // rows
  int ns = 0;     // structural columns
  int total = 0;  // ns + m

  std::vector<double> cost;  // minimize-form cost, structurals then slacks
  std::vector<double> lo, hi;
  std::vector<double> rhs;

  std::vector<VarStatus> state;  // per column
  std::vector<int> basic;        // column basic in each row position
  std::vector<int> basic_row;    // column -> row position, -1 if nonbasic
  std::vector<double> x;         // current value per column
  std::vector<double> binv;      // m*m dense row-major inverse of B

  std::int64_t iterations = 0;
  std::int64_t degenerate_steps = 0;
  int pivots_since_refactor = 0;

  double column_entry(int col, int row) const {
    return col < ns ? problem->rows[row].coeffs[col] : (col - ns == row ? 1.0 : 0.0);
  }

  // w = Binv * A_col
  void ftran(int col, std::vector<double>& w) const {
    w.assign(m, 0.0);
    if (col < ns) {
      for (int r = 0; r < m; ++r) {
        double sum = 0.0;
        const double* binv_row = &binv[static_cast<std::size_t>(r) * m];
        for (int i = 0; i < m; ++i) {
          double a = problem->rows[i].coeffs[col];
          if (a != 0.0) sum += binv_row[i] * a;
        }
        w[r] = sum;
      }
    } else {
      int slack_row = col - ns;
      for (int r = 0; r < m; ++r) w[r] = binv[static_cast<std::size_t>(r) * m + slack_row];
    }
  }

  // y = Binv' * c_basic  (c given per row position)
  void btran(const std::vector<double>& row_cost, std::vector<double>& y) const {
    y.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      double c = row_cost[r];
      if (c == 0.0) continue;
      const double* binv_row = &binv[static_cast<std::size_t>(r) * m];
      for (int i = 0; i < m; ++i) y[i] += c * binv_row[i];
    }
  }

  double dot_column(const std::vector<double>& y, int col) const {
    if (col >= ns) return y[col - ns];
    double sum = 0.0;
    for (int r = 0; r < m; ++r) {
      double a = problem->rows[r].coeffs[col];
      if (a != 0.0) sum += y[r] * a;
    }
    return sum;
  }

  void refactor() {
    // Gauss-Jordan inversion of the basis matrix with partial pivoting.
    std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) mat[static_cast<std::size_t>(r) * m + c] = column_entry(basic[c], r);
    binv.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) binv[static_cast<std::size_t>(r) * m + r] = 1.0;
    for (int col = 0; col < m; ++col) {
      int pivot = col;
      double best = std::abs(mat[static_cast<std::size_t>(col) * m + col]);
      for (int r = col + 1; r < m; ++r) {
        double v = std::abs(mat[static_cast<std::size_t>(r) * m + col]);
        if (v > best) {
          best = v;
          pivot = r;
        }
      }
      if (best < 1e-12) throw std::logic_error("lp: singular basis during refactorization");
      if (pivot != col) {
        for (int j = 0; j < m; ++j) {
          std::swap(mat[static_cast<std::size_t>(pivot) * m + j], mat[static_cast<std::size_t>(col) * m + j]);
          std::swap(binv[static_cast<std::size_t>(pivot) * m + j], binv[static_cast<std::size_t>(col) * m + j]);
        }
      }
      double inv = 1.0 / mat[static_cast<std::size_t>(col) * m + col];
      for (int j = 0; j < m; ++j) {
        mat[static_cast<std::size_t>(col) * m + j] *= inv;
        binv[static_cast<std::size_t>(col) * m + j] *= inv;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        double factor = mat[static_cast<std::size_t>(r) * m + col];
        if (factor == 0.0) continue;
        for (int j = 0; j < m; ++j) {
          mat[static_cast<std::size_t>(r) * m + j] -= factor * mat[static_cast<std::size_t>(col) * m + j];
          binv[static_cast<std::size_t>(r) * m + j] -= factor * binv[static_cast<std::size_t>(col) * m + j];
        }
      }
    }
    for (int r = 0; r < m; ++r) basic_row[basic[r]] = r;
    pivots_since_refactor = 0;
  }

  void compute_basic_values() {
    std::vector<double> residual = rhs;
    for (int col = 0; col < total; ++col) {
      if (state[col] == VarStatus::kBasic) continue;
      double v = nonbasic_value(col);
      x[col] = v;
      if (v == 0.0) continue;
      if (col < ns) {
        for (int r = 0; r < m; ++r) {
          double a = problem->rows[r].coeffs[col];
          if (a != 0.0) residual[r] -= a * v;
        }
      } else {
        residual[col - ns] -= v;
      }
    }
    for (int r = 0; r < m; ++r) {
      double sum = 0.0;
      const double* binv_row = &binv[static_cast<std::size_t>(r) * m];
      for (int i = 0; i < m; ++i) sum += binv_row[i] * residual[i];
      x[basic[r]] = sum;
    }
  }

  double nonbasic_value(int col) const {
    switch (state[col]) {
      case VarStatus::kAtLower: return lo[col];
      case VarStatus::kAtUpper: return hi[col];
      case VarStatus::kFree: return 0.0;
      case VarStatus::kBasic: break;
    }
    throw std::logic_error("lp: basic column has no nonbasic value");
  }

  void update_inverse(const std::vector<double>& w, int leave_row) {
    double pivot = w[leave_row];
    double* pivot_row = &binv[static_cast<std::size_t>(leave_row) * m];
    double inv = 1.0 / pivot;
    for (int j = 0; j < m; ++j) pivot_row[j] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == leave_row) continue;
      double factor = w[r];
      if (factor == 0.0) continue;
      double* row = &binv[static_cast<std::size_t>(r) * m];
      for (int j = 0; j < m; ++j) row[j] -= factor * pivot_row[j];
    }
  }
};

SimplexSolver::SimplexSolver(SimplexOptions options) : options_(options) {}

namespace {

struct RatioHit {
  double step = kLpInfinity;
  int row = -1;             // leaving row position, -1 for an entering bound flip
  VarStatus leave_state = VarStatus::kAtLower;
};

}  // namespace

LpSolution SimplexSolver::solve(const LpProblem& p, const LpBasis* warm) {
  p.validate();

  SimplexSolver::Work w;
  w.problem = &p;
  w.opt = options_;
  w.m = p.num_rows();
  w.ns = p.num_vars();
  w.total = w.ns + w.m;

  const double sense_factor = p.sense == LpSense::kMaximize ? -1.0 : 1.0;
  w.cost.assign(w.total, 0.0);
  for (int j = 0; j < w.ns; ++j) w.cost[j] = sense_factor * p.objective[j];
  w.lo.resize(w.total);
  w.hi.resize(w.total);
  w.rhs.resize(w.m);
  for (int j = 0; j < w.ns; ++j) {
    w.lo[j] = p.lower[j];
    w.hi[j] = p.upper[j];
  }
  for (int r = 0; r < w.m; ++r) {
    slack_bounds(p.rows[r].rel, &w.lo[w.ns + r], &w.hi[w.ns + r]);
    w.rhs[r] = p.rows[r].rhs;
  }

  auto default_state = [&](int col) {
    if (std::isfinite(w.lo[col])) return VarStatus::kAtLower;
    if (std::isfinite(w.hi[col])) return VarStatus::kAtUpper;
    return VarStatus::kFree;
  };

  // Starting basis: warm statuses when they are usable, else the slack basis.
  bool warm_ok = warm != nullptr && static_cast<int>(warm->status.size()) == w.total &&
                 std::count(warm->status.begin(), warm->status.end(), VarStatus::kBasic) == w.m;
  w.state.assign(w.total, VarStatus::kAtLower);
  w.basic.clear();
  if (warm_ok) {
    w.state = warm->status;
    for (int col = 0; col < w.total; ++col)
      if (w.state[col] == VarStatus::kBasic) w.basic.push_back(col);
  } else {
    for (int j = 0; j < w.ns; ++j) w.state[j] = default_state(j);
    for (int r = 0; r < w.m; ++r) {
      w.state[w.ns + r] = VarStatus::kBasic;
      w.basic.push_back(w.ns + r);
    }
  }
  w.basic_row.assign(w.total, -1);
  w.x.assign(w.total, 0.0);

  auto fall_back_to_slack_basis = [&]() {
    w.basic.clear();
    for (int j = 0; j < w.ns; ++j) w.state[j] = default_state(j);
    for (int r = 0; r < w.m; ++r) {
      w.state[w.ns + r] = VarStatus::kBasic;
      w.basic.push_back(w.ns + r);
    }
    w.basic_row.assign(w.total, -1);
    w.refactor();
  };

  try {
    w.refactor();
  } catch (const std::logic_error&) {
    fall_back_to_slack_basis();
  }
  // Nonbasic variables sitting on an infinite bound get a usable state.
  for (int col = 0; col < w.total; ++col) {
    if (w.state[col] == VarStatus::kBasic) continue;
    if (w.state[col] == VarStatus::kAtLower && !std::isfinite(w.lo[col]))
      w.state[col] = default_state(col);
    if (w.state[col] == VarStatus::kAtUpper && !std::isfinite(w.hi[col]))
      w.state[col] = default_state(col);
  }
  w.compute_basic_values();

  LpSolution solution;
  std::vector<double> work_col;
  std::vector<double> y;
  std::vector<double> row_cost(w.m);

  auto infeasibility = [&](int col) {
    if (w.x[col] < w.lo[col] - w.opt.feasibility_tol) return w.lo[col] - w.x[col];
    if (w.x[col] > w.hi[col] + w.opt.feasibility_tol) return w.x[col] - w.hi[col];
    return 0.0;
  };

  auto take_step = [&](int enter, int enter_dir, const RatioHit& hit,
                       const std::vector<double>& wcol) {
    if (hit.step > 1e-12) {
      for (int r = 0; r < w.m; ++r)
        w.x[w.basic[r]] -= enter_dir * hit.step * wcol[r];
      w.x[enter] += enter_dir * hit.step;
    } else {
      ++w.degenerate_steps;
    }
    if (hit.row < 0) {
      // Entering variable traveled to its opposite bound.
      w.state[enter] = enter_dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      w.x[enter] = enter_dir > 0 ? w.hi[enter] : w.lo[enter];
    } else {
      int leave = w.basic[hit.row];
      w.state[leave] = hit.leave_state;
      w.x[leave] = hit.leave_state == VarStatus::kAtLower ? w.lo[leave] : w.hi[leave];
      w.state[enter] = VarStatus::kBasic;
      w.basic[hit.row] = enter;
      w.basic_row[leave] = -1;
      w.basic_row[enter] = hit.row;
      w.update_inverse(wcol, hit.row);
      if (++w.pivots_since_refactor >= w.opt.refactor_interval) {
        w.refactor();
        w.compute_basic_values();
      }
    }
  };

  // Ratio test shared by both phases. `allow_infeasible` enables the phase-1
  // rules where a violated basic variable blocks only at the bound it
  // violates (becoming feasible there).
  auto ratio_test = [&](int enter, int enter_dir, const std::vector<double>& wcol,
                        bool phase1) {
    RatioHit best;
    // Entering variable's own range to its opposite bound.
    double range = enter_dir > 0 ? w.hi[enter] - w.x[enter] : w.x[enter] - w.lo[enter];
    if (std::isfinite(range)) best.step = std::max(0.0, range);
    for (int r = 0; r < w.m; ++r) {
      double delta = -enter_dir * wcol[r];
      if (std::abs(delta) <= w.opt.pivot_tol) continue;
      int col = w.basic[r];
      double value = w.x[col];
      double step = kLpInfinity;
      VarStatus leave_state = VarStatus::kAtLower;
      if (phase1 && value < w.lo[col] - w.opt.feasibility_tol) {
        if (delta > 0.0) {
          step = (w.lo[col] - value) / delta;
          leave_state = VarStatus::kAtLower;
        }
      } else if (phase1 && value > w.hi[col] + w.opt.feasibility_tol) {
        if (delta < 0.0) {
          step = (w.hi[col] - value) / delta;
          leave_state = VarStatus::kAtUpper;
        }
      } else if (delta > 0.0 && std::isfinite(w.hi[col])) {
        step = (w.hi[col] - value) / delta;
        leave_state = VarStatus::kAtUpper;
      } else if (delta < 0.0 && std::isfinite(w.lo[col])) {
        step = (w.lo[col] - value) / delta;
        leave_state = VarStatus::kAtLower;
      }
      if (step == kLpInfinity) continue;
      step = std::max(step, 0.0);
      if (step < best.step - 1e-12 ||
          (step < best.step + 1e-12 && best.row >= 0 && w.basic[r] < w.basic[best.row])) {
        best.step = step;
        best.row = r;
        best.leave_state = leave_state;
      }
    }
    return best;
  };

  bool bland = false;
  auto maybe_switch_to_bland = [&]() {
    if (!bland && w.degenerate_steps > w.opt.bland_threshold) bland = true;
  };

  bool infeasible = false;
  bool iter_limited = false;

  // ---- Phase 1: drive out primal infeasibility. ----
  while (true) {
    if (w.iterations >= w.opt.iteration_limit) {
      iter_limited = true;
      break;
    }
    double worst_infeasibility = 0.0;
    for (int r = 0; r < w.m; ++r)
      worst_infeasibility = std::max(worst_infeasibility, infeasibility(w.basic[r]));
    if (worst_infeasibility <= w.opt.feasibility_tol) break;

    for (int r = 0; r < w.m; ++r) {
      int col = w.basic[r];
      if (w.x[col] < w.lo[col] - w.opt.feasibility_tol)
        row_cost[r] = -1.0;
      else if (w.x[col] > w.hi[col] + w.opt.feasibility_tol)
        row_cost[r] = 1.0;
      else
        row_cost[r] = 0.0;
    }
    w.btran(row_cost, y);

    int enter = -1;
    int enter_dir = 0;
    double best_score = w.opt.optimality_tol;
    for (int col = 0; col < w.total; ++col) {
      if (w.state[col] == VarStatus::kBasic) continue;
      double g = w.dot_column(y, col);
      int dir = 0;
      // Moving col by dir changes the infeasibility measure at rate -dir*g.
      if (w.state[col] == VarStatus::kAtLower && g > w.opt.optimality_tol) dir = 1;
      else if (w.state[col] == VarStatus::kAtUpper && g < -w.opt.optimality_tol) dir = -1;
      else if (w.state[col] == VarStatus::kFree && std::abs(g) > w.opt.optimality_tol)
        dir = g > 0.0 ? 1 : -1;
      if (dir == 0) continue;
      if (bland) {
        enter = col;
        enter_dir = dir;
        break;
      }
      if (std::abs(g) > best_score) {
        best_score = std::abs(g);
        enter = col;
        enter_dir = dir;
      }
    }
    if (enter < 0) {
      infeasible = true;
      break;
    }

    w.ftran(enter, work_col);
    RatioHit hit = ratio_test(enter, enter_dir, work_col, /*phase1=*/true);
    if (hit.step == kLpInfinity)
      throw std::logic_error("lp: phase-1 step unbounded despite positive infeasibility");
    take_step(enter, enter_dir, hit, work_col);
    ++w.iterations;
    maybe_switch_to_bland();
  }

  // ---- Phase 2: optimize. ----
  solution.status = infeasible ? LpStatus::kInfeasible
                    : iter_limited ? LpStatus::kIterLimit
                                   : LpStatus::kOptimal;
  if (!infeasible && !iter_limited) {
    while (true) {
      if (w.iterations >= w.opt.iteration_limit) {
        solution.status = LpStatus::kIterLimit;
        break;
      }
      for (int r = 0; r < w.m; ++r) row_cost[r] = w.cost[w.basic[r]];
      w.btran(row_cost, y);

      int enter = -1;
      int enter_dir = 0;
      double best_score = w.opt.optimality_tol;
      for (int col = 0; col < w.total; ++col) {
        if (w.state[col] == VarStatus::kBasic) continue;
        double d = w.cost[col] - w.dot_column(y, col);
        int dir = 0;
        if (w.state[col] == VarStatus::kAtLower && d < -w.opt.optimality_tol) dir = 1;
        else if (w.state[col] == VarStatus::kAtUpper && d > w.opt.optimality_tol) dir = -1;
        else if (w.state[col] == VarStatus::kFree && std::abs(d) > w.opt.optimality_tol)
          dir = d < 0.0 ? 1 : -1;
        if (dir == 0) continue;
        if (bland) {
          enter = col;
          enter_dir = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          enter = col;
          enter_dir = dir;
        }
      }
      if (enter < 0) {
        solution.status = LpStatus::kOptimal;
        break;
      }

      w.ftran(enter, work_col);
      RatioHit hit = ratio_test(enter, enter_dir, work_col, /*phase1=*/false);
      if (hit.step == kLpInfinity) {
        solution.status = LpStatus::kUnbounded;
        break;
      }
      take_step(enter, enter_dir, hit, work_col);
      ++w.iterations;
      maybe_switch_to_bland();
    }
  }

  // ---- Assemble the reported solution. ----
  w.refactor();
  w.compute_basic_values();
  solution.iterations = w.iterations;
  solution.primal.assign(w.ns, 0.0);
  for (int j = 0; j < w.ns; ++j) solution.primal[j] = w.x[j];
  solution.row_activity.assign(w.m, 0.0);
  for (int r = 0; r < w.m; ++r) solution.row_activity[r] = w.rhs[r] - w.x[w.ns + r];
  double objective = 0.0;
  for (int j = 0; j < w.ns; ++j) objective += p.objective[j] * w.x[j];
  solution.objective = objective;

  for (int r = 0; r < w.m; ++r) row_cost[r] = w.cost[w.basic[r]];
  w.btran(row_cost, y);
  solution.duals.assign(w.m, 0.0);
  for (int r = 0; r < w.m; ++r) solution.duals[r] = sense_factor * y[r];
  solution.reduced_costs.assign(w.ns, 0.0);
  for (int j = 0; j < w.ns; ++j)
    solution.reduced_costs[j] = sense_factor * (w.cost[j] - w.dot_column(y, j));
  solution.basis.status = w.state;
  return solution;
}

double dual_objective(const LpProblem& p, const LpSolution& s) {
  double value = 0.0;
  for (int r = 0; r < p.num_rows(); ++r) value += s.duals[r] * p.rows[r].rhs;
  for (int j = 0; j < p.num_vars(); ++j) {
    if (s.basis.status[j] == VarStatus::kAtLower)
      value += s.reduced_costs[j] * p.lower[j];
    else if (s.basis.status[j] == VarStatus::kAtUpper)
      value += s.reduced_costs[j] * p.upper[j];
  }
  return value;
}

LpSolution resolve_with_added_rows(SimplexSolver& solver, const LpProblem& base,
                                   const LpSolution& prev,
                                   std::span<const LpRow> added) {
  if (prev.status != LpStatus::kOptimal)
    throw InputError("resolve_with_added_rows: previous solution must be optimal");
  LpProblem augmented = base;
  for (const LpRow& row : added) augmented.rows.push_back(row);
  augmented.validate();

  LpBasis warm;
  // Previous statuses hold structurals then old slacks; new slacks join the
  // basis so the starting basis matrix stays square and nonsingular.
  warm.status = prev.basis.status;
  warm.status.insert(warm.status.end(), added.size(), VarStatus::kBasic);
  return solver.solve(augmented, &warm);
}

std::string to_lp_text(const LpProblem& p) {
  std::ostringstream out;
  char buffer[64];
  auto write_number = [&](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    out << buffer;
  };
  out << (p.sense == LpSense::kMaximize ? "Maximize" : "Minimize") << "\n obj:";
  for (int j = 0; j < p.num_vars(); ++j) {
    if (p.objective[j] == 0.0) continue;
    out << (p.objective[j] < 0 ? " - " : " + ");
    write_number(std::abs(p.objective[j]));
    out << " x" << j + 1;
  }
  out << "\nSubject To\n";
  for (int r = 0; r < p.num_rows(); ++r) {
    out << " c" << r + 1 << ":";
    bool any = false;
    for (int j = 0; j < p.num_vars(); ++j) {
      double c = p.rows[r].coeffs[j];
      if (c == 0.0) continue;
      out << (c < 0 ? " - " : " + ");
      write_number(std::abs(c));
      out << " x" << j + 1;
      any = true;
    }
    if (!any) out << " 0 x1";
    switch (p.rows[r].rel) {
      case LpRelation::kLessEqual: out << " <= "; break;
      case LpRelation::kEqual: out << " = "; break;
      case LpRelation::kGreaterEqual: out << " >= "; break;
    }
    write_number(p.rows[r].rhs);
    out << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < p.num_vars(); ++j) {
    bool lo_inf = !std::isfinite(p.lower[j]);
    bool hi_inf = !std::isfinite(p.upper[j]);
    out << " ";
    if (lo_inf && hi_inf) {
      out << "x" << j + 1 << " free\n";
      continue;
    }
    if (lo_inf)
      out << "-inf";
    else
      write_number(p.lower[j]);
    out << " <= x" << j + 1 << " <= ";
    if (hi_inf)
      out << "+inf";
    else
      write_number(p.upper[j]);
    out << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace ccsm
