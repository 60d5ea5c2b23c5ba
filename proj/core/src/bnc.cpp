#include "ccsm/bnc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>

#include "ccsm/errors.hpp"
#include "ccsm/lift_epi.hpp"
#include "ccsm/lift_si.hpp"
#include "ccsm/lp.hpp"

namespace ccsm {

MeanRiskObjective MeanRiskObjective::from_epsilon(std::vector<double> lambda,
                                                  double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw InputError("mean-risk objective: epsilon must lie in (0, 0.5)");
  MeanRiskObjective obj;
  obj.lambda = std::move(lambda);
  obj.epsilon = epsilon;
  obj.omega = std::sqrt((1.0 - epsilon) / epsilon);
  return obj;
}

MeanRiskObjective MeanRiskObjective::from_omega(std::vector<double> lambda,
                                                double omega) {
  if (!(omega >= 0.0)) throw InputError("mean-risk objective: omega must be >= 0");
  MeanRiskObjective obj;
  obj.lambda = std::move(lambda);
  obj.omega = omega;
  return obj;
}

std::string cut_strategy_name(CutStrategy strategy) {
  switch (strategy) {
    case CutStrategy::kLepiLsi: return "lepi-lsi";
    case CutStrategy::kAli: return "ali";
    case CutStrategy::kNoCuts: return "nocuts";
  }
  throw std::logic_error("unreachable strategy");
}

CutStrategy cut_strategy_from_name(const std::string& name) {
  if (name == "lepi-lsi") return CutStrategy::kLepiLsi;
  if (name == "ali") return CutStrategy::kAli;
  if (name == "nocuts") return CutStrategy::kNoCuts;
  throw InputError("unknown strategy: " + name);
}

std::string solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kGapLimit: return "GapLimit";
    case SolveStatus::kNodeLimit: return "NodeLimit";
    case SolveStatus::kTimeLimit: return "TimeLimit";
  }
  throw std::logic_error("unreachable status");
}

int select_branch_variable(std::span<const double> x, double int_tol) {
  int best = -1;
  double best_frac = int_tol;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double frac = std::min(x[i], 1.0 - x[i]);
    if (frac > best_frac) {
      best_frac = frac;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw std::logic_error("select_branch_variable: point is integral");
  return best;
}

LinearCut lazy_integer_cut(const Instance& inst, std::span<const double> x, double w) {
  const int n = inst.n();
  if (static_cast<int>(x.size()) != n) throw InputError("lazy_integer_cut: dimension mismatch");
  std::vector<int> support;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i) (x[i] > 0.5 ? support : rest).push_back(i);
  double value = inst.f()(inst.weight_sum(support));
  if (w >= value - kTol)
    throw std::logic_error("lazy_integer_cut: point is already epigraph-feasible");

  auto by_weight_desc = [&](int a, int b) {
    if (inst.weight(a) != inst.weight(b)) return inst.weight(a) > inst.weight(b);
    return a < b;
  };
  std::sort(support.begin(), support.end(), by_weight_desc);
  std::sort(rest.begin(), rest.end(), by_weight_desc);
  std::vector<int> order = support;
  order.insert(order.end(), rest.begin(), rest.end());
  Permutation perm{std::move(order)};
  // The support forms a prefix of the permutation, so the cut telescopes to
  // exactly f(a'x) at x while staying globally valid.
  if (inst.distinct_weight_count() == 2) return lifted_epi_cut(inst, perm);
  return epi_cut(inst, perm);
}

double initial_epigraph_lower_bound(const Instance& inst) {
  const int k = inst.k();
  if (inst.distinct_weight_count() == 2) {
    TwoWeightProfile profile = two_weight_profile(inst);
    double best = 0.0;
    int max_lo = std::min<int>(k, static_cast<int>(profile.lower.size()));
    for (int t = 0; t <= max_lo; ++t) {
      int max_hi = std::min<int>(k - t, static_cast<int>(profile.higher.size()));
      for (int s = 0; s <= max_hi; ++s)
        best = std::min(best, inst.f()(t * profile.a_lo + s * profile.a_hi));
    }
    return best;
  }
  // Concave on [0, M] is minimized at an endpoint; M is the largest
  // attainable weight sum.
  std::vector<double> sorted = inst.weights();
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double reach = 0.0;
  for (int i = 0; i < k; ++i) reach += sorted[i];
  return std::min(0.0, inst.f()(reach));
}

namespace {

constexpr double kIntTol = 1e-6;
// Strictly looser than the LP feasibility tolerance, so a point the LP deems
// feasible for an existing cut row can never re-trigger the same lazy cut.
constexpr double kEpigraphTol = 1e-6;
constexpr int kUserCutPeriod = 10;

struct Node {
  std::vector<int> fixed_zero;
  std::vector<int> fixed_one;
  double bound;
  std::int64_t id;
  LpBasis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

struct CutPool {
  std::vector<std::vector<double>> normalized;  // (pi0, pi...) scaled by max abs

  bool insert(const LinearCut& cut) {
    std::vector<double> key;
    key.reserve(cut.pi.size() + 1);
    key.push_back(cut.pi0);
    for (double v : cut.pi) key.push_back(v);
    double scale = 0.0;
    for (double v : key) scale = std::max(scale, std::abs(v));
    if (scale > 0.0)
      for (double& v : key) v /= scale;
    for (const auto& kept : normalized) {
      bool same = true;
      for (std::size_t i = 0; i < key.size(); ++i)
        if (std::abs(kept[i] - key[i]) > kTol) {
          same = false;
          break;
        }
      if (same) return false;
    }
    normalized.push_back(std::move(key));
    return true;
  }
};

}  // namespace

SolveReport bnc_solve(const Instance& inst, const MeanRiskObjective& objective,
                      CutStrategy strategy, const BncLimits& limits) {
  const int n = inst.n();
  const int k = inst.k();
  if (static_cast<int>(objective.lambda.size()) != n)
    throw InputError("bnc_solve: lambda dimension mismatch");
  if (strategy != CutStrategy::kNoCuts && inst.distinct_weight_count() != 2)
    throw StructureError("bnc_solve: cut strategies require a two-weight instance");

  const auto start_time = std::chrono::steady_clock::now();
  auto elapsed_s = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
        .count();
  };

  TwoWeightProfile profile;
  bool two_weight = inst.distinct_weight_count() == 2;
  if (two_weight) profile = two_weight_profile(inst);
  const bool lsi_available =
      two_weight && static_cast<int>(profile.lower.size()) >= k;

  // LP relaxation: variables x_0..x_{n-1} in [0,1] and w last; rows are the
  // cardinality constraint followed by the growing cut pool.
  LpProblem lp;
  lp.objective.assign(n + 1, 0.0);
  lp.lower.assign(n + 1, 0.0);
  lp.upper.assign(n + 1, 1.0);
  for (int i = 0; i < n; ++i) lp.objective[i] = -objective.lambda[i];
  lp.objective[n] = objective.omega;
  lp.lower[n] = initial_epigraph_lower_bound(inst);
  lp.upper[n] = kLpInfinity;
  {
    std::vector<double> row(n + 1, 1.0);
    row[n] = 0.0;
    lp.add_row(std::move(row), LpRelation::kLessEqual, static_cast<double>(k));
  }

  CutPool pool;
  CutCounts counts;
  std::vector<LinearCut> collected;
  auto add_cut_row = [&](const LinearCut& cut) {
    if (!pool.insert(cut)) return false;
    std::vector<double> row(n + 1, 0.0);
    for (int i = 0; i < n; ++i) row[i] = -cut.pi[i];
    row[n] = 1.0;  // w - pi'x >= pi0
    lp.add_row(std::move(row), LpRelation::kGreaterEqual, cut.pi0);
    if (limits.collect_cuts) collected.push_back(cut);
    return true;
  };

  SimplexSolver solver;
  SolveReport report;
  report.best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  open.push(Node{{}, {}, -std::numeric_limits<double>::infinity(), next_id++, {}});

  auto finish = [&](SolveStatus status) {
    report.status = status;
    double lb = report.best_objective;
    if (!open.empty()) lb = std::min(lb, open.top().bound);
    if (status == SolveStatus::kOptimal) lb = report.best_objective;
    report.best_bound = lb;
    if (std::isfinite(report.best_objective)) {
      double denom = std::max(std::abs(report.best_objective), 1e-12);
      report.gap = std::max(0.0, (report.best_objective - report.best_bound) / denom);
    }
    report.cuts = counts;
    report.incumbent = incumbent;
    report.pool = collected;
    report.wall_time_s = elapsed_s();
    return report;
  };

  auto current_gap = [&]() {
    if (!std::isfinite(report.best_objective)) return std::numeric_limits<double>::infinity();
    double lb = report.best_objective;
    if (!open.empty()) lb = std::min(lb, open.top().bound);
    double denom = std::max(std::abs(report.best_objective), 1e-12);
    return (report.best_objective - lb) / denom;
  };

  std::vector<double> x(n);
  while (!open.empty()) {
    if (limits.gap_limit > 0.0 && current_gap() <= limits.gap_limit)
      return finish(SolveStatus::kGapLimit);
    if (elapsed_s() > limits.time_limit_s) return finish(SolveStatus::kTimeLimit);
    // The root always runs, so even node_limit = 0 reports the root bound.
    if (report.nodes > 0 && report.nodes >= limits.node_limit)
      return finish(SolveStatus::kNodeLimit);

    Node node = open.top();
    open.pop();
    if (node.bound >= report.best_objective - kTol) continue;  // pruned by bound

    for (int i : node.fixed_zero) lp.upper[i] = 0.0;
    for (int i : node.fixed_one) lp.lower[i] = 1.0;

    LpBasis warm = node.basis;
    // Rows added after this node was created get their slacks basic.
    if (!warm.empty() &&
        static_cast<int>(warm.status.size()) < n + 1 + lp.num_rows()) {
      warm.status.resize(n + 1 + lp.num_rows(), VarStatus::kBasic);
    }

    LpSolution sol = solver.solve(lp, warm.empty() ? nullptr : &warm);
    ++report.nodes;
    bool user_cut_done = false;

    while (true) {
      if (sol.status == LpStatus::kInfeasible) break;
      if (sol.status != LpStatus::kOptimal)
        throw std::logic_error("bnc_solve: node relaxation neither optimal nor infeasible");
      if (sol.objective >= report.best_objective - kTol) break;  // bound prune

      for (int i = 0; i < n; ++i) x[i] = sol.primal[i];
      double w_value = sol.primal[n];

      bool integral = true;
      for (int i = 0; i < n; ++i)
        if (std::min(x[i], 1.0 - x[i]) > kIntTol) {
          integral = false;
          break;
        }

      if (integral) {
        std::vector<double> rounded(n);
        for (int i = 0; i < n; ++i) rounded[i] = x[i] > 0.5 ? 1.0 : 0.0;
        double true_value = 0.0;
        for (int i = 0; i < n; ++i)
          if (rounded[i] > 0.5) true_value += inst.weight(i);
        true_value = inst.f()(true_value);
        bool added_lazy = false;
        if (w_value < true_value - kEpigraphTol) {
          LinearCut cut = lazy_integer_cut(inst, rounded, w_value);
          added_lazy = add_cut_row(cut);
          if (added_lazy) {
            ++counts.lazy;
            LpBasis warm_again = sol.basis;
            warm_again.status.push_back(VarStatus::kBasic);
            sol = solver.solve(lp, &warm_again);
            continue;
          }
          // The tight cut is already pooled, so the gap is LP roundoff; the
          // incumbent value below uses the exact function value either way.
        }
        double candidate = objective.omega * true_value;
        for (int i = 0; i < n; ++i)
          if (rounded[i] > 0.5) candidate -= objective.lambda[i];
        if (candidate < report.best_objective - kTol) {
          report.best_objective = candidate;
          incumbent = rounded;
        }
        break;  // relaxation optimum integral: subtree done
      }

      // Fractional: one user cut per explored node at the stated cadence.
      if (!user_cut_done && strategy != CutStrategy::kNoCuts &&
          report.nodes % kUserCutPeriod == 0) {
        user_cut_done = true;
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        Permutation desc{order_by_descending_value(x, all)};
        LinearCut chosen;
        if (strategy == CutStrategy::kAli) {
          chosen = ali_cut(inst, desc);
        } else {
          chosen = lifted_epi_cut(inst, desc);
          if (lsi_available) {
            SiParams params;
            params.weight_class = WeightClass::kLower;
            params.perm_within_class = order_by_descending_value(x, profile.lower);
            params.perm_other_class = order_by_descending_value(x, profile.higher);
            params.i0 = best_i0(inst, x);
            LinearCut lsi = lower_si_cut(inst, params);
            if (lsi.violation(w_value, x) > chosen.violation(w_value, x) + kTol) {
              chosen = lsi;  // ties keep the exactly lifted cut
            }
          }
        }
        if (chosen.violation(w_value, x) > kEpigraphTol && add_cut_row(chosen)) {
          if (chosen.family == CutFamily::kLiftedEpi) ++counts.lepi;
          else if (chosen.family == CutFamily::kLowerSi) ++counts.lsi;
          else ++counts.ali;
          LpBasis warm_again = sol.basis;
          warm_again.status.push_back(VarStatus::kBasic);
          sol = solver.solve(lp, &warm_again);
          continue;
        }
      }

      // Branch.
      int variable = select_branch_variable(x, kIntTol);
      Node child0{node.fixed_zero, node.fixed_one, sol.objective, next_id++, sol.basis};
      child0.fixed_zero.push_back(variable);
      Node child1{node.fixed_zero, node.fixed_one, sol.objective, next_id++, sol.basis};
      child1.fixed_one.push_back(variable);
      open.push(std::move(child0));
      open.push(std::move(child1));
      break;
    }

    for (int i : node.fixed_zero) lp.upper[i] = 1.0;
    for (int i : node.fixed_one) lp.lower[i] = 0.0;
  }

  return finish(SolveStatus::kOptimal);
}

}  // namespace ccsm
