#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ccsm/cuts.hpp"
#include "ccsm/instance.hpp"

namespace ccsm {

// Objective  min -lambda'x + omega * w  with w the epigraph variable of
// f(a'x). When built from epsilon, omega = sqrt((1 - epsilon) / epsilon).
struct MeanRiskObjective {
  std::vector<double> lambda;
  double omega = 0.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();

  static MeanRiskObjective from_epsilon(std::vector<double> lambda, double epsilon);
  static MeanRiskObjective from_omega(std::vector<double> lambda, double omega);
};

enum class CutStrategy { kLepiLsi, kAli, kNoCuts };

std::string cut_strategy_name(CutStrategy strategy);
CutStrategy cut_strategy_from_name(const std::string& name);

struct BncLimits {
  double time_limit_s = std::numeric_limits<double>::infinity();
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  // Relative termination gap (UB - LB) / |UB|; 0 disables the gap stop and
  // runs the tree to exhaustion.
  double gap_limit = 1e-4;
  // Keep every cut added during the solve in the report, for diagnostics.
  bool collect_cuts = false;
};

enum class SolveStatus { kOptimal, kGapLimit, kNodeLimit, kTimeLimit };

std::string solve_status_name(SolveStatus status);

struct CutCounts {
  std::int64_t lazy = 0;
  std::int64_t lepi = 0;
  std::int64_t lsi = 0;
  std::int64_t ali = 0;
  std::int64_t total() const { return lazy + lepi + lsi + ali; }
};

struct SolveReport {
  SolveStatus status = SolveStatus::kOptimal;
  double best_objective = std::numeric_limits<double>::infinity();
  double best_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  std::int64_t nodes = 0;
  CutCounts cuts;
  double wall_time_s = 0.0;
  std::vector<double> incumbent;  // 0/1 values; empty if none found
  std::vector<LinearCut> pool;    // populated when limits.collect_cuts is set
};

// Best-bound branch-and-cut for  min -lambda'x + omega*w  s.t. w >= f(a'x),
// sum x <= k, x binary. Epigraph feasibility is enforced lazily at integer
// LP solutions; with kLepiLsi or kAli (two-weight instances only), one user
// cut is added after every tenth explored node at fractional solutions. All
// cuts are globally valid and live in a pool shared across the tree.
//
// A solve is single-threaded and deterministic for fixed limits (up to wall
// clock effects when the time limit triggers).
SolveReport bnc_solve(const Instance& inst, const MeanRiskObjective& objective,
                      CutStrategy strategy, const BncLimits& limits = {});

// A cut tight at the integer point x and valid everywhere, separating
// (w, x) whenever w < f(a'x): the exactly lifted inequality whose
// permutation lists supp(x) first (descending weight, then index). Falls
// back to the plain telescoped inequality when the instance does not have
// two distinct weights. Throws std::logic_error if (w, x) is not actually
// infeasible.
LinearCut lazy_integer_cut(const Instance& inst, std::span<const double> x, double w);

// Most fractional coordinate (max of min(x_i, 1-x_i)), ties to the lowest
// index. Throws std::logic_error when x is integral within int_tol.
int select_branch_variable(std::span<const double> x, double int_tol = 1e-6);

// Global lower bound placed on the epigraph variable before any cut exists.
double initial_epigraph_lower_bound(const Instance& inst);

}  // namespace ccsm
