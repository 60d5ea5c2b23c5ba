#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ccsm {

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

enum class LpSense { kMinimize, kMaximize };
enum class LpRelation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> coeffs;
  LpRelation rel = LpRelation::kLessEqual;
  double rhs = 0.0;
};

// A bounded-variable linear program in dense row form. Immutable value type
// as far as the solver is concerned; callers mutate and re-solve.
struct LpProblem {
  LpSense sense = LpSense::kMinimize;
  std::vector<double> objective;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_variable(double obj, double lo, double hi);
  void add_row(std::vector<double> coeffs, LpRelation rel, double rhs);

  // Throws InputError on dimension mismatches or NaN coefficients.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

enum class VarStatus : char { kBasic, kAtLower, kAtUpper, kFree };

// Nonbasic/basic status for every structural variable followed by every row
// slack. Enough to reconstruct a starting point for a warm solve.
struct LpBasis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::kIterLimit;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> primal;         // structural variables
  std::vector<double> row_activity;   // a_i'x per row
  std::vector<double> duals;          // one per row, in the problem's sense
  std::vector<double> reduced_costs;  // structural, in the problem's sense
  LpBasis basis;
  std::int64_t iterations = 0;
};

// Objective of the bound-respecting dual at the solution's dual values;
// equals the primal objective at any optimal basic solution.
double dual_objective(const LpProblem& p, const LpSolution& s);

struct SimplexOptions {
  std::int64_t iteration_limit = 50'000;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  int refactor_interval = 100;
  std::int64_t bland_threshold = 1000;  // degenerate steps before Bland's rule
};

// Dense revised primal simplex over bounded variables, two phases, explicit
// basis inverse with periodic refactorization. A solver object owns mutable
// factorization state: use one per thread. Problems and solutions are plain
// values and can move freely between threads.
//
// Deterministic: identical problem and warm basis give an identical pivot
// sequence. Entering variable by largest reduced-cost magnitude (ties to the
// lowest column index); after `bland_threshold` degenerate steps, Bland's
// least-index rule.
class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions options = {});

  LpSolution solve(const LpProblem& p, const LpBasis* warm = nullptr);

 private:
  struct Work;
  SimplexOptions options_;
};

// Re-optimizes after appending rows to a previously solved problem, warm
// starting from the previous basis with the new slacks basic. `base` must be
// the problem `prev` was solved on; returns the solution of base + added.
LpSolution resolve_with_added_rows(SimplexSolver& solver, const LpProblem& base,
                                   const LpSolution& prev,
                                   std::span<const LpRow> added);

// Debug dump in CPLEX LP text format for external cross-checking.
std::string to_lp_text(const LpProblem& p);

}  // namespace ccsm
