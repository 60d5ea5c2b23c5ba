#pragma once

#include <cstdint>
#include <vector>

#include "ccsm/cuts.hpp"
#include "ccsm/instance.hpp"

namespace ccsm {

// Default cap on the number of subsets an exhaustive lifting oracle may
// enumerate before it refuses with CapacityError.
inline constexpr std::int64_t kDefaultEnumerationCap = 2'000'000;

// The inequality w >= sum_i rho_{perm_i} x_{perm_i} obtained by telescoping
// marginals of F along a permutation. Valid for the unconstrained epigraph,
// hence for every cardinality-constrained restriction of it.
LinearCut epi_cut(const Instance& inst, const Permutation& perm);

// State of a sequential lifting pass: the instance re-indexed so that the
// chosen permutation is the natural order, base set {0..k-1}, and the
// coefficients fixed so far. Coefficients are appended in position order;
// the list grows from 0 to n entries over the pass.
class LiftingContext {
 public:
  LiftingContext(const Instance& inst, const Permutation& perm);

  const Instance& instance() const { return inst_; }
  const Permutation& perm() const { return perm_; }
  int n() const { return inst_.n(); }
  int k() const { return inst_.k(); }

  // Weight of the item at a permuted position.
  double weight_at(int position) const { return weights_[position]; }
  double f(double y) const { return inst_.f()(y); }

  int fixed_count() const { return static_cast<int>(zeta_.size()); }
  double coefficient(int position) const { return zeta_[position]; }
  const std::vector<double>& coefficients() const { return zeta_; }
  void push_coefficient(double zeta) { zeta_.push_back(zeta); }

 private:
  const Instance& inst_;
  Permutation perm_;
  std::vector<double> weights_;  // permuted order
  std::vector<double> zeta_;
};

// Objective of the lifting problem for position j at a fixed support
// X (positions < j, |X| <= k-1): f(a_j + sum_X a) - sum_X zeta.
double zeta_support_value(const LiftingContext& ctx, int j,
                          std::span<const int> X);

struct OracleResult {
  double value = 0.0;
  // Supports attaining the minimum within kTol, as position masks in
  // ascending mask order.
  std::vector<std::uint64_t> argmin_masks;
};

// Exhaustive minimum of zeta_support_value over all supports, enumerated in
// ascending mask order. This is the independent reference for the closed-form
// recursion below and deliberately shares no code path with it.
double lift_oracle_epi(const LiftingContext& ctx, int j,
                       std::int64_t enumeration_cap = kDefaultEnumerationCap);
OracleResult lift_oracle_epi_full(const LiftingContext& ctx, int j,
                                  std::int64_t enumeration_cap = kDefaultEnumerationCap);

// Exact sequential lifting of the base inequality over the first k permuted
// items, for instances with exactly two distinct weights. Coefficients are
// computed by a closed-form recursion and mapped back to original indices.
// The resulting inequality is facet-defining for the cardinality-constrained
// hull.
LinearCut lifted_epi_cut(const Instance& inst, const Permutation& perm);

// The approximate variant: base coefficients as in epi_cut; each later item
// gets the marginal of f past a (k-1)-subset of its predecessors holding as
// many higher-weighted items as possible (ties broken by earliest position).
// Always dominated coefficient-wise by lifted_epi_cut on the same
// permutation.
LinearCut ali_cut(const Instance& inst, const Permutation& perm);

}  // namespace ccsm
