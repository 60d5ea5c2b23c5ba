#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccsm/cuts.hpp"
#include "ccsm/instance.hpp"
#include "ccsm/lift_epi.hpp"

namespace ccsm {

enum class WeightClass { kLower, kHigher };

// Parameters of a lifted separation inequality: the averaging parameter i0,
// the weight class the base inequality lives on, and the orders in which the
// base class and the lifted class are traversed (original item indices).
struct SiParams {
  int i0 = 0;
  WeightClass weight_class = WeightClass::kLower;
  std::vector<int> perm_within_class;
  std::vector<int> perm_other_class;
};

// Base separation inequality over a single-weight ground set of `count`
// items with weight alpha: the first i0 permuted items keep their telescoped
// marginals, all later items share the averaged tail coefficient
// (f(k*alpha) - f(i0*alpha)) / (k - i0).
LinearCut si_cut(int count, double alpha, int k, int i0, const Permutation& perm,
                 const ConcaveFunction& f);

// The weight/curvature condition under which the higher-class lifting closed
// form is exact:
//   f(a_lo + (i0+1) a_hi) - f(a_lo + i0 a_hi) <= (f(k a_hi) - f(i0 a_hi)) / (k - i0).
// Always true for i0 = k-1. Borderline equality counts as satisfied.
bool check_assumption(const TwoWeightProfile& profile, const ConcaveFunction& f,
                      int k, int i0);
// Both sides of the condition, for reporting.
struct AssumptionSides {
  double lhs;
  double rhs;
};
AssumptionSides assumption_sides(const TwoWeightProfile& profile,
                                 const ConcaveFunction& f, int k, int i0);

// Sequential lifting state for a separation inequality: the instance
// re-indexed so the base class comes first in its chosen order, followed by
// the other class in its chosen order. Base coefficients are fixed at
// construction; lifted coefficients are appended one at a time.
class SiLiftingContext {
 public:
  SiLiftingContext(const Instance& inst, const SiParams& params);

  int n() const { return static_cast<int>(weights_.size()); }
  int k() const { return inst_.k(); }
  int i0() const { return params_.i0; }
  int base_size() const { return base_size_; }
  double weight_at(int position) const { return weights_[position]; }
  double f(double y) const { return inst_.f()(y); }

  int fixed_count() const { return static_cast<int>(coeff_.size()); }
  double coefficient(int position) const { return coeff_[position]; }
  void push_coefficient(double value) { coeff_.push_back(value); }

  // Original item index at a re-indexed position.
  int item_at(int position) const { return items_[position]; }
  const TwoWeightProfile& profile() const { return profile_; }

 private:
  const Instance& inst_;
  SiParams params_;
  TwoWeightProfile profile_;
  int base_size_;
  std::vector<int> items_;
  std::vector<double> weights_;
  std::vector<double> coeff_;
};

// Objective of the j-th lifting problem at support X (positions < j,
// |X| <= k-1), with the epigraph constraint tight.
double si_support_value(const SiLiftingContext& ctx, int j, std::span<const int> X);

// Exhaustive minimum of si_support_value over all supports. Independent
// reference for the closed forms below.
double lift_oracle_si(const SiLiftingContext& ctx, int j,
                      std::int64_t enumeration_cap = kDefaultEnumerationCap);

// Exact lifting of a base separation inequality over the lower class
// (requires |lower| >= k) with respect to the higher-class items.
// Facet-defining whenever the base inequality is.
LinearCut lower_si_cut(const Instance& inst, const SiParams& params);

// Exact lifting over the higher class (requires |higher| > k) with respect
// to the lower-class items. Only exact under the assumption checked by
// check_assumption; refused with AssumptionError otherwise, since the closed
// form can then overestimate coefficients and cut off feasible points.
LinearCut higher_si_cut(const Instance& inst, const SiParams& params);

// Orders `items` by descending value of x, ties broken by lowest index.
std::vector<int> order_by_descending_value(std::span<const double> x,
                                           std::span<const int> items);

// The averaging parameter whose lower separation inequality is most violated
// at the fractional point x (class orders: descending x within each class).
// Ties resolve to the smallest i0. Requires |lower| >= k.
int best_i0(const Instance& inst, std::span<const double> x);

}  // namespace ccsm
