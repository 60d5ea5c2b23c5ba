#pragma once

#include <span>
#include <vector>

#include "ccsm/concave.hpp"

namespace ccsm {

// Absolute tolerance for equality/inequality property checks throughout the
// library. Function values in this problem class are O(10^2), which leaves
// ample double-precision headroom below this threshold.
inline constexpr double kTol = 1e-9;

// A permutation of {0, ..., n-1}. Construction validates bijectivity.
class Permutation {
 public:
  explicit Permutation(std::vector<int> order);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int position) const { return order_[position]; }
  const std::vector<int>& order() const { return order_; }

  // position_of(item) is the inverse map.
  int position_of(int item) const { return positions_[item]; }

  bool operator==(const Permutation& other) const { return order_ == other.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> positions_;
};

// Problem data for min f(a'x) over binary x with sum(x) <= k. Weights are
// non-negative; indices are 0-based everywhere in the API (file formats and
// logs use 1-based indices and the I/O layer converts).
//
// Immutable after construction; all member operations are pure.
class Instance {
 public:
  Instance(std::vector<double> weights, int k, ConcaveFunction f);

  int n() const { return static_cast<int>(weights_.size()); }
  int k() const { return k_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int i) const { return weights_[i]; }
  const ConcaveFunction& f() const { return f_; }

  double weight_sum(std::span<const int> subset) const;

  int distinct_weight_count() const;

 private:
  std::vector<double> weights_;
  int k_;
  ConcaveFunction f_;
};

// The two-weight view of an instance: the partition of the ground set into
// items of the low weight and items of the high weight, 0 <= a_lo < a_hi.
struct TwoWeightProfile {
  double a_lo = 0.0;
  double a_hi = 0.0;
  std::vector<int> lower;  // ascending indices with weight a_lo
  std::vector<int> higher;

  // Number of lower-weighted items among the first k-1 positions of perm.
  int d_lower(const Permutation& perm, int k) const;
  // Number of higher-weighted items strictly after position k-1 of perm.
  int d_higher(const Permutation& perm, int k) const;

  bool is_lower(int item) const;
};

enum class ReductionDirection { kIncreasing, kDecreasing };

// F(S) = f(sum of weights over S). Throws InputError on out-of-range or
// duplicated indices.
double eval_f(const Instance& inst, std::span<const int> subset);

// F(X + {i}) - F(X); requires i not in X.
double marginal(const Instance& inst, int i, std::span<const int> X);

// Exhaustively checks the diminishing-returns property of F over all
// i, X subset-of Y subset-of [n]\{i}. Throws CapacityError above the cap.
bool check_submodular(const Instance& inst, int brute_force_cap = 10);

struct ConcaveDifferenceSample {
  double y1;
  double y2;
  double d;
};

// Verifies f(y1+d) - f(y1) >= f(y2+d) - f(y2) - tol for each sample with
// y1 <= y2 and d >= 0.
bool check_concave_differences(const ConcaveFunction& f,
                               std::span<const ConcaveDifferenceSample> samples);

// Requires exactly two distinct weight values; throws StructureError naming
// the distinct count otherwise.
TwoWeightProfile two_weight_profile(const Instance& inst);

// Collapses an instance with three or more distinct weights to two, pivoting
// at `pivot` (strictly between the extreme distinct values). For a function
// that is monotone in the stated direction, the new weights bound the old
// ones from the correct side, so cuts built on the reduced instance remain
// valid for the original. Monotonicity is checked on a 1001-point grid over
// [0, sum of weights].
Instance reduce_to_two_weights(const Instance& inst, double pivot,
                               ReductionDirection direction);

}  // namespace ccsm
