#include "ccsm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ccsm/errors.hpp"

namespace ccsm {

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  positions_.assign(n, -1);
  for (int pos = 0; pos < n; ++pos) {
    int item = order_[pos];
    if (item < 0 || item >= n || positions_[item] != -1)
      throw InputError("permutation: not a bijection on {0..n-1}");
    positions_[item] = pos;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  return Permutation(std::move(order));
}

Instance::Instance(std::vector<double> weights, int k, ConcaveFunction f)
    : weights_(std::move(weights)), k_(k), f_(std::move(f)) {
  if (weights_.empty()) throw InputError("instance: n must be positive");
  for (double a : weights_) {
    if (!(a >= 0.0)) throw InputError("instance: weights must be non-negative");
  }
  if (k_ < 1 || k_ > n()) throw InputError("instance: k must lie in [1, n]");
}

double Instance::weight_sum(std::span<const int> subset) const {
  double total = 0.0;
  for (int i : subset) total += weights_[i];
  return total;
}

int Instance::distinct_weight_count() const {
  std::set<double> values(weights_.begin(), weights_.end());
  return static_cast<int>(values.size());
}

int TwoWeightProfile::d_lower(const Permutation& perm, int k) const {
  int count = 0;
  for (int pos = 0; pos < k - 1; ++pos)
    if (is_lower(perm[pos])) ++count;
  return count;
}

int TwoWeightProfile::d_higher(const Permutation& perm, int k) const {
  int count = 0;
  for (int pos = k - 1; pos < perm.size(); ++pos)
    if (!is_lower(perm[pos])) ++count;
  return count;
}

bool TwoWeightProfile::is_lower(int item) const {
  return std::binary_search(lower.begin(), lower.end(), item);
}

namespace {

void validate_subset(const Instance& inst, std::span<const int> subset) {
  std::vector<char> seen(inst.n(), 0);
  for (int i : subset) {
    if (i < 0 || i >= inst.n()) {
      std::ostringstream msg;
      msg << "subset index " << i << " out of range for n = " << inst.n();
      throw InputError(msg.str());
    }
    if (seen[i]) throw InputError("subset contains a duplicated index");
    seen[i] = 1;
  }
}

}  // namespace

double eval_f(const Instance& inst, std::span<const int> subset) {
  validate_subset(inst, subset);
  return inst.f()(inst.weight_sum(subset));
}

double marginal(const Instance& inst, int i, std::span<const int> X) {
  validate_subset(inst, X);
  if (i < 0 || i >= inst.n()) throw InputError("marginal: item out of range");
  for (int j : X)
    if (j == i) throw InputError("marginal: item already belongs to the set");
  double base = inst.weight_sum(X);
  return inst.f()(base + inst.weight(i)) - inst.f()(base);
}

bool check_submodular(const Instance& inst, int brute_force_cap) {
  const int n = inst.n();
  if (n > brute_force_cap) {
    std::ostringstream msg;
    msg << "check_submodular: n = " << n << " exceeds brute-force cap " << brute_force_cap;
    throw CapacityError(msg.str());
  }
  // Precompute f over all subset sums once; 2^n values.
  std::vector<double> value(1u << n);
  for (unsigned mask = 0; mask < value.size(); ++mask) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sum += inst.weight(i);
    value[mask] = inst.f()(sum);
  }
  for (int i = 0; i < n; ++i) {
    const unsigned others = ((1u << n) - 1u) & ~(1u << i);
    // Enumerate Y over subsets of others, X over subsets of Y.
    for (unsigned y = others;; y = (y - 1) & others) {
      for (unsigned x = y;; x = (x - 1) & y) {
        double gain_x = value[x | (1u << i)] - value[x];
        double gain_y = value[y | (1u << i)] - value[y];
        if (gain_x < gain_y - kTol) return false;
        if (x == 0) break;
      }
      if (y == 0) break;
    }
  }
  return true;
}

bool check_concave_differences(const ConcaveFunction& f,
                               std::span<const ConcaveDifferenceSample> samples) {
  for (const auto& s : samples) {
    if (!(s.d >= 0.0) || !(s.y1 <= s.y2))
      throw InputError("check_concave_differences: need d >= 0 and y1 <= y2");
    double early = f(s.y1 + s.d) - f(s.y1);
    double late = f(s.y2 + s.d) - f(s.y2);
    if (early < late - kTol) return false;
  }
  return true;
}

TwoWeightProfile two_weight_profile(const Instance& inst) {
  int distinct = inst.distinct_weight_count();
  if (distinct != 2) {
    std::ostringstream msg;
    msg << "two_weight_profile: expected 2 distinct weights, found " << distinct;
    throw StructureError(msg.str());
  }
  TwoWeightProfile profile;
  double lo = *std::min_element(inst.weights().begin(), inst.weights().end());
  double hi = *std::max_element(inst.weights().begin(), inst.weights().end());
  profile.a_lo = lo;
  profile.a_hi = hi;
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.weight(i) == lo)
      profile.lower.push_back(i);
    else
      profile.higher.push_back(i);
  }
  return profile;
}

Instance reduce_to_two_weights(const Instance& inst, double pivot,
                               ReductionDirection direction) {
  std::set<double> distinct(inst.weights().begin(), inst.weights().end());
  if (distinct.size() < 3)
    throw StructureError("reduce_to_two_weights: needs at least 3 distinct weights");
  double lo = *distinct.begin();
  double hi = *distinct.rbegin();
  if (!(pivot > lo && pivot < hi))
    throw InputError("reduce_to_two_weights: pivot must lie strictly between the extreme weights");

  // Sampled monotonicity check over [0, sum a].
  double total = 0.0;
  for (double a : inst.weights()) total += a;
  const int grid = 1000;
  double previous = inst.f()(0.0);
  for (int step = 1; step <= grid; ++step) {
    double y = total * static_cast<double>(step) / grid;
    double current = inst.f()(y);
    bool ok = direction == ReductionDirection::kIncreasing ? current >= previous - kTol
                                                           : current <= previous + kTol;
    if (!ok)
      throw MonotonicityError("reduce_to_two_weights: sampled monotonicity check failed");
    previous = current;
  }

  std::vector<double> reduced(inst.weights().size());
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    double a = inst.weights()[i];
    if (direction == ReductionDirection::kIncreasing)
      reduced[i] = a < pivot ? lo : pivot;  // reduced <= original elementwise
    else
      reduced[i] = a > pivot ? hi : pivot;  // reduced >= original elementwise
  }
  return Instance(std::move(reduced), inst.k(), inst.f());
}

}  // namespace ccsm
