#include "ccsm/lift_si.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccsm/errors.hpp"

namespace ccsm {

namespace {

// Coefficient of the (pos+1)-th permuted item in a base separation
// inequality with parameter i0 over items of weight alpha.
double si_coefficient(int pos, double alpha, int k, int i0, const ConcaveFunction& f) {
  if (pos < i0) return f((pos + 1) * alpha) - f(pos * alpha);
  return (f(k * alpha) - f(i0 * alpha)) / (k - i0);
}

void validate_si_params(const Instance& inst, const TwoWeightProfile& profile,
                        const SiParams& params) {
  if (params.i0 < 0 || params.i0 > inst.k() - 1)
    throw InputError("si params: i0 must lie in [0, k-1]");
  const std::vector<int>& base =
      params.weight_class == WeightClass::kLower ? profile.lower : profile.higher;
  const std::vector<int>& other =
      params.weight_class == WeightClass::kLower ? profile.higher : profile.lower;
  auto is_perm_of = [](const std::vector<int>& perm, const std::vector<int>& items) {
    if (perm.size() != items.size()) return false;
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    return sorted == items;  // profile item lists are ascending
  };
  if (!is_perm_of(params.perm_within_class, base))
    throw InputError("si params: perm_within_class must permute the base class");
  if (!is_perm_of(params.perm_other_class, other))
    throw InputError("si params: perm_other_class must permute the other class");
}

}  // namespace

LinearCut si_cut(int count, double alpha, int k, int i0, const Permutation& perm,
                 const ConcaveFunction& f) {
  if (count < 1 || k < 1 || count < k) throw InputError("si_cut: need count >= k >= 1");
  if (!(alpha >= 0.0)) throw InputError("si_cut: alpha must be non-negative");
  if (i0 < 0 || i0 > k - 1) throw InputError("si_cut: i0 must lie in [0, k-1]");
  if (perm.size() != count) throw InputError("si_cut: permutation size mismatch");
  LinearCut cut;
  cut.family = CutFamily::kSi;
  cut.pi.assign(count, 0.0);
  for (int pos = 0; pos < count; ++pos)
    cut.pi[perm[pos]] = si_coefficient(pos, alpha, k, i0, f);
  cut.provenance.perm = perm.order();
  cut.provenance.i0 = i0;
  return cut;
}

AssumptionSides assumption_sides(const TwoWeightProfile& profile,
                                 const ConcaveFunction& f, int k, int i0) {
  AssumptionSides sides;
  sides.lhs = f(profile.a_lo + (i0 + 1) * profile.a_hi) - f(profile.a_lo + i0 * profile.a_hi);
  sides.rhs = (f(k * profile.a_hi) - f(i0 * profile.a_hi)) / (k - i0);
  return sides;
}

bool check_assumption(const TwoWeightProfile& profile, const ConcaveFunction& f,
                      int k, int i0) {
  if (i0 == k - 1) return true;
  AssumptionSides sides = assumption_sides(profile, f, k, i0);
  return sides.lhs <= sides.rhs + kTol;
}

SiLiftingContext::SiLiftingContext(const Instance& inst, const SiParams& params)
    : inst_(inst), params_(params), profile_(two_weight_profile(inst)) {
  validate_si_params(inst, profile_, params_);
  const std::vector<int>& base_perm = params_.perm_within_class;
  base_size_ = static_cast<int>(base_perm.size());
  items_ = base_perm;
  items_.insert(items_.end(), params_.perm_other_class.begin(),
                params_.perm_other_class.end());
  weights_.resize(items_.size());
  for (std::size_t pos = 0; pos < items_.size(); ++pos)
    weights_[pos] = inst.weight(items_[pos]);
  double alpha = params_.weight_class == WeightClass::kLower ? profile_.a_lo : profile_.a_hi;
  coeff_.reserve(items_.size());
  for (int pos = 0; pos < base_size_; ++pos)
    coeff_.push_back(si_coefficient(pos, alpha, inst.k(), params_.i0, inst.f()));
}

double si_support_value(const SiLiftingContext& ctx, int j, std::span<const int> X) {
  if (j < ctx.base_size() || j > ctx.fixed_count() || j >= ctx.n() + 1)
    throw InputError("si_support_value: position outside the lifted range");
  if (static_cast<int>(X.size()) > ctx.k() - 1)
    throw InputError("si_support_value: support larger than k-1");
  double sum = ctx.weight_at(j);
  double fixed = 0.0;
  for (int pos : X) {
    if (pos < 0 || pos >= j)
      throw InputError("si_support_value: support must precede the lifted position");
    sum += ctx.weight_at(pos);
    fixed += ctx.coefficient(pos);
  }
  return ctx.f(sum) - fixed;
}

double lift_oracle_si(const SiLiftingContext& ctx, int j, std::int64_t enumeration_cap) {
  if (j != ctx.fixed_count())
    throw InputError("lift_oracle_si: coefficients before j must be fixed, none after");
  const int limit = std::min(j, ctx.k() - 1);
  std::int64_t feasible = 0;
  {
    double binom = 1.0;
    for (int t = 0; t <= limit; ++t) {
      if (t > 0) binom = binom * (j - t + 1) / t;
      feasible += static_cast<std::int64_t>(binom);
      if (feasible > enumeration_cap) break;
    }
  }
  if (j >= 40 || feasible > enumeration_cap) {
    std::ostringstream msg;
    msg << "lift_oracle_si: enumeration over " << j << " positions exceeds cap "
        << enumeration_cap;
    throw CapacityError(msg.str());
  }
  double best = ctx.f(ctx.weight_at(j));
  const std::uint64_t end = 1ULL << j;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    if (std::popcount(mask) > limit) continue;
    double sum = ctx.weight_at(j);
    double fixed = 0.0;
    for (int pos = 0; pos < j; ++pos) {
      if (mask & (1ULL << pos)) {
        sum += ctx.weight_at(pos);
        fixed += ctx.coefficient(pos);
      }
    }
    best = std::min(best, ctx.f(sum) - fixed);
  }
  return best;
}

namespace {

// Shared driver for the two closed forms. The base class occupies positions
// 0..base-1 with separation-inequality coefficients; each lifted item takes
// min(previous lifted coefficient, value of the full-support candidate whose
// lifted-class part is exactly the items already lifted).
LinearCut lifted_si_cut(const Instance& inst, const SiParams& params,
                        CutFamily family) {
  SiLiftingContext ctx(inst, params);
  const int n = ctx.n();
  const int k = ctx.k();
  const int base = ctx.base_size();

  std::vector<double> coeff(n, 0.0);
  for (int pos = 0; pos < base; ++pos) coeff[pos] = ctx.coefficient(pos);

  std::vector<double> base_prefix(base + 1, 0.0);  // sum of base coefficients
  for (int pos = 0; pos < base; ++pos)
    base_prefix[pos + 1] = base_prefix[pos] + coeff[pos];

  const double a_base = ctx.weight_at(0);
  const double a_lifted = base < n ? ctx.weight_at(base) : 0.0;

  double lifted_coeff_prefix = 0.0;  // sum of lifted coefficients so far
  for (int r = 0; r + base < n; ++r) {
    const int pos = base + r;
    double value;
    if (r == 0) {
      value = ctx.f(a_lifted + (k - 1) * a_base) - base_prefix[k - 1];
    } else {
      double previous = coeff[pos - 1];
      if (r <= k - 1) {
        double candidate = ctx.f(a_lifted + r * a_lifted + (k - 1 - r) * a_base) -
                           base_prefix[k - 1 - r] - lifted_coeff_prefix;
        value = std::min(previous, candidate);
      } else {
        // A support containing the previous lifted item would need more than
        // k-1 elements, so the previous coefficient carries over.
        value = previous;
      }
    }
    coeff[pos] = value;
    lifted_coeff_prefix += value;
  }

  LinearCut cut;
  cut.family = family;
  cut.pi.assign(inst.n(), 0.0);
  for (int pos = 0; pos < n; ++pos) cut.pi[ctx.item_at(pos)] = coeff[pos];
  cut.provenance.perm = params.perm_within_class;
  cut.provenance.perm.insert(cut.provenance.perm.end(), params.perm_other_class.begin(),
                             params.perm_other_class.end());
  cut.provenance.i0 = params.i0;
  return cut;
}

}  // namespace

LinearCut lower_si_cut(const Instance& inst, const SiParams& params) {
  if (params.weight_class != WeightClass::kLower)
    throw InputError("lower_si_cut: params must target the lower class");
  TwoWeightProfile profile = two_weight_profile(inst);
  if (static_cast<int>(profile.lower.size()) < inst.k()) {
    std::ostringstream msg;
    msg << "lower_si_cut: needs at least k = " << inst.k() << " lower-weighted items, have "
        << profile.lower.size();
    throw StructureError(msg.str());
  }
  return lifted_si_cut(inst, params, CutFamily::kLowerSi);
}

LinearCut higher_si_cut(const Instance& inst, const SiParams& params) {
  if (params.weight_class != WeightClass::kHigher)
    throw InputError("higher_si_cut: params must target the higher class");
  TwoWeightProfile profile = two_weight_profile(inst);
  if (static_cast<int>(profile.higher.size()) <= inst.k()) {
    std::ostringstream msg;
    msg << "higher_si_cut: needs more than k = " << inst.k() << " higher-weighted items, have "
        << profile.higher.size();
    throw StructureError(msg.str());
  }
  if (!check_assumption(profile, inst.f(), inst.k(), params.i0)) {
    AssumptionSides sides = assumption_sides(profile, inst.f(), inst.k(), params.i0);
    std::ostringstream msg;
    msg << "higher_si_cut: weight/curvature condition fails for i0 = " << params.i0
        << " (" << sides.lhs << " > " << sides.rhs << "); i0 = k-1 always satisfies it";
    throw AssumptionError(msg.str());
  }
  return lifted_si_cut(inst, params, CutFamily::kHigherSi);
}

std::vector<int> order_by_descending_value(std::span<const double> x,
                                           std::span<const int> items) {
  std::vector<int> order(items.begin(), items.end());
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (x[a] != x[b]) return x[a] > x[b];
    return a < b;
  });
  return order;
}

int best_i0(const Instance& inst, std::span<const double> x) {
  TwoWeightProfile profile = two_weight_profile(inst);
  if (static_cast<int>(profile.lower.size()) < inst.k())
    throw StructureError("best_i0: lower class smaller than k");
  if (static_cast<int>(x.size()) != inst.n())
    throw InputError("best_i0: point dimension mismatch");
  SiParams params;
  params.weight_class = WeightClass::kLower;
  params.perm_within_class = order_by_descending_value(x, profile.lower);
  params.perm_other_class = order_by_descending_value(x, profile.higher);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i0 = 0; i0 < inst.k(); ++i0) {
    params.i0 = i0;
    LinearCut cut = lower_si_cut(inst, params);
    double value = 0.0;
    for (int i = 0; i < inst.n(); ++i) value += cut.pi[i] * x[i];
    if (value > best_value + kTol) {
      best_value = value;
      best = i0;
    }
  }
  return best;
}

}  // namespace ccsm
