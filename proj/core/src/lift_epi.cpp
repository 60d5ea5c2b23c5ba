#include "ccsm/lift_epi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "ccsm/errors.hpp"

namespace ccsm {

namespace {

// Number of subsets of a ground set of size m with at most c elements,
// saturating at `cap + 1`.
std::int64_t bounded_subset_count(int m, int c, std::int64_t cap) {
  std::int64_t total = 0;
  double binom = 1.0;
  for (int t = 0; t <= std::min(m, c); ++t) {
    if (t > 0) binom = binom * (m - t + 1) / t;
    total += static_cast<std::int64_t>(binom);
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace

LinearCut epi_cut(const Instance& inst, const Permutation& perm) {
  if (perm.size() != inst.n()) throw InputError("epi_cut: permutation size mismatch");
  LinearCut cut;
  cut.family = CutFamily::kEpi;
  cut.pi.assign(inst.n(), 0.0);
  double prefix = 0.0;
  double previous = inst.f()(0.0);
  for (int pos = 0; pos < inst.n(); ++pos) {
    prefix += inst.weight(perm[pos]);
    double current = inst.f()(prefix);
    cut.pi[perm[pos]] = current - previous;
    previous = current;
  }
  cut.provenance.perm = perm.order();
  cut.provenance.base_set.assign(perm.order().begin(), perm.order().begin() + inst.k());
  return cut;
}

LiftingContext::LiftingContext(const Instance& inst, const Permutation& perm)
    : inst_(inst), perm_(perm) {
  if (perm.size() != inst.n())
    throw InputError("lifting context: permutation size mismatch");
  weights_.resize(inst.n());
  for (int pos = 0; pos < inst.n(); ++pos) weights_[pos] = inst.weight(perm[pos]);
  zeta_.reserve(inst.n());
}

double zeta_support_value(const LiftingContext& ctx, int j, std::span<const int> X) {
  if (j < 0 || j > ctx.fixed_count() || j >= ctx.n() + 1)
    throw InputError("zeta_support_value: position outside the lifted prefix");
  if (static_cast<int>(X.size()) > ctx.k() - 1)
    throw InputError("zeta_support_value: support larger than k-1");
  double sum = ctx.weight_at(j);
  double fixed = 0.0;
  for (int pos : X) {
    if (pos < 0 || pos >= j)
      throw InputError("zeta_support_value: support must precede the lifted position");
    sum += ctx.weight_at(pos);
    fixed += ctx.coefficient(pos);
  }
  return ctx.f(sum) - fixed;
}

OracleResult lift_oracle_epi_full(const LiftingContext& ctx, int j,
                                  std::int64_t enumeration_cap) {
  if (j != ctx.fixed_count())
    throw InputError("lift_oracle_epi: coefficients before j must be fixed, none after");
  const int limit = std::min(j, ctx.k() - 1);
  if (j >= 40 || bounded_subset_count(j, limit, enumeration_cap) > enumeration_cap) {
    std::ostringstream msg;
    msg << "lift_oracle_epi: enumeration over " << j
        << " positions exceeds cap " << enumeration_cap;
    throw CapacityError(msg.str());
  }

  OracleResult result;
  result.value = ctx.f(ctx.weight_at(j));  // empty support
  result.argmin_masks = {0};
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
    double value = ctx.f(sum) - fixed;
    if (value < result.value - kTol) {
      result.value = value;
      result.argmin_masks.assign(1, mask);
    } else if (value <= result.value + kTol) {
      result.argmin_masks.push_back(mask);
      if (value < result.value) result.value = value;
    }
  }
  return result;
}

double lift_oracle_epi(const LiftingContext& ctx, int j, std::int64_t enumeration_cap) {
  return lift_oracle_epi_full(ctx, j, enumeration_cap).value;
}

LinearCut lifted_epi_cut(const Instance& inst, const Permutation& perm) {
  const TwoWeightProfile profile = two_weight_profile(inst);
  const int n = inst.n();
  const int k = inst.k();
  if (perm.size() != n) throw InputError("lifted_epi_cut: permutation size mismatch");

  // Work in permuted positions: the permutation becomes the natural order and
  // the base inequality telescopes over positions 0..k-1.
  std::vector<double> w(n);
  std::vector<char> lower(n);
  for (int pos = 0; pos < n; ++pos) {
    w[pos] = inst.weight(perm[pos]);
    lower[pos] = profile.is_lower(perm[pos]) ? 1 : 0;
  }

  std::vector<int> lowers_in_base;   // lower positions < k-1, in order
  std::vector<int> highers_in_base;  // higher positions < k-1, in order
  std::vector<int> lifted_highers;   // higher positions >= k-1, in order
  for (int pos = 0; pos < k - 1; ++pos)
    (lower[pos] ? lowers_in_base : highers_in_base).push_back(pos);
  for (int pos = k - 1; pos < n; ++pos)
    if (!lower[pos]) lifted_highers.push_back(pos);
  const int d_lo = static_cast<int>(lowers_in_base.size());

  std::vector<double> zeta(n, 0.0);
  double base_sum = 0.0;       // total weight of positions 0..k-2
  double base_coeff_sum = 0.0;

  {  // Base coefficients: telescoped marginals along the prefix.
    double prefix = 0.0;
    double previous = inst.f()(0.0);
    for (int pos = 0; pos < k; ++pos) {
      prefix += w[pos];
      double current = inst.f()(prefix);
      zeta[pos] = current - previous;
      previous = current;
      if (pos < k - 1) {
        base_sum += w[pos];
        base_coeff_sum += zeta[pos];
      }
    }
  }

  auto support_value = [&](int pos, std::span<const int> support) {
    double sum = w[pos];
    double fixed = 0.0;
    for (int q : support) {
      sum += w[q];
      fixed += zeta[q];
    }
    return inst.f()(sum) - fixed;
  };
  auto value_on_base = [&](int pos) {
    return inst.f()(w[pos] + base_sum) - base_coeff_sum;
  };

  int higher_rank = 0;  // how many lifted higher positions are already done
  for (int pos = k - 1; pos < n; ++pos) {
    if (lower[pos]) {
      if (pos >= k) zeta[pos] = value_on_base(pos);
      // pos == k-1 belongs to the base prefix and keeps its telescoped value.
      continue;
    }
    // pos is the (higher_rank+1)-th higher item at or past position k-1.
    const int i = higher_rank + 1;
    double prev = i == 1 ? value_on_base(pos) : zeta[lifted_highers[i - 2]];
    std::vector<int> support = highers_in_base;
    for (int q = 0; q < std::min(i - 1, d_lo); ++q) support.push_back(lifted_highers[q]);
    for (int q = 0; q < d_lo - i + 1; ++q) support.push_back(lowers_in_base[q]);
    double fresh = support_value(pos, support);
    if (pos < k) {
      // Base position: both candidates reduce to the telescoped value, which
      // zeta already holds.
      higher_rank = i;
      continue;
    }
    zeta[pos] = std::min(prev, fresh);
    higher_rank = i;
  }

  LinearCut cut;
  cut.family = CutFamily::kLiftedEpi;
  cut.pi.assign(n, 0.0);
  for (int pos = 0; pos < n; ++pos) cut.pi[perm[pos]] = zeta[pos];
  cut.provenance.perm = perm.order();
  cut.provenance.base_set.assign(perm.order().begin(), perm.order().begin() + k);
  return cut;
}

LinearCut ali_cut(const Instance& inst, const Permutation& perm) {
  const TwoWeightProfile profile = two_weight_profile(inst);
  const int n = inst.n();
  const int k = inst.k();
  if (perm.size() != n) throw InputError("ali_cut: permutation size mismatch");

  std::vector<double> w(n);
  std::vector<char> lower(n);
  for (int pos = 0; pos < n; ++pos) {
    w[pos] = inst.weight(perm[pos]);
    lower[pos] = profile.is_lower(perm[pos]) ? 1 : 0;
  }

  std::vector<double> phi(n, 0.0);
  {
    double prefix = 0.0;
    double previous = inst.f()(0.0);
    for (int pos = 0; pos < k; ++pos) {
      prefix += w[pos];
      double current = inst.f()(prefix);
      phi[pos] = current - previous;
      previous = current;
    }
  }

  for (int pos = k; pos < n; ++pos) {
    // T: k-1 predecessors with as many higher-weighted items as possible,
    // earliest positions first within each weight class.
    int wanted = k - 1;
    double t_sum = 0.0;
    int taken = 0;
    for (int q = 0; q < pos && taken < wanted; ++q)
      if (!lower[q]) {
        t_sum += w[q];
        ++taken;
      }
    for (int q = 0; q < pos && taken < wanted; ++q)
      if (lower[q]) {
        t_sum += w[q];
        ++taken;
      }
    phi[pos] = inst.f()(w[pos] + t_sum) - inst.f()(t_sum);
  }

  LinearCut cut;
  cut.family = CutFamily::kAli;
  cut.pi.assign(n, 0.0);
  for (int pos = 0; pos < n; ++pos) cut.pi[perm[pos]] = phi[pos];
  cut.provenance.perm = perm.order();
  cut.provenance.base_set.assign(perm.order().begin(), perm.order().begin() + k);
  return cut;
}

}  // namespace ccsm
