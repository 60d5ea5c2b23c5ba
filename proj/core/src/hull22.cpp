#include "ccsm/hull22.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccsm/errors.hpp"
#include "ccsm/lift_si.hpp"
#include "ccsm/rng.hpp"

namespace ccsm {

namespace {

void require_k2(const Instance& inst, const char* who) {
  if (inst.k() != 2) {
    std::ostringstream msg;
    msg << who << ": only defined for cardinality bound 2, instance has k = " << inst.k();
    throw ScopeError(msg.str());
  }
}

void require_i0_assumption(const Instance& inst, const TwoWeightProfile& profile,
                           const char* who) {
  if (!check_assumption(profile, inst.f(), inst.k(), 0)) {
    std::ostringstream msg;
    msg << who << ": the i0 = 0 weight/curvature condition fails, pattern not exact";
    throw AssumptionError(msg.str());
  }
}

void validate_point(const Instance& inst, std::span<const double> x, double card_bound,
                    const char* who) {
  if (static_cast<int>(x.size()) != inst.n())
    throw InputError(std::string(who) + ": point dimension mismatch");
  double sum = 0.0;
  for (double v : x) {
    if (v < -kTol || v > 1.0 + kTol)
      throw InputError(std::string(who) + ": point leaves the unit box");
    sum += v;
  }
  if (sum > card_bound + kTol)
    throw InputError(std::string(who) + ": point violates the cardinality bound");
}

}  // namespace

std::vector<std::vector<int>> subsets_up_to(int n, int k, std::int64_t cap) {
  if (k < 0 || n < 0) throw InputError("subsets_up_to: negative arguments");
  std::int64_t count = 1;
  double binom = 1.0;
  for (int size = 1; size <= std::min(n, k); ++size) {
    binom = binom * (n - size + 1) / size;
    count += static_cast<std::int64_t>(binom);
    if (count > cap) {
      std::ostringstream msg;
      msg << "subsets_up_to: " << count << "+ subsets exceed cap " << cap;
      throw CapacityError(msg.str());
    }
  }
  std::vector<std::vector<int>> subsets;
  subsets.reserve(static_cast<std::size_t>(count));
  subsets.push_back({});
  std::vector<int> current;
  for (int size = 1; size <= std::min(n, k); ++size) {
    current.assign(size, 0);
    for (int i = 0; i < size; ++i) current[i] = i;
    while (true) {
      subsets.push_back(current);
      int i = size - 1;
      while (i >= 0 && current[i] == n - size + i) --i;
      if (i < 0) break;
      ++current[i];
      for (int j = i + 1; j < size; ++j) current[j] = current[j - 1] + 1;
    }
  }
  return subsets;
}

LinearCut super_average_cut(const Instance& inst) {
  require_k2(inst, "super_average_cut");
  TwoWeightProfile profile = two_weight_profile(inst);
  double lo_coeff = inst.f()(2 * profile.a_lo) / 2;
  double hi_coeff = inst.f()(2 * profile.a_hi) / 2;
  LinearCut cut;
  cut.family = CutFamily::kSuperAverage;
  cut.pi.assign(inst.n(), 0.0);
  for (int i : profile.lower) cut.pi[i] = lo_coeff;
  for (int i : profile.higher) cut.pi[i] = hi_coeff;
  return cut;
}

LinearCut p22_cut(const Instance& inst, P22Family family, int distinguished) {
  require_k2(inst, "p22_cut");
  TwoWeightProfile profile = two_weight_profile(inst);
  require_i0_assumption(inst, profile, "p22_cut");
  const double lo = profile.a_lo;
  const double hi = profile.a_hi;
  const auto& f = inst.f();

  bool wants_lower_item =
      family == P22Family::kEpiLower || family == P22Family::kHigherAvg;
  bool in_lower = profile.is_lower(distinguished);
  if (distinguished < 0 || distinguished >= inst.n() || in_lower != wants_lower_item)
    throw InputError("p22_cut: distinguished item not in the required weight class");

  if (family == P22Family::kLowerAvg && profile.lower.size() < 2)
    throw ScopeError("p22_cut: lower-average pattern needs at least two lower items");
  if (family == P22Family::kHigherAvg && profile.higher.size() < 2)
    throw ScopeError("p22_cut: higher-average pattern needs at least two higher items");

  LinearCut cut;
  cut.pi.assign(inst.n(), 0.0);
  switch (family) {
    case P22Family::kEpiLower:
      cut.family = CutFamily::kLiftedEpi;
      for (int i : profile.lower) cut.pi[i] = f(2 * lo) - f(lo);
      for (int i : profile.higher) cut.pi[i] = f(lo + hi) - f(lo);
      cut.pi[distinguished] = f(lo);
      break;
    case P22Family::kEpiHigher:
      cut.family = CutFamily::kLiftedEpi;
      for (int i : profile.lower) cut.pi[i] = f(lo + hi) - f(hi);
      for (int i : profile.higher) cut.pi[i] = f(2 * hi) - f(hi);
      cut.pi[distinguished] = f(hi);
      break;
    case P22Family::kLowerAvg:
      cut.family = CutFamily::kLowerSi;
      cut.provenance.i0 = 0;
      for (int i : profile.lower) cut.pi[i] = f(2 * lo) / 2;
      for (int i : profile.higher) cut.pi[i] = f(2 * hi) - f(lo + hi) + f(2 * lo) / 2;
      cut.pi[distinguished] = f(lo + hi) - f(2 * lo) / 2;
      break;
    case P22Family::kHigherAvg:
      cut.family = CutFamily::kHigherSi;
      cut.provenance.i0 = 0;
      for (int i : profile.higher) cut.pi[i] = f(2 * hi) / 2;
      for (int i : profile.lower) cut.pi[i] = f(2 * lo) - f(lo + hi) + f(2 * hi) / 2;
      cut.pi[distinguished] = f(lo + hi) - f(2 * hi) / 2;
      break;
  }
  cut.provenance.base_set = {distinguished};
  return cut;
}

Category classify(const Instance& inst, std::span<const double> x) {
  require_k2(inst, "classify");
  validate_point(inst, x, 2.0, "classify");
  TwoWeightProfile profile = two_weight_profile(inst);

  auto argmax_over = [&](const std::vector<int>& items) {
    int best = items.front();
    for (int i : items)
      if (x[i] > x[best]) best = i;  // ties keep the lowest index
    return best;
  };
  const int l = argmax_over(profile.lower);
  const int h = argmax_over(profile.higher);

  double sum_all = 0.0;
  for (double v : x) sum_all += v;
  double sum_lower = 0.0;
  for (int i : profile.lower) sum_lower += x[i];
  double sum_higher = sum_all - sum_lower;

  Category category{CategoryTag::kC1, l, h};
  if (2 * x[l] > sum_all + kTol) {
    category.tag = CategoryTag::kC1;
  } else if (2 * x[h] > sum_all + kTol) {
    category.tag = CategoryTag::kC2;
  } else if (2 * x[l] < sum_lower - kTol && 2 * x[h] < sum_higher - kTol) {
    category.tag = CategoryTag::kC3;
  } else if (sum_lower <= 2 * x[l] + kTol && 2 * x[l] <= sum_all + kTol &&
             2 * x[h] <= sum_all + kTol &&
             2 * x[h] - sum_higher <= 2 * x[l] - sum_lower + kTol) {
    category.tag = CategoryTag::kC4;
  } else if (sum_higher <= 2 * x[h] + kTol && 2 * x[h] <= sum_all + kTol &&
             2 * x[l] <= sum_all + kTol &&
             2 * x[l] - sum_lower <= 2 * x[h] - sum_higher + kTol) {
    category.tag = CategoryTag::kC5;
  } else {
    throw std::logic_error("classify: point escaped the five-way partition");
  }
  return category;
}

std::optional<LinearCut> most_violated_cut(const Instance& inst, double w,
                                           std::span<const double> x) {
  Category category = classify(inst, x);
  LinearCut cut;
  switch (category.tag) {
    case CategoryTag::kC1:
      cut = p22_cut(inst, P22Family::kEpiLower, category.argmax_lower);
      break;
    case CategoryTag::kC2:
      cut = p22_cut(inst, P22Family::kEpiHigher, category.argmax_higher);
      break;
    case CategoryTag::kC3:
      cut = super_average_cut(inst);
      break;
    case CategoryTag::kC4:
      cut = p22_cut(inst, P22Family::kHigherAvg, category.argmax_lower);
      break;
    case CategoryTag::kC5:
      cut = p22_cut(inst, P22Family::kLowerAvg, category.argmax_higher);
      break;
  }
  if (cut.violation(w, x) <= kHullTol) return std::nullopt;
  return cut;
}

std::vector<LinearCut> p22_system(const Instance& inst, bool include_super_average) {
  require_k2(inst, "p22_system");
  TwoWeightProfile profile = two_weight_profile(inst);
  std::vector<LinearCut> cuts;
  for (int l : profile.lower) cuts.push_back(p22_cut(inst, P22Family::kEpiLower, l));
  for (int h : profile.higher) cuts.push_back(p22_cut(inst, P22Family::kEpiHigher, h));
  if (profile.lower.size() >= 2)
    for (int h : profile.higher) cuts.push_back(p22_cut(inst, P22Family::kLowerAvg, h));
  if (profile.higher.size() >= 2)
    for (int l : profile.lower) cuts.push_back(p22_cut(inst, P22Family::kHigherAvg, l));
  if (include_super_average) cuts.push_back(super_average_cut(inst));
  return cuts;
}

namespace {

bool ray_matches_cut(const PolarRay& ray, const LinearCut& cut) {
  // Compare max-abs-normalized coefficient vectors (pi0, pi...).
  auto normalized = [](double pi0, std::span<const double> pi) {
    std::vector<double> v;
    v.reserve(pi.size() + 1);
    v.push_back(pi0);
    for (double c : pi) v.push_back(c);
    double scale = 0.0;
    for (double c : v) scale = std::max(scale, std::abs(c));
    if (scale > 0.0)
      for (double& c : v) c /= scale;
    return v;
  };
  std::vector<double> a = normalized(ray.pi0, ray.pi);
  std::vector<double> b = normalized(cut.pi0, cut.pi);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > kHullTol) return false;
  return true;
}

}  // namespace

std::string classify_polar_ray(const Instance& inst, int k, const PolarRay& ray) {
  // Every proposed family has a zero constant term.
  double scale = std::abs(ray.pi0);
  for (double v : ray.pi) scale = std::max(scale, std::abs(v));
  if (std::abs(ray.pi0) > kHullTol * std::max(1.0, scale)) return "unknown";
  TwoWeightProfile profile = two_weight_profile(inst);
  if (k == 2 && inst.k() == 2 && check_assumption(profile, inst.f(), 2, 0)) {
    for (const LinearCut& cut : p22_system(inst))
      if (ray_matches_cut(ray, cut)) return cut_family_name(cut.family);
    return "unknown";
  }
  // General k: rebuild candidates along the ray's own coefficient order.
  std::vector<int> all(inst.n());
  for (int i = 0; i < inst.n(); ++i) all[i] = i;
  Permutation desc{order_by_descending_value(ray.pi, all)};
  Instance at_k(inst.weights(), k, inst.f());
  if (ray_matches_cut(ray, lifted_epi_cut(at_k, desc))) return "lifted-epi";
  SiParams params;
  params.perm_within_class = order_by_descending_value(ray.pi, profile.lower);
  params.perm_other_class = order_by_descending_value(ray.pi, profile.higher);
  params.weight_class = WeightClass::kLower;
  for (int i0 = 0; i0 < k; ++i0) {
    params.i0 = i0;
    if (static_cast<int>(profile.lower.size()) >= k &&
        ray_matches_cut(ray, lower_si_cut(at_k, params)))
      return "lower-si";
  }
  std::swap(params.perm_within_class, params.perm_other_class);
  params.weight_class = WeightClass::kHigher;
  for (int i0 = 0; i0 < k; ++i0) {
    params.i0 = i0;
    if (static_cast<int>(profile.higher.size()) > k &&
        check_assumption(profile, inst.f(), k, i0) &&
        ray_matches_cut(ray, higher_si_cut(at_k, params)))
      return "higher-si";
  }
  return "unknown";
}

PolarRay separation_lp(const Instance& inst, std::span<const double> x, int k,
                       std::int64_t subset_cap) {
  if (k < 1 || k > inst.n()) throw InputError("separation_lp: k out of range");
  validate_point(inst, x, k, "separation_lp");
  auto subsets = subsets_up_to(inst.n(), k, subset_cap);

  const int n = inst.n();
  LpProblem lp;
  lp.sense = LpSense::kMaximize;
  lp.objective.assign(n + 1, 0.0);
  lp.lower.assign(n + 1, -kLpInfinity);
  lp.upper.assign(n + 1, kLpInfinity);
  lp.objective[0] = 1.0;  // pi0
  for (int i = 0; i < n; ++i) lp.objective[1 + i] = x[i];
  for (const auto& subset : subsets) {
    std::vector<double> row(n + 1, 0.0);
    row[0] = 1.0;
    for (int i : subset) row[1 + i] = 1.0;
    lp.add_row(std::move(row), LpRelation::kLessEqual,
               inst.f()(inst.weight_sum(subset)));
  }

  SimplexSolver solver;
  LpSolution solution = solver.solve(lp);
  if (solution.status != LpStatus::kOptimal)
    throw std::logic_error("separation_lp: expected an optimal vertex");
  PolarRay ray;
  ray.pi_w = 1.0;
  ray.pi0 = solution.primal[0];
  ray.pi.assign(solution.primal.begin() + 1, solution.primal.end());
  return ray;
}

bool hull_membership(const Instance& inst, double w, std::span<const double> x,
                     int k, std::int64_t subset_cap) {
  if (k < 1 || k > inst.n()) throw InputError("hull_membership: k out of range");
  validate_point(inst, x, k, "hull_membership");
  auto subsets = subsets_up_to(inst.n(), k, subset_cap);

  // One variable per subset: the weight the point places on that integer
  // feasible point. Rows: total mass one, then one coverage row per item.
  const int n = inst.n();
  LpProblem lp;
  lp.sense = LpSense::kMinimize;
  const int num_subsets = static_cast<int>(subsets.size());
  lp.objective.resize(num_subsets);
  lp.lower.assign(num_subsets, 0.0);
  lp.upper.assign(num_subsets, kLpInfinity);
  for (int s = 0; s < num_subsets; ++s)
    lp.objective[s] = inst.f()(inst.weight_sum(subsets[s]));
  {
    std::vector<double> row(num_subsets, 1.0);
    lp.add_row(std::move(row), LpRelation::kEqual, 1.0);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(num_subsets, 0.0);
    for (int s = 0; s < num_subsets; ++s)
      for (int item : subsets[s])
        if (item == i) row[s] = 1.0;
    lp.add_row(std::move(row), LpRelation::kEqual, x[i]);
  }

  SimplexSolver solver;
  LpSolution solution = solver.solve(lp);
  if (solution.status != LpStatus::kOptimal)
    throw std::logic_error("hull_membership: combination LP should be feasible and bounded");
  return w >= solution.objective - kHullTol;
}

int tight_point_affine_dimension(const Instance& inst, int k, double pi0,
                                 std::span<const double> pi, double tol) {
  auto subsets = subsets_up_to(inst.n(), k);
  const int n = inst.n();
  std::vector<std::vector<double>> tight;
  for (const auto& subset : subsets) {
    double lhs = pi0;
    for (int i : subset) lhs += pi[i];
    double value = inst.f()(inst.weight_sum(subset));
    if (std::abs(lhs - value) <= tol * std::max(1.0, std::abs(value))) {
      std::vector<double> point(n, 0.0);
      for (int i : subset) point[i] = 1.0;
      tight.push_back(std::move(point));
    }
  }
  if (tight.empty()) return -1;
  // Rank of differences against the first tight point.
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 1; t < tight.size(); ++t) {
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) diff[i] = tight[t][i] - tight[0][i];
    rows.push_back(std::move(diff));
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    double best = 1e-8;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (std::abs(rows[r][col]) > best) {
        best = std::abs(rows[r][col]);
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank) continue;
      double factor = rows[r][col] / rows[rank][col];
      if (factor == 0.0) continue;
      for (int j = col; j < n; ++j) rows[r][j] -= factor * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

namespace {

void normalize_ray(PolarRay& ray) {
  double scale = std::abs(ray.pi0);
  for (double v : ray.pi) scale = std::max(scale, std::abs(v));
  if (scale <= 0.0) return;
  ray.pi0 /= scale;
  for (double& v : ray.pi) v /= scale;
}

bool same_ray(const PolarRay& a, const PolarRay& b) {
  if (std::abs(a.pi0 - b.pi0) > kHullTol) return false;
  for (std::size_t i = 0; i < a.pi.size(); ++i)
    if (std::abs(a.pi[i] - b.pi[i]) > kHullTol) return false;
  return true;
}

}  // namespace

std::vector<PolarRay> enumerate_polar_facets(const Instance& inst, int k,
                                             int point_budget,
                                             std::int64_t subset_cap) {
  if (k < 1 || k > inst.n()) throw InputError("enumerate_polar_facets: k out of range");
  auto subsets = subsets_up_to(inst.n(), k, subset_cap);
  const int n = inst.n();

  std::vector<std::vector<double>> probes;
  // Integer feasible points pulled toward a common interior point, so each
  // probe sits inside the cardinality polytope but close to one vertex.
  const double theta = 0.1;
  const double center = 0.5 * std::min(1.0, static_cast<double>(k) / n);
  for (const auto& subset : subsets) {
    std::vector<double> probe(n, theta * center);
    for (int i : subset) probe[i] = (1.0 - theta) + theta * center;
    probes.push_back(std::move(probe));
  }
  // Random interior points. Convex mixtures of integer feasible points
  // target the normal cones of their common tight facets; a full-dimensional
  // cone needs n+1-ish mixture components before probes can reach its
  // interior, so the component count runs up to n+2. Box-uniform points
  // rescaled into the cardinality polytope round out the coverage.
  SplitMix64 rng(kPolarProbeSeed);
  for (int trial = 0; trial < point_budget; ++trial) {
    std::vector<double> probe(n, 0.0);
    if (trial % 2 == 0) {
      int parts = rng.uniform_int(2, std::min<int>(n + 2, static_cast<int>(subsets.size())));
      std::vector<double> weight(parts);
      double total = 0.0;
      for (double& v : weight) {
        v = -std::log(std::max(rng.next_double(), 1e-12));
        total += v;
      }
      for (int p = 0; p < parts; ++p) {
        const auto& subset =
            subsets[rng.uniform_int(0, static_cast<int>(subsets.size()) - 1)];
        for (int i : subset) probe[i] += weight[p] / total;
      }
    } else {
      double sum = 0.0;
      for (double& v : probe) {
        v = rng.next_double();
        sum += v;
      }
      double target = rng.uniform(0.0, static_cast<double>(k));
      if (sum > target && sum > 0.0)
        for (double& v : probe) v *= target / sum;
    }
    probes.push_back(std::move(probe));
  }

  std::vector<PolarRay> facets;
  for (const auto& probe : probes) {
    PolarRay candidate = separation_lp(inst, probe, k, subset_cap);
    if (tight_point_affine_dimension(inst, k, candidate.pi0, candidate.pi) != n)
      continue;
    normalize_ray(candidate);
    bool duplicate = false;
    for (const PolarRay& kept : facets)
      if (same_ray(kept, candidate)) {
        duplicate = true;
        break;
      }
    if (!duplicate) facets.push_back(std::move(candidate));
  }
  return facets;
}

}  // namespace ccsm
