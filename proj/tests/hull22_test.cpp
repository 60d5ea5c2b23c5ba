#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ccsm/errors.hpp"
#include "ccsm/hull22.hpp"
#include "ccsm/lift_epi.hpp"
#include "ccsm/lift_si.hpp"
#include "ccsm/rng.hpp"
#include "support/brute.hpp"
#include "support/corpus.hpp"

using namespace ccsm;
using namespace ccsm::testing;

namespace {

// Seeded instance with k = 2 and the i0 = 0 condition satisfied: close
// weights keep the condition comfortably true for the square root.
Instance hull_instance(int lower_count, int higher_count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double a_lo = rng.uniform(1.0, 4.0);
  double a_hi = a_lo * rng.uniform(1.3, 2.5);
  int n = lower_count + higher_count;
  std::vector<int> items(n);
  for (int i = 0; i < n; ++i) items[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(items[i], items[rng.uniform_int(0, i)]);
  std::vector<double> weights(n, a_hi);
  for (int j = 0; j < lower_count; ++j) weights[items[j]] = a_lo;
  Instance inst(weights, 2, ConcaveFunction::sqrt_scaled(1.0));
  REQUIRE(check_assumption(two_weight_profile(inst), inst.f(), 2, 0));
  return inst;
}

std::vector<double> random_point(SplitMix64& rng, int n, double cap) {
  std::vector<double> x(n);
  double sum = 0.0;
  for (double& v : x) {
    v = rng.next_double();
    sum += v;
  }
  double target = rng.uniform(0.0, cap);
  if (sum > target && sum > 0.0)
    for (double& v : x) v *= target / sum;
  return x;
}

double system_value(const std::vector<LinearCut>& system, std::span<const double> x) {
  double best = 0.0;  // the empty-support point makes w >= 0 implicit
  for (const LinearCut& cut : system) {
    double lhs = cut.pi0;
    for (std::size_t i = 0; i < x.size(); ++i) lhs += cut.pi[i] * x[i];
    best = std::max(best, lhs);
  }
  return best;
}

}  // namespace

TEST_CASE("super-average coefficients and validity") {
  Instance inst({4, 4, 4, 100, 100, 100, 100}, 2, ConcaveFunction::sqrt_scaled(1.0));
  LinearCut cut = super_average_cut(inst);
  CHECK(cut.pi[0] == doctest::Approx(std::sqrt(8.0) / 2));
  CHECK(cut.pi[3] == doctest::Approx(std::sqrt(200.0) / 2));
  CHECK(max_violation_at_integer_points(inst, cut) <= 1e-9);

  // No weight/curvature condition needed: a violating instance still admits it.
  Instance violating({2, 2, 5, 5, 5, 5, 5}, 2, ConcaveFunction::capped_quadratic(8.0));
  CHECK_FALSE(check_assumption(two_weight_profile(violating), violating.f(), 2, 0));
  CHECK(max_violation_at_integer_points(violating, super_average_cut(violating)) <= 1e-9);

  Instance k3({1, 1, 5, 5, 5}, 3, ConcaveFunction::sqrt_scaled(1.0));
  CHECK_THROWS_AS((void)super_average_cut(k3), ScopeError);
}

TEST_CASE("explicit k=2 patterns match the general-k generators") {
  Instance inst = hull_instance(3, 4, 42);
  TwoWeightProfile profile = two_weight_profile(inst);

  {  // distinguished-lower pattern == exact lifting from that item
    int l = profile.lower[1];
    LinearCut pattern = p22_cut(inst, P22Family::kEpiLower, l);
    std::vector<int> order = {l};
    for (int i = 0; i < inst.n(); ++i)
      if (i != l) order.push_back(i);
    LinearCut general = lifted_epi_cut(inst, Permutation(order));
    for (int i = 0; i < inst.n(); ++i)
      CHECK(pattern.pi[i] == doctest::Approx(general.pi[i]).epsilon(1e-12));
  }
  {  // distinguished-higher pattern
    int h = profile.higher[2];
    LinearCut pattern = p22_cut(inst, P22Family::kEpiHigher, h);
    std::vector<int> order = {h};
    for (int i = 0; i < inst.n(); ++i)
      if (i != h) order.push_back(i);
    LinearCut general = lifted_epi_cut(inst, Permutation(order));
    for (int i = 0; i < inst.n(); ++i)
      CHECK(pattern.pi[i] == doctest::Approx(general.pi[i]).epsilon(1e-12));
  }
  {  // lower-average == general lower lifting at i0 = 0, distinguished first
    int h = profile.higher[1];
    LinearCut pattern = p22_cut(inst, P22Family::kLowerAvg, h);
    SiParams params;
    params.weight_class = WeightClass::kLower;
    params.i0 = 0;
    params.perm_within_class = profile.lower;
    params.perm_other_class = {h};
    for (int i : profile.higher)
      if (i != h) params.perm_other_class.push_back(i);
    LinearCut general = lower_si_cut(inst, params);
    for (int i = 0; i < inst.n(); ++i)
      CHECK(pattern.pi[i] == doctest::Approx(general.pi[i]).epsilon(1e-12));
  }
  {  // higher-average == general higher lifting at i0 = 0
    int l = profile.lower[0];
    LinearCut pattern = p22_cut(inst, P22Family::kHigherAvg, l);
    SiParams params;
    params.weight_class = WeightClass::kHigher;
    params.i0 = 0;
    params.perm_within_class = profile.higher;
    params.perm_other_class = {l};
    for (int i : profile.lower)
      if (i != l) params.perm_other_class.push_back(i);
    LinearCut general = higher_si_cut(inst, params);
    for (int i = 0; i < inst.n(); ++i)
      CHECK(pattern.pi[i] == doctest::Approx(general.pi[i]).epsilon(1e-12));
  }
  // The i0 = 1 lifted forms coincide with the distinguished patterns.
  {
    SiParams params;
    params.weight_class = WeightClass::kLower;
    params.i0 = 1;
    params.perm_within_class = profile.lower;
    params.perm_other_class = profile.higher;
    LinearCut si = lower_si_cut(inst, params);
    LinearCut pattern = p22_cut(inst, P22Family::kEpiLower, profile.lower[0]);
    for (int i = 0; i < inst.n(); ++i)
      CHECK(si.pi[i] == doctest::Approx(pattern.pi[i]).epsilon(1e-12));
  }
  {
    SiParams params;
    params.weight_class = WeightClass::kHigher;
    params.i0 = 1;
    params.perm_within_class = profile.higher;
    params.perm_other_class = profile.lower;
    LinearCut si = higher_si_cut(inst, params);
    LinearCut pattern = p22_cut(inst, P22Family::kEpiHigher, profile.higher[0]);
    for (int i = 0; i < inst.n(); ++i)
      CHECK(si.pi[i] == doctest::Approx(pattern.pi[i]).epsilon(1e-12));
  }
}

TEST_CASE("pattern preconditions") {
  Instance inst = hull_instance(1, 1, 9);  // one item in each class
  TwoWeightProfile profile = two_weight_profile(inst);
  CHECK_THROWS_AS((void)p22_cut(inst, P22Family::kHigherAvg, profile.lower[0]), ScopeError);
  CHECK_THROWS_AS((void)p22_cut(inst, P22Family::kLowerAvg, profile.higher[0]), ScopeError);
  CHECK_THROWS_AS((void)p22_cut(inst, P22Family::kEpiLower, profile.higher[0]), InputError);

  Instance k3({1, 1, 5, 5, 5}, 3, ConcaveFunction::sqrt_scaled(1.0));
  CHECK_THROWS_AS((void)p22_cut(k3, P22Family::kEpiLower, 0), ScopeError);

  Instance violating({2, 2, 5, 5, 5, 5, 5}, 2, ConcaveFunction::capped_quadratic(8.0));
  CHECK_THROWS_AS((void)p22_cut(violating, P22Family::kEpiLower, 0), AssumptionError);
}

TEST_CASE("point categories: fixtures and coverage") {
  Instance inst = hull_instance(3, 4, 77);
  TwoWeightProfile profile = two_weight_profile(inst);
  const int n = inst.n();

  {  // single lower coordinate at one
    std::vector<double> x(n, 0.0);
    x[profile.lower[1]] = 1.0;
    Category c = classify(inst, x);
    CHECK(c.tag == CategoryTag::kC1);
    CHECK(c.argmax_lower == profile.lower[1]);
  }
  {  // single higher coordinate at one
    std::vector<double> x(n, 0.0);
    x[profile.higher[0]] = 1.0;
    CHECK(classify(inst, x).tag == CategoryTag::kC2);
  }
  {  // uniform mass spreads across both classes
    std::vector<double> x(n, 2.0 / n);
    CHECK(classify(inst, x).tag == CategoryTag::kC3);
  }
  {
    std::vector<double> x(n, 1.0);
    CHECK_THROWS_AS((void)classify(inst, x), InputError);
  }

  // Every generated point lands in exactly the category the classifier
  // reports; scanning in order establishes uniqueness of the tolerant scan.
  SplitMix64 rng(123);
  std::set<CategoryTag> seen;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<double> x = random_point(rng, n, 2.0);
    seen.insert(classify(inst, x).tag);
  }
  CHECK(seen.size() >= 4);  // c1/c2 are thin; the rest must all appear
}

TEST_CASE("designated cut is the most violated across every family") {
  Instance inst = hull_instance(3, 4, 2024);
  TwoWeightProfile profile = two_weight_profile(inst);
  std::vector<LinearCut> all_cuts = p22_system(inst);
  SplitMix64 rng(2025);
  int violated_points = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> x = random_point(rng, inst.n(), 2.0);
    double best = system_value(all_cuts, x);
    double w = best - rng.uniform(1e-3, 0.4);  // strictly below the hull surface
    auto chosen = most_violated_cut(inst, w, x);
    REQUIRE(chosen.has_value());
    ++violated_points;
    double chosen_violation = chosen->violation(w, x);
    for (const LinearCut& cut : all_cuts)
      CHECK(chosen_violation >= cut.violation(w, x) - 1e-9);
  }
  CHECK(violated_points == 500);

  // Inside the hull: no cut returned.
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x = random_point(rng, inst.n(), 2.0);
    double w = system_value(all_cuts, x) + rng.uniform(1e-3, 0.4);
    REQUIRE(hull_membership(inst, w, x, 2));
    CHECK_FALSE(most_violated_cut(inst, w, x).has_value());
  }
}

TEST_CASE("separation maximizer fixtures") {
  Instance inst = hull_instance(3, 4, 555);
  {
    std::vector<double> zero(inst.n(), 0.0);
    PolarRay ray = separation_lp(inst, zero, 2);
    double value = ray.pi0;
    CHECK(value == doctest::Approx(0.0).epsilon(1e-9));
  }
  // At any point the separation optimum equals the designated category
  // cut's objective (strong duality route).
  SplitMix64 rng(556);
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<double> x = random_point(rng, inst.n(), 2.0);
    PolarRay ray = separation_lp(inst, x, 2);
    double lp_value = ray.pi0;
    for (int i = 0; i < inst.n(); ++i) lp_value += ray.pi[i] * x[i];
    Category category = classify(inst, x);
    LinearCut designated;
    switch (category.tag) {
      case CategoryTag::kC1:
        designated = p22_cut(inst, P22Family::kEpiLower, category.argmax_lower);
        break;
      case CategoryTag::kC2:
        designated = p22_cut(inst, P22Family::kEpiHigher, category.argmax_higher);
        break;
      case CategoryTag::kC3:
        designated = super_average_cut(inst);
        break;
      case CategoryTag::kC4:
        designated = p22_cut(inst, P22Family::kHigherAvg, category.argmax_lower);
        break;
      case CategoryTag::kC5:
        designated = p22_cut(inst, P22Family::kLowerAvg, category.argmax_higher);
        break;
    }
    double cut_value = designated.pi0;
    for (int i = 0; i < inst.n(); ++i) cut_value += designated.pi[i] * x[i];
    CHECK(lp_value == doctest::Approx(cut_value).epsilon(1e-7));
  }
}

TEST_CASE("separation and combination programs agree by strong duality") {
  // The most-violated-inequality value and the cheapest convex combination
  // are optima of a primal/dual pair built from entirely different matrices.
  for (int idx : {0, 1, 2}) {
    Instance inst = hull_instance(2 + idx, 5 - idx, 600 + idx);
    SplitMix64 rng(700 + idx);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<double> x = random_point(rng, inst.n(), 2.0);
      PolarRay ray = separation_lp(inst, x, 2);
      double separation_value = ray.pi0;
      for (int i = 0; i < inst.n(); ++i) separation_value += ray.pi[i] * x[i];
      // Bisect membership on w to locate the hull surface.
      double lo = separation_value - 1.0;
      double hi = separation_value + 1.0;
      CHECK(hull_membership(inst, hi, x, 2));
      CHECK_FALSE(hull_membership(inst, lo, x, 2));
      for (int step = 0; step < 40; ++step) {
        double mid = 0.5 * (lo + hi);
        (hull_membership(inst, mid, x, 2) ? hi : lo) = mid;
      }
      CHECK(hi == doctest::Approx(separation_value).epsilon(1e-6));
    }
  }
}

TEST_CASE("membership via convex combinations") {
  Instance inst = hull_instance(3, 3, 808);
  // Integer feasible points are their own certificates.
  for (const auto& support : feasible_supports(inst.n(), 2)) {
    std::vector<double> x(inst.n(), 0.0);
    for (int i : support) x[i] = 1.0;
    double w = inst.f()(inst.weight_sum(support));
    CHECK(hull_membership(inst, w, x, 2));
    CHECK_FALSE(hull_membership(inst, w - 0.01, x, 2));
  }
}

TEST_CASE("finite description equals LP membership on a probe grid") {
  // Both routes computed independently: the max over the explicit finite
  // system versus the convex-combination program.
  struct Shape {
    int lower, higher;
  };
  for (Shape shape : {Shape{3, 4}, Shape{2, 3}, Shape{1, 4}, Shape{4, 1}, Shape{2, 2}}) {
    Instance inst = hull_instance(shape.lower, shape.higher,
                                  1000 + shape.lower * 10 + shape.higher);
    std::vector<LinearCut> system = p22_system(inst);
    SplitMix64 rng(17 + shape.lower + shape.higher);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> x = random_point(rng, inst.n(), 2.0);
      double boundary = system_value(system, x);
      double offset = (trial % 2 == 0 ? 1.0 : -1.0) * rng.uniform(1e-3, 0.3);
      double w = boundary + offset;
      bool by_lp = hull_membership(inst, w, x, 2);
      bool by_system = w >= boundary - kHullTol;
      CHECK(by_lp == by_system);
    }

    // Family reductions: dropping the super-average inequality when a class
    // has at most two items, dropping an averaged family when the other
    // class is a singleton.
    TwoWeightProfile profile = two_weight_profile(inst);
    if (profile.lower.size() <= 2 || profile.higher.size() <= 2) {
      std::vector<LinearCut> reduced = p22_system(inst, /*include_super_average=*/false);
      for (int trial = 0; trial < 150; ++trial) {
        std::vector<double> x = random_point(rng, inst.n(), 2.0);
        double boundary = system_value(reduced, x);
        double offset = (trial % 2 == 0 ? 1.0 : -1.0) * rng.uniform(1e-3, 0.3);
        bool by_lp = hull_membership(inst, boundary + offset, x, 2);
        CHECK(by_lp == (offset > 0));
      }
    }
  }
}

TEST_CASE("polar enumeration: telescoped inequalities for the unconstrained hull") {
  // With k = n the cardinality constraint is vacuous and every non-trivial
  // facet is a telescoped inequality for some order.
  Instance inst({1.0, 1.0, 2.5, 2.5}, 4, ConcaveFunction::sqrt_scaled(1.0));
  auto facets = enumerate_polar_facets(inst, 4, 200);
  CHECK(!facets.empty());
  // Collect every telescoped inequality (normalized).
  std::vector<LinearCut> epis;
  std::vector<int> order = {0, 1, 2, 3};
  do {
    epis.push_back(epi_cut(inst, Permutation(order)));
  } while (std::next_permutation(order.begin(), order.end()));
  for (const PolarRay& ray : facets) {
    CHECK(std::abs(ray.pi0) <= 1e-7);
    bool matched = false;
    for (const LinearCut& epi : epis) {
      double scale = 0.0;
      for (double v : epi.pi) scale = std::max(scale, std::abs(v));
      bool same = true;
      for (int i = 0; i < 4 && same; ++i)
        same = std::abs(ray.pi[i] - epi.pi[i] / scale) <= 1e-6;
      if (same) matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("the separation optimum at a unit coordinate admits a non-vertex twin") {
  // With the second coordinate pinned at one, the optimal face of the
  // separation program is an edge: the vertex (-10; 20, 38, 35...) plus the
  // direction of the x2 <= 1 bound. The point (-11; 20, 39, 35...) sits on
  // that edge, so it scores the same objective without being returned.
  Instance inst({2, 2, 5, 5, 5, 5, 5}, 2, ConcaveFunction::capped_quadratic(8.0));
  std::vector<double> probe = {0.5, 1.0, 0.125, 0.125, 0.125, 0.125, 0.0};
  PolarRay ray = separation_lp(inst, probe, 2);
  double vertex_value = ray.pi0;
  for (int i = 0; i < 7; ++i) vertex_value += ray.pi[i] * probe[i];
  double edge_point_value = -11.0 + 20.0 * probe[0] + 39.0 * probe[1];
  for (int i = 2; i < 7; ++i) edge_point_value += 35.0 * probe[i];
  CHECK(vertex_value == doctest::Approx(edge_point_value).epsilon(1e-9));
  // The returned maximizer is a vertex; the -11 point is not one.
  CHECK(ray.pi0 == doctest::Approx(-10.0).epsilon(1e-7));
  CHECK(ray.pi[1] == doctest::Approx(38.0).epsilon(1e-7));
}

TEST_CASE("polar enumeration on the two seven-item fixtures") {
  // First fixture: the nonzero-constant facet. The affine-dimension
  // certificate rejects the (-11; 20, 39, 35...) variant of this inequality
  // -- its tight points span only dimension 6 -- and confirms the vertex
  // (-10; 20, 38, 35...), which differs from it by exactly one unit of the
  // trivial facet x2 <= 1.
  {
    Instance inst({2, 2, 5, 5, 5, 5, 5}, 2, ConcaveFunction::capped_quadratic(8.0));
    std::vector<double> printed = {20, 39, 35, 35, 35, 35, 35};
    CHECK(max_violation_at_integer_points(
              inst, LinearCut{1.0, -11.0, printed, CutFamily::kPolarRay, {}}) <= 1e-9);
    CHECK(tight_point_affine_dimension(inst, 2, -11.0, printed) == 6);
    std::vector<double> corrected = {20, 38, 35, 35, 35, 35, 35};
    CHECK(tight_point_affine_dimension(inst, 2, -10.0, corrected) == 7);

    auto facets = enumerate_polar_facets(inst, 2, 400);
    bool found_corrected = false;
    for (const PolarRay& ray : facets) {
      if (std::abs(ray.pi0 - (-10.0 / 38.0)) > 1e-6) continue;
      // Either lower item may play the distinguished role.
      for (int special : {0, 1}) {
        bool same = std::abs(ray.pi[special] - 1.0) <= 1e-6 &&
                    std::abs(ray.pi[1 - special] - 20.0 / 38.0) <= 1e-6;
        for (int i = 2; i < 7 && same; ++i)
          same = std::abs(ray.pi[i] - 35.0 / 38.0) <= 1e-6;
        if (same) found_corrected = true;
      }
    }
    CHECK(found_corrected);
    // Outside every proposed family: the constant term alone rules them out.
    for (const PolarRay& ray : facets)
      if (std::abs(ray.pi0) > 1e-7) CHECK(classify_polar_ray(inst, 2, ray) == "unknown");
  }

  // Second fixture: k = 3 admits facets outside all proposed families.
  {
    Instance inst({6, 6, 6, 6, 8, 8, 8}, 3, ConcaveFunction::capped_quadratic(8.0));
    std::vector<double> printed = {-20.0 / 3, -44.0 / 3,  -44.0 / 3, -44.0 / 3,
                                   -176.0 / 3, -200.0 / 3, -200.0 / 3};
    CHECK(tight_point_affine_dimension(inst, 3, 0.0, printed) == 7);
    auto facets = enumerate_polar_facets(inst, 3, 400);
    const double scale = 200.0 / 3;
    bool found = false;
    for (const PolarRay& ray : facets) {
      if (std::abs(ray.pi0) > 1e-6) continue;
      bool same = true;
      for (int i = 0; i < 7 && same; ++i)
        same = std::abs(ray.pi[i] - printed[i] / scale) <= 1e-6;
      if (same) {
        found = true;
        CHECK(classify_polar_ray(inst, 3, ray) == "unknown");
      }
    }
    CHECK(found);
  }
}

TEST_CASE("every harvested ray is valid at the integer feasible points") {
  Instance inst = hull_instance(2, 3, 31415);
  auto facets = enumerate_polar_facets(inst, 2, 150);
  CHECK(facets.size() >= 3);
  for (const PolarRay& ray : facets) {
    LinearCut as_cut{ray.pi_w, ray.pi0, ray.pi, CutFamily::kPolarRay, {}};
    CHECK(max_violation_at_integer_points(inst, as_cut) <= 1e-6);
    // On a hull-complete instance every facet must be a known family.
    CHECK(classify_polar_ray(inst, 2, ray) != "unknown");
  }
}

TEST_CASE("subset and LP caps raise capacity errors") {
  CHECK_THROWS_AS(subsets_up_to(40, 20, /*cap=*/1000), CapacityError);
  Instance inst = hull_instance(2, 3, 6);
  std::vector<double> x(inst.n(), 0.1);
  CHECK_THROWS_AS((void)separation_lp(inst, x, 2, /*subset_cap=*/3), CapacityError);
}
