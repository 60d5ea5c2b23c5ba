#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccsm/cuts.hpp"
#include "ccsm/instance.hpp"
#include "ccsm/lp.hpp"

namespace ccsm {

// Tolerance for hull membership, separation objectives and ray
// deduplication.
inline constexpr double kHullTol = 1e-7;

// Default cap on the number of subset constraints (respectively subset
// variables) a separation or membership LP may carry.
inline constexpr std::int64_t kDefaultLpSubsetCap = 100'000;

// Seed for the deterministic fractional probe sample used by
// enumerate_polar_facets.
inline constexpr std::uint64_t kPolarProbeSeed = 20240917;

enum class CategoryTag { kC1, kC2, kC3, kC4, kC5 };

// Which of the five disjoint regions a fractional point belongs to, plus the
// distinguished items: the largest coordinate within each weight class (ties
// to the lowest index).
struct Category {
  CategoryTag tag;
  int argmax_lower;
  int argmax_higher;
};

// A valid inequality pi_w * w >= pi0 + pi'x harvested from the polar;
// pi_w is normalized to one (rays with pi_w = 0 are the trivial bound and
// cardinality facets and are excluded by construction).
struct PolarRay {
  double pi_w = 1.0;
  double pi0 = 0.0;
  std::vector<double> pi;
};

// The additional k = 2 facet: per-item coefficients f(2 a_lo)/2 on the lower
// class and f(2 a_hi)/2 on the higher class. Valid with no condition on the
// weights beyond 0 <= a_lo < a_hi.
LinearCut super_average_cut(const Instance& inst);

enum class P22Family {
  kEpiLower,   // distinguished lower item carries f(a_lo)
  kEpiHigher,  // distinguished higher item carries f(a_hi)
  kLowerAvg,   // lower class averaged, distinguished higher item (needs >= 2 lower)
  kHigherAvg,  // higher class averaged, distinguished lower item (needs >= 2 higher)
};

// The four explicit non-trivial facet patterns of the k = 2 hull with a
// distinguished item. Requires k == 2 (ScopeError), the class-size floors
// above (ScopeError), and the i0 = 0 weight/curvature condition
// (AssumptionError) under which these patterns are the exact lifted forms.
LinearCut p22_cut(const Instance& inst, P22Family family, int distinguished);

// Assigns x to the unique region of the five-way partition; boundary points
// within tolerance resolve to the lowest-numbered region whose non-strict
// conditions hold. Requires sum(x) <= 2 + tol.
Category classify(const Instance& inst, std::span<const double> x);

// The designated most-violated inequality for the point's category, or
// nullopt when that inequality's violation is within kHullTol.
std::optional<LinearCut> most_violated_cut(const Instance& inst, double w,
                                           std::span<const double> x);

// Maximizes pi0 + x'pi over all (pi0, pi) with pi0 + sum_{i in S} pi_i <= F(S)
// for every |S| <= k, returning an optimal vertex: the most violated valid
// inequality at x with unit w-coefficient. Requires x in the box/cardinality
// polytope.
PolarRay separation_lp(const Instance& inst, std::span<const double> x, int k,
                       std::int64_t subset_cap = kDefaultLpSubsetCap);

// Decides (w, x) in conv via the convex-combination side: minimizes
// sum_S Q(S) F(S) over Q >= 0 with sum Q = 1 and sum_{S: i in S} Q(S) = x_i,
// and tests w >= optimum - kHullTol. Deliberately a different LP from
// separation_lp so the two routes cross-check each other.
bool hull_membership(const Instance& inst, double w, std::span<const double> x,
                     int k, std::int64_t subset_cap = kDefaultLpSubsetCap);

// Runs separation_lp at a deterministic probe family: every integer feasible
// point pulled slightly inward, plus `point_budget` seeded random points of
// the cardinality polytope. Returns the distinct optimal vertices (dedup by
// max-abs-normalized coefficients), each certified facet-defining by the
// affine dimension of its tight feasible points.
std::vector<PolarRay> enumerate_polar_facets(const Instance& inst, int k,
                                             int point_budget,
                                             std::int64_t subset_cap = kDefaultLpSubsetCap);

// Every inequality of the finite k = 2 description: the two distinguished
// patterns for every item of the matching class, the averaged patterns where
// their class-size floors allow, and (optionally) the super-average
// inequality. Requires k == 2 and the i0 = 0 condition.
std::vector<LinearCut> p22_system(const Instance& inst,
                                  bool include_super_average = true);

// Names the cut family a normalized ray reproduces, or "unknown". Exact for
// k == 2 under the i0 = 0 condition (the finite system is complete there);
// otherwise compares against the families built along the ray's own
// descending-coefficient orders, which can only under-report matches.
std::string classify_polar_ray(const Instance& inst, int k, const PolarRay& ray);

// All subsets of {0..n-1} with |S| <= k in ascending size, lexicographic
// within a size. Shared by the LPs, the polar prober and the test oracles.
std::vector<std::vector<int>> subsets_up_to(int n, int k,
                                            std::int64_t cap = kDefaultLpSubsetCap);

// Affine dimension of the integer feasible points at which the inequality
// pi_w*w >= pi0 + pi'x is tight (within tol), computed by Gaussian
// elimination on point differences. Equals n exactly when the inequality is
// facet-defining for the (n+1)-dimensional hull.
int tight_point_affine_dimension(const Instance& inst, int k, double pi0,
                                 std::span<const double> pi, double tol = 1e-6);

}  // namespace ccsm
