#pragma once

#include <span>
#include <string>
#include <vector>

namespace ccsm {

enum class CutFamily {
  kEpi,
  kLiftedEpi,
  kAli,
  kSi,
  kLowerSi,
  kHigherSi,
  kSuperAverage,
  kPolarRay,
};

std::string cut_family_name(CutFamily family);

// How a cut was produced: the permutation it was built along, the base set it
// was lifted from, and the averaging parameter where one applies. Enough to
// reconstruct the cut in tests.
struct CutProvenance {
  std::vector<int> perm;
  std::vector<int> base_set;
  int i0 = -1;
};

// The inequality w_coeff * w >= pi0 + pi'x. Cut generators normalize
// w_coeff to 1; pi0 is zero for every lifted family and may be non-zero only
// for rays harvested from the polar.
struct LinearCut {
  double w_coeff = 1.0;
  double pi0 = 0.0;
  std::vector<double> pi;
  CutFamily family = CutFamily::kEpi;
  CutProvenance provenance;

  // pi0 + pi'x - w_coeff*w; positive means violated.
  double violation(double w, std::span<const double> x) const;
  bool satisfied_at(double w, std::span<const double> x, double tol) const;

  std::string format(int decimals = 6) const;
};

}  // namespace ccsm
