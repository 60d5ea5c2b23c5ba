#include "ccsm/cuts.hpp"

#include <cstdio>
#include <stdexcept>

namespace ccsm {

std::string cut_family_name(CutFamily family) {
  switch (family) {
    case CutFamily::kEpi: return "epi";
    case CutFamily::kLiftedEpi: return "lifted-epi";
    case CutFamily::kAli: return "ali";
    case CutFamily::kSi: return "si";
    case CutFamily::kLowerSi: return "lower-si";
    case CutFamily::kHigherSi: return "higher-si";
    case CutFamily::kSuperAverage: return "super-average";
    case CutFamily::kPolarRay: return "polar-ray";
  }
  throw std::logic_error("unreachable cut family");
}

double LinearCut::violation(double w, std::span<const double> x) const {
  double lhs = pi0;
  for (std::size_t i = 0; i < pi.size(); ++i) lhs += pi[i] * x[i];
  return lhs - w_coeff * w;
}

bool LinearCut::satisfied_at(double w, std::span<const double> x, double tol) const {
  return violation(w, x) <= tol;
}

std::string LinearCut::format(int decimals) const {
  char buffer[64];
  std::string out = "w >= ";
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, pi0);
  out += buffer;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const char* sign = pi[i] < 0 ? " - " : " + ";
    std::snprintf(buffer, sizeof(buffer), "%s%.*f*x%zu", sign, decimals,
                  pi[i] < 0 ? -pi[i] : pi[i], i + 1);
    out += buffer;
  }
  return out;
}

}  // namespace ccsm
