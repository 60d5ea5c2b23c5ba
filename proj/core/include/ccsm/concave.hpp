#pragma once

#include <string>
#include <vector>

namespace ccsm {

enum class ConcaveFamily {
  kSqrtScaled,       // f(y) = scale * sqrt(y), y >= 0
  kPower,            // f(y) = y^p, p in (0, 1), y >= 0
  kCappedQuadratic,  // f(y) = c^2 - (y - c)^2, c > 0
  kPiecewiseLinear,  // concave piecewise-linear through the origin
};

// A univariate concave function with f(0) = 0. Immutable after construction;
// evaluation is pure, so instances can be shared freely across threads.
//
// The piecewise-linear family is parameterized by strictly ascending positive
// breakpoints b_1 < ... < b_m and strictly decreasing slopes s_0 > ... > s_m,
// where slope s_0 applies on [0, b_1] and s_i on [b_i, b_{i+1}] (s_m on
// [b_m, inf)). Strictly decreasing slopes are required: equal adjacent slopes
// would make a breakpoint redundant, and increasing slopes break concavity.
class ConcaveFunction {
 public:
  static ConcaveFunction sqrt_scaled(double scale = 1.0);
  static ConcaveFunction power(double p);
  static ConcaveFunction capped_quadratic(double c);
  static ConcaveFunction piecewise_linear(std::vector<double> breakpoints,
                                          std::vector<double> slopes);

  double operator()(double y) const;

  ConcaveFamily family() const { return family_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  double cap() const { return cap_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }

  std::string describe() const;

  bool operator==(const ConcaveFunction& other) const = default;

 private:
  ConcaveFunction() = default;

  ConcaveFamily family_ = ConcaveFamily::kSqrtScaled;
  double scale_ = 1.0;     // kSqrtScaled
  double exponent_ = 0.5;  // kPower
  double cap_ = 1.0;       // kCappedQuadratic
  std::vector<double> breakpoints_;  // kPiecewiseLinear
  std::vector<double> slopes_;
};

}  // namespace ccsm
