#include "ccsm/concave.hpp"

#include <cmath>
#include <sstream>

#include "ccsm/errors.hpp"

namespace ccsm {

ConcaveFunction ConcaveFunction::sqrt_scaled(double scale) {
  if (!(scale >= 0.0)) throw InputError("sqrt_scaled: scale must be >= 0");
  ConcaveFunction f;
  f.family_ = ConcaveFamily::kSqrtScaled;
  f.scale_ = scale;
  return f;
}

ConcaveFunction ConcaveFunction::power(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("power: exponent must lie in (0, 1)");
  ConcaveFunction f;
  f.family_ = ConcaveFamily::kPower;
  f.exponent_ = p;
  return f;
}

ConcaveFunction ConcaveFunction::capped_quadratic(double c) {
  if (!(c > 0.0)) throw InputError("capped_quadratic: c must be > 0");
  ConcaveFunction f;
  f.family_ = ConcaveFamily::kCappedQuadratic;
  f.cap_ = c;
  return f;
}

ConcaveFunction ConcaveFunction::piecewise_linear(std::vector<double> breakpoints,
                                                  std::vector<double> slopes) {
  if (slopes.empty()) throw InputError("piecewise_linear: needs at least one slope");
  if (slopes.size() != breakpoints.size() + 1)
    throw InputError("piecewise_linear: expected one more slope than breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > 0.0))
      throw InputError("piecewise_linear: breakpoints must be positive");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw InputError("piecewise_linear: breakpoints must be strictly ascending");
  }
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i) {
    if (!(slopes[i + 1] < slopes[i]))
      throw InputError("piecewise_linear: slopes must be strictly decreasing");
  }
  ConcaveFunction f;
  f.family_ = ConcaveFamily::kPiecewiseLinear;
  f.breakpoints_ = std::move(breakpoints);
  f.slopes_ = std::move(slopes);
  return f;
}

double ConcaveFunction::operator()(double y) const {
  switch (family_) {
    case ConcaveFamily::kSqrtScaled:
      if (y < 0.0) throw InputError("sqrt_scaled: argument must be >= 0");
      return scale_ * std::sqrt(y);
    case ConcaveFamily::kPower:
      if (y < 0.0) throw InputError("power: argument must be >= 0");
      return std::pow(y, exponent_);
    case ConcaveFamily::kCappedQuadratic:
      // c^2 - (0 - c)^2 == 0 identically, so f(0) = 0 holds bit-exactly.
      return cap_ * cap_ - (y - cap_) * (y - cap_);
    case ConcaveFamily::kPiecewiseLinear: {
      if (y < 0.0) throw InputError("piecewise_linear: argument must be >= 0");
      double value = 0.0;
      double left = 0.0;
      for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (y <= breakpoints_[i]) return value + slopes_[i] * (y - left);
        value += slopes_[i] * (breakpoints_[i] - left);
        left = breakpoints_[i];
      }
      return value + slopes_.back() * (y - left);
    }
  }
  throw std::logic_error("unreachable concave family");
}

std::string ConcaveFunction::describe() const {
  std::ostringstream out;
  switch (family_) {
    case ConcaveFamily::kSqrtScaled:
      out << scale_ << "*sqrt(y)";
      break;
    case ConcaveFamily::kPower:
      out << "y^" << exponent_;
      break;
    case ConcaveFamily::kCappedQuadratic:
      out << cap_ * cap_ << " - (y - " << cap_ << ")^2";
      break;
    case ConcaveFamily::kPiecewiseLinear:
      out << "piecewise-linear, " << slopes_.size() << " pieces";
      break;
  }
  return out.str();
}

}  // namespace ccsm
