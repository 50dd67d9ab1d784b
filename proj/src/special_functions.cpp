#include <cmath>
#include <numbers>

#include "bayesr/error.hpp"
#include "bayesr/priors.hpp"

namespace bayesr {

namespace {

// Arguments are shifted upward by the recurrences until they reach this
// threshold, where the asymptotic series below are accurate to < 1e-17.
constexpr double kAsymptoticThreshold = 15.0;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidInput(std::string(name) + ": argument must be positive");
  }
}

// Stirling series for log Gamma(x), x >= kAsymptoticThreshold.
double lgamma_asymptotic(double x) {
  static constexpr double kCoeffs[] = {
      1.0 / 12.0,     -1.0 / 360.0,        1.0 / 1260.0,
      -1.0 / 1680.0,  1.0 / 1188.0,        -691.0 / 360360.0,
      1.0 / 156.0,    -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kCoeffs) {
    series += c * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x +
         0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double digamma_asymptotic(double x) {
  static constexpr double kCoeffs[] = {
      1.0 / 12.0,  -1.0 / 120.0,      1.0 / 252.0, -1.0 / 240.0,
      1.0 / 132.0, -691.0 / 32760.0,  1.0 / 12.0,
  };
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double power = inv2;
  for (double c : kCoeffs) {
    series += c * power;
    power *= inv2;
  }
  return std::log(x) - 0.5 / x - series;
}

}  // namespace

double lgamma(double x) {
  require_positive(x, "lgamma");
  if (x >= kAsymptoticThreshold) return lgamma_asymptotic(x);
  // Gamma(x) = Gamma(x + n) / (x (x + 1) ... (x + n - 1)).
  double product = 1.0;
  while (x < kAsymptoticThreshold) {
    product *= x;
    x += 1.0;
  }
  return lgamma_asymptotic(x) - std::log(product);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 1.0 / x;
    x += 1.0;
  }
  return digamma_asymptotic(x) - shift;
}

}  // namespace bayesr
