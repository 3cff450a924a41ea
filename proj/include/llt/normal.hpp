#pragma once

#include <cmath>
#include <numbers>

namespace llt {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Phi(x) through the complementary error function so that the lower tail
// keeps full relative accuracy.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Phi(b) - Phi(a) for a <= b, evaluated on the tail side that avoids
// cancellation.
inline double normal_interval(double a, double b) {
  if (a >= 0.0) return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
  return 1.0 - normal_cdf(a) - (1.0 - normal_cdf(b));
}

}  // namespace llt
