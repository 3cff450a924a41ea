#pragma once

#include <cstdint>

namespace llt {

// Root of sum_{j=m}^n j / (1 + exp(sigma j)) = n. For m = n the root is at
// -infinity; `degenerate` is set and sigma is reported as 0, which the
// counting identity accepts like any other tilt.
struct SigmaSolution {
  double sigma;
  double residual;
  bool degenerate;
};

// m = 0 is read as m = 1. Throws InputError unless 1 <= m <= n.
SigmaSolution solve_sigma(int m, int n);

struct PartitionCount {
  int m;
  int n;
  double sigma;
  bool degenerate;
  std::uint64_t q;
  double raw;             // value before rounding
  double rounding_error;  // |raw - q|
};

inline constexpr double kRoundingTolerance = 1e-6;

// q_m(n) = e^{sigma n} prod_{j=m}^n (1 + e^{-sigma j}) P{Y = n} with Y the sum
// of independent X_j in {0, j}, P{X_j = j} = e^{-sigma j} / (1 + e^{-sigma j}).
// Returns q = 0 when m > n. Throws NumericalError when the value is further
// than kRoundingTolerance from an integer.
PartitionCount count_via_model(int m, int n);

// Same identity at a caller-chosen tilt.
PartitionCount count_via_model_at(int m, int n, double sigma);

inline constexpr int kEnumerationMaxN = 60;

// Number of partitions of n into distinct parts >= max(m, 1), by recursive descent.
std::uint64_t count_via_enumeration(int m, int n);

}  // namespace llt
