#include "llt/partition.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "llt/errors.hpp"

namespace llt {

namespace {

int lower_part(int m) { return m < 1 ? 1 : m; }

void check_mn(int m, int n) {
  if (n < 1) throw InputError("n must be >= 1, got " + std::to_string(n));
  if (m < 0) throw InputError("m must be >= 0, got " + std::to_string(m));
}

// j / (1 + e^{sigma j}) without overflow
double centered_term(int j, double sigma) {
  const double t = sigma * j;
  if (t > 0.0) {
    const double e = std::exp(-t);
    return j * e / (1.0 + e);
  }
  return j / (1.0 + std::exp(t));
}

double centering_lhs(int m, int n, double sigma) {
  double s = 0.0;
  for (int j = m; j <= n; ++j) s += centered_term(j, sigma);
  return s;
}

// log(1 + e^{-x})
double log1p_exp_neg(double x) {
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

SigmaSolution solve_sigma(int m, int n) {
  check_mn(m, n);
  m = lower_part(m);
  if (m > n) throw InputError("no partition of n into parts >= m when m > n");
  if (m == n) return {0.0, 0.0, true};

  const double target = n;
  double lo = -1.0;
  double hi = 1.0;
  while (centering_lhs(m, n, lo) <= target) lo *= 2.0;
  while (centering_lhs(m, n, hi) >= target) hi *= 2.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (centering_lhs(m, n, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double rlo = std::abs(centering_lhs(m, n, lo) - target);
  const double rhi = std::abs(centering_lhs(m, n, hi) - target);
  return rlo <= rhi ? SigmaSolution{lo, rlo, false} : SigmaSolution{hi, rhi, false};
}

PartitionCount count_via_model_at(int m, int n, double sigma) {
  check_mn(m, n);
  const int lo = lower_part(m);
  if (lo > n) return {m, n, sigma, false, 0, 0.0, 0.0};

  // P{Y = s} for s = 0..n; mass above n never returns below it
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
  p[0] = 1.0;
  double log_norm = 0.0;
  for (int j = lo; j <= n; ++j) {
    const double t = sigma * j;
    const double p1 = t > 0.0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
    const double p0 = 1.0 - p1;
    for (int s = n; s >= 0; --s) {
      const double keep = p[static_cast<std::size_t>(s)] * p0;
      const double move = s >= j ? p[static_cast<std::size_t>(s - j)] * p1 : 0.0;
      p[static_cast<std::size_t>(s)] = keep + move;
    }
    log_norm += log1p_exp_neg(t);
  }
  const double py = p[static_cast<std::size_t>(n)];
  const double raw = py > 0.0 ? std::exp(sigma * n + log_norm + std::log(py)) : 0.0;
  const double q = std::round(raw);
  const double err = std::abs(raw - q);
  if (err > kRoundingTolerance) {
    throw NumericalError("q_" + std::to_string(m) + "(" + std::to_string(n) + ") = " +
                         std::to_string(raw) + " is not within 1e-6 of an integer");
  }
  return {m, n, sigma, false, static_cast<std::uint64_t>(q), raw, err};
}

PartitionCount count_via_model(int m, int n) {
  check_mn(m, n);
  if (lower_part(m) > n) return {m, n, 0.0, false, 0, 0.0, 0.0};
  const auto sol = solve_sigma(m, n);
  auto out = count_via_model_at(m, n, sol.sigma);
  out.degenerate = sol.degenerate;
  return out;
}

namespace {

// partitions of `rest` into distinct parts >= smallest
std::uint64_t descend(int rest, int smallest) {
  if (rest == 0) return 1;
  std::uint64_t count = 0;
  for (int part = smallest; part <= rest; ++part) {
    const int left = rest - part;
    // the remaining parts must all exceed `part`
    if (left != 0 && left <= part) continue;
    count += descend(left, part + 1);
  }
  return count;
}

}  // namespace

std::uint64_t count_via_enumeration(int m, int n) {
  check_mn(m, n);
  if (n > kEnumerationMaxN) {
    throw InputError("enumeration budget is n <= " + std::to_string(kEnumerationMaxN));
  }
  return descend(n, lower_part(m));
}

}  // namespace llt
