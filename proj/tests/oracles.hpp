// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "llt/lattice.hpp"

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// P{Bin(n, a/b) = k} as an exact rational.
inline cpp_rational binomial_pmf(int n, int k, int a, int b) {
  cpp_int num = binomial(n, k);
  cpp_int pa = 1, pb = 1, den = 1;
  for (int i = 0; i < k; ++i) pa *= a;
  for (int i = 0; i < n - k; ++i) pb *= (b - a);
  for (int i = 0; i < n; ++i) den *= b;
  return cpp_rational(num * pa * pb, den);
}

inline double to_double(const cpp_rational& r) { return r.convert_to<double>(); }

// log of an exact positive rational, accurate even when it underflows double
inline double log_rational(const cpp_rational& r) {
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  const auto bits = [](const cpp_int& x) { return static_cast<long>(boost::multiprecision::msb(x)); };
  const long sn = std::max(0L, bits(num) - 60);
  const long sd = std::max(0L, bits(den) - 60);
  const double hn = static_cast<double>(cpp_int(num >> sn).convert_to<double>());
  const double hd = static_cast<double>(cpp_int(den >> sd).convert_to<double>());
  return std::log(hn) - std::log(hd) + static_cast<double>(sn - sd) * std::numbers::ln2;
}

// Pascal-triangle row of Bin(n, 1/2) in doubles.
inline std::vector<double> pascal_half(int n) {
  std::vector<double> row{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += 0.5 * row[j];
      next[j + 1] += 0.5 * row[j];
    }
    row = std::move(next);
  }
  return row;
}

// E exp(-a (b - g)^2) by adaptive quadrature against the Gaussian density.
inline double exp_moment_quadrature(double a, double b) {
  auto f = [a, b](double g) {
    return std::exp(-a * (b - g) * (b - g) - 0.5 * g * g) / std::sqrt(2.0 * std::numbers::pi);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -40.0, 40.0, 25, 1e-14);
}

// Random pmf with support size in [2, max_support] on a random lattice,
// guaranteed to have two adjacent atoms.
inline llt::LatticePmf random_pmf(std::mt19937_64& rng, int max_support = 21) {
  std::uniform_int_distribution<int> len(2, max_support);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::uniform_int_distribution<int> zero(0, 3);
  std::uniform_int_distribution<int> span_pick(0, 3);
  std::uniform_real_distribution<double> off(-5.0, 5.0);
  std::uniform_int_distribution<llt::Index> start(-10, 10);
  const double spans[] = {0.5, 1.0, 2.0, 3.0};
  const int size = len(rng);
  const llt::Index s = start(rng);
  std::vector<std::pair<llt::Index, double>> e;
  for (int k = 0; k < size; ++k) {
    // sprinkle interior zeros
    const double weight = zero(rng) == 0 ? 0.0 : w(rng);
    e.emplace_back(s + k, weight);
  }
  std::uniform_int_distribution<int> pos(0, size - 2);
  const int p = pos(rng);
  e[static_cast<std::size_t>(p)].second += 0.05;
  e[static_cast<std::size_t>(p + 1)].second += 0.05;
  return llt::LatticePmf::make(off(rng), spans[span_pick(rng)], e);
}

inline llt::LatticePmf fair_bernoulli() {
  const std::vector<std::pair<llt::Index, double>> e{{0, 1.0}, {1, 1.0}};
  return llt::LatticePmf::make(0.0, 1.0, e);
}

inline llt::LatticePmf uniform012() {
  const std::vector<std::pair<llt::Index, double>> e{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  return llt::LatticePmf::make(0.0, 1.0, e);
}

}  // namespace oracle
