#include "llt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "llt/errors.hpp"

namespace llt {

namespace {

std::vector<double> trimmed(Index& first, std::vector<double> probs) {
  std::size_t lo = 0;
  while (lo < probs.size() && probs[lo] == 0.0) ++lo;
  std::size_t hi = probs.size();
  while (hi > lo && probs[hi - 1] == 0.0) --hi;
  first += static_cast<Index>(lo);
  return {probs.begin() + static_cast<std::ptrdiff_t>(lo),
          probs.begin() + static_cast<std::ptrdiff_t>(hi)};
}

void check_span(double span) {
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw InputError("lattice span D must be a finite positive number, got " +
                     std::to_string(span));
  }
}

}  // namespace

LatticePmf LatticePmf::make(double v0, double span,
                            std::span<const std::pair<Index, double>> entries) {
  check_span(span);
  if (!std::isfinite(v0)) throw InputError("lattice offset v0 must be finite");
  std::map<Index, double> merged;
  for (const auto& [k, w] : entries) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InputError("pmf weight at index " + std::to_string(k) +
                       " must be finite and non-negative");
    }
    merged[k] += w;
  }
  double total = 0.0;
  for (const auto& [k, w] : merged) total += w;
  if (!(total > 0.0)) throw InputError("pmf needs at least one positive weight");

  Index first = 0;
  Index last = 0;
  bool seen = false;
  for (const auto& [k, w] : merged) {
    if (w <= 0.0) continue;
    if (!seen) first = k;
    last = k;
    seen = true;
  }
  std::vector<double> probs(static_cast<std::size_t>(last - first + 1), 0.0);
  for (const auto& [k, w] : merged) {
    if (w > 0.0) probs[static_cast<std::size_t>(k - first)] = w / total;
  }
  return LatticePmf(v0, span, first, std::move(probs));
}

LatticePmf LatticePmf::from_dense(double v0, double span, Index first,
                                  std::vector<double> probs, bool normalize) {
  check_span(span);
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InputError("dense pmf block contains a negative or non-finite mass");
    }
    total += p;
  }
  if (!(total > 0.0)) throw InputError("pmf needs at least one positive weight");
  if (normalize) {
    for (double& p : probs) p /= total;
  }
  auto kept = trimmed(first, std::move(probs));
  return LatticePmf(v0, span, first, std::move(kept));
}

LatticePmf LatticePmf::point_mass(double v0, double span, Index k) {
  check_span(span);
  return LatticePmf(v0, span, k, {1.0});
}

double LatticePmf::total_mass() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

LatticePmf LatticePmf::refined(Index factor) const {
  if (factor < 1) throw InputError("refinement factor must be >= 1");
  if (factor == 1) return *this;
  std::vector<double> dense((probs_.size() - 1) * static_cast<std::size_t>(factor) + 1, 0.0);
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    dense[i * static_cast<std::size_t>(factor)] = probs_[i];
  }
  return LatticePmf(v0_, span_ / static_cast<double>(factor), first_ * factor,
                    std::move(dense));
}

double theta(const LatticePmf& pmf) {
  double sum = 0.0;
  for (Index k = pmf.first(); k < pmf.last(); ++k) {
    sum += std::min(pmf[k], pmf[k + 1]);
  }
  return sum;
}

double delta_smoothness(const LatticePmf& pmf) {
  double sum = 0.0;
  for (Index k = pmf.first() - 1; k <= pmf.last(); ++k) {
    sum += std::abs(pmf[k] - pmf[k + 1]);
  }
  return sum;
}

Moments moments(const LatticePmf& pmf) {
  double mean = 0.0;
  for (Index k = pmf.first(); k <= pmf.last(); ++k) mean += pmf.value(k) * pmf[k];
  double var = 0.0;
  for (Index k = pmf.first(); k <= pmf.last(); ++k) {
    const double d = pmf.value(k) - mean;
    var += d * d * pmf[k];
  }
  return {mean, var};
}

Index maximal_span_multiple(const LatticePmf& pmf) {
  Index g = 0;
  for (Index k = pmf.first() + 1; k <= pmf.last(); ++k) {
    if (pmf[k] > 0.0) g = std::gcd(g, k - pmf.first());
  }
  return g;
}

Characteristics characteristics(const LatticePmf& pmf) {
  const auto m = moments(pmf);
  return {theta(pmf), delta_smoothness(pmf), m.mean, m.variance,
          maximal_span_multiple(pmf)};
}

Psi Psi::abs_cubed() {
  return Psi("abs_cubed", [](double x) { return std::abs(x * x * x); });
}

Psi Psi::square() {
  return Psi("square", [](double x) { return x * x; });
}

void Psi::check_admissible() const {
  constexpr double kTol = 1e-10;
  auto fail = [this](const std::string& what) {
    throw HypothesisError("psi '" + name_ + "' is not admissible: " + what);
  };
  // geometric grid on the positive half-line
  std::vector<double> grid;
  for (double x = 1e-3; x <= 1e3; x *= 1.25) grid.push_back(x);

  for (double x : grid) {
    const double a = fn_(x);
    const double b = fn_(-x);
    if (!(a > 0.0) || !std::isfinite(a)) fail("psi must be positive and finite away from 0");
    if (std::abs(a - b) > kTol * std::max(1.0, a)) fail("psi must be even");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x0 = grid[i - 1];
    const double x1 = grid[i];
    const double r0 = fn_(x0) / (x0 * x0);
    const double r1 = fn_(x1) / (x1 * x1);
    if (r1 < r0 * (1.0 - kTol)) fail("psi(x)/x^2 must be non-decreasing");
    const double s0 = x0 * x0 * x0 / fn_(x0);
    const double s1 = x1 * x1 * x1 / fn_(x1);
    if (s1 < s0 * (1.0 - kTol)) fail("x^3/psi(x) must be non-decreasing");
  }
  // convexity via second differences on a symmetric uniform grid
  const double step = 0.125;
  for (int i = -400; i <= 400; ++i) {
    const double x = step * i;
    const double mid = fn_(x);
    const double dd = fn_(x - step) - 2.0 * mid + fn_(x + step);
    if (dd < -kTol * std::max(1.0, std::abs(mid))) fail("psi must be convex");
  }
}

double psi_moment(const LatticePmf& pmf, const Psi& psi) {
  psi.check_admissible();
  double sum = 0.0;
  for (Index k = pmf.first(); k <= pmf.last(); ++k) sum += psi(pmf.value(k)) * pmf[k];
  return sum;
}

}  // namespace llt
