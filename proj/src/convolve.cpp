#include "llt/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "llt/errors.hpp"
#include "llt/normal.hpp"

namespace llt {

namespace {

// Returns r such that coarse == r * fine, or 0 if the ratio is not integral.
Index span_ratio(double coarse, double fine) {
  const double r = coarse / fine;
  const double rounded = std::round(r);
  if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * rounded) return 0;
  return static_cast<Index>(rounded);
}

}  // namespace

LatticePmf convolve(const LatticePmf& a, const LatticePmf& b) {
  const LatticePmf* fine = &a;
  const LatticePmf* coarse = &b;
  if (b.span() < a.span()) std::swap(fine, coarse);
  const Index ratio = span_ratio(coarse->span(), fine->span());
  if (ratio == 0) {
    std::ostringstream os;
    os.precision(17);
    os << "lattice spans " << a.span() << " and " << b.span()
       << " are not integer multiples of each other";
    throw InputError(os.str());
  }
  const LatticePmf lhs = *fine;
  const LatticePmf rhs = coarse->refined(ratio);

  std::vector<double> out(lhs.size() + rhs.size() - 1, 0.0);
  const auto p = lhs.probs();
  const auto q = rhs.probs();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return LatticePmf::from_dense(lhs.v0() + rhs.v0(), lhs.span(), lhs.first() + rhs.first(),
                                std::move(out), false);
}

SumLaw convolve_all(std::span<const LatticePmf> pmfs) {
  if (pmfs.empty()) throw InputError("convolve_all needs at least one summand");
  LatticePmf acc = pmfs.front();
  double mean = 0.0;
  double var = 0.0;
  for (std::size_t j = 0; j < pmfs.size(); ++j) {
    const auto m = moments(pmfs[j]);
    mean += m.mean;
    var += m.variance;
    if (j > 0) acc = convolve(acc, pmfs[j]);
  }
  return {std::move(acc), static_cast<int>(pmfs.size()), mean, var};
}

double PoissonBinomialLaw::mean() const {
  double m = 0.0;
  for (std::size_t b = 0; b < pmf.size(); ++b) m += static_cast<double>(b) * pmf[b];
  return m;
}

double PoissonBinomialLaw::tail(double h) const {
  double sum = 0.0;
  for (std::size_t b = 0; b < pmf.size(); ++b) {
    if (std::abs(static_cast<double>(b) - theta_n) > h * theta_n) sum += pmf[b];
  }
  return sum;
}

PoissonBinomialLaw poisson_binomial(std::span<const double> thetas) {
  std::vector<double> pmf{1.0};
  double theta_n = 0.0;
  for (double t : thetas) {
    if (!(t > 0.0) || t > 1.0) {
      throw InputError("Bernoulli success probability must lie in (0, 1], got " +
                       std::to_string(t));
    }
    std::vector<double> next(pmf.size() + 1, 0.0);
    for (std::size_t b = 0; b < pmf.size(); ++b) {
      next[b] += pmf[b] * (1.0 - t);
      next[b + 1] += pmf[b] * t;
    }
    pmf = std::move(next);
    theta_n += t;
  }
  return {std::vector<double>(thetas.begin(), thetas.end()), std::move(pmf), theta_n};
}

double kolmogorov_distance(const LatticePmf& pmf, double center, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("Kolmogorov distance needs a positive scale");
  }
  double below = 0.0;  // P{Z < current jump}
  double sup = 0.0;
  for (Index k = pmf.first(); k <= pmf.last(); ++k) {
    const double p = pmf[k];
    if (p == 0.0) continue;
    const double x = (pmf.value(k) - center) / scale;
    const double phi = normal_cdf(x);
    sup = std::max(sup, std::abs(below - phi));
    below += p;
    sup = std::max(sup, std::abs(std::min(below, 1.0) - phi));
  }
  return sup;
}

double llt_discrepancy(const SumLaw& sum) {
  if (!(sum.variance > 0.0)) {
    throw HypothesisError("local limit discrepancy needs a non-degenerate variance");
  }
  const double root = std::sqrt(sum.variance);
  const double d = sum.pmf.span();
  const double amp = d / std::sqrt(2.0 * std::numbers::pi);
  double sup = 0.0;
  // beyond first-1 / last+1 the Gaussian term only decreases
  for (Index k = sum.pmf.first() - 1; k <= sum.pmf.last() + 1; ++k) {
    const double z = sum.pmf.value(k) - sum.mean;
    const double g = amp * std::exp(-z * z / (2.0 * sum.variance));
    sup = std::max(sup, std::abs(root * sum.pmf[k] - g));
  }
  return sup;
}

}  // namespace llt
