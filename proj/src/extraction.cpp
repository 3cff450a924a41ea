#include "llt/extraction.hpp"

#include <algorithm>
#include <sstream>

#include "llt/errors.hpp"

namespace llt {

double BernoulliSplit::tau_at(Index k) const {
  if (k < first() || k > last()) return 0.0;
  return tau[static_cast<std::size_t>(k - first())];
}

double BernoulliSplit::joint(Index k, int eps) const {
  if (k < first() || k > last()) return 0.0;
  const auto i = static_cast<std::size_t>(k - first());
  return eps == 0 ? joint0[i] : joint1[i];
}

double BernoulliSplit::v_marginal(Index k) const {
  return source[k] + 0.5 * (tau_at(k) - tau_at(k - 1));
}

double BernoulliSplit::eps_probability() const {
  double sum = 0.0;
  for (double t : joint1) sum += t;
  return sum;
}

BernoulliSplit split(const LatticePmf& pmf, double vartheta) {
  const double theta_x = theta(pmf);
  if (!(theta_x > 0.0)) {
    throw HypothesisError("Bernoulli extraction impossible: theta_X = 0 "
                          "(no two adjacent lattice points carry mass)");
  }
  if (!(vartheta > 0.0) || vartheta > theta_x) {
    std::ostringstream os;
    os.precision(17);
    os << "extraction level must satisfy 0 < vartheta <= theta_X = " << theta_x
       << ", got " << vartheta;
    throw HypothesisError(os.str());
  }
  BernoulliSplit s{pmf, vartheta, {}, {}, {}};
  const std::size_t n = pmf.size();
  const double scale = vartheta / theta_x;
  s.tau.assign(n, 0.0);
  for (Index k = pmf.first(); k < pmf.last(); ++k) {
    s.tau[static_cast<std::size_t>(k - pmf.first())] = scale * std::min(pmf[k], pmf[k + 1]);
  }
  s.joint1 = s.tau;
  s.joint0.assign(n, 0.0);
  for (Index k = pmf.first(); k <= pmf.last(); ++k) {
    // f(k) >= min(f(k-1), f(k)) and f(k) >= min(f(k), f(k+1)), so this is >= 0
    // up to rounding; clamp the rounding residue.
    const double m = pmf[k] - 0.5 * (s.tau_at(k - 1) + s.tau_at(k));
    s.joint0[static_cast<std::size_t>(k - pmf.first())] = std::max(m, 0.0);
  }
  return s;
}

BernoulliSplit split(const LatticePmf& pmf) { return split(pmf, theta(pmf)); }

LatticePmf reconstruct(const BernoulliSplit& s) {
  // P{Z = v_k} = P{V = v_k, eps = 0} + (P{V = v_{k-1}, eps = 1} + P{V = v_k, eps = 1}) / 2
  std::vector<double> probs(s.source.size() + 1, 0.0);
  for (Index k = s.first(); k <= s.last() + 1; ++k) {
    probs[static_cast<std::size_t>(k - s.first())] =
        s.joint(k, 0) + 0.5 * (s.joint(k - 1, 1) + s.joint(k, 1));
  }
  return LatticePmf::from_dense(s.source.v0(), s.source.span(), s.first(),
                                std::move(probs), false);
}

LatticePmf xi_law(const BernoulliSplit& s) {
  // v_k -> half-lattice index 2k, v_k + D/2 -> 2k + 1
  std::vector<double> probs(2 * s.source.size(), 0.0);
  for (Index k = s.first(); k <= s.last(); ++k) {
    const auto i = static_cast<std::size_t>(k - s.first());
    probs[2 * i] = s.joint0[i];
    probs[2 * i + 1] = s.joint1[i];
  }
  return LatticePmf::from_dense(s.source.v0(), 0.5 * s.source.span(), 2 * s.first(),
                                std::move(probs), false);
}

}  // namespace llt
