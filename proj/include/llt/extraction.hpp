#pragma once

#include <vector>

#include "llt/lattice.hpp"

namespace llt {

// Bernoulli part of a lattice variable X: a pair (V, eps) such that
// V + eps * D * L has the law of X when L is an independent fair coin.
// tau_k = (vartheta / theta_X) * min(f(k), f(k+1)); the joint law is
//   P{(V, eps) = (v_k, 1)} = tau_k
//   P{(V, eps) = (v_k, 0)} = f(k) - (tau_{k-1} + tau_k) / 2.
struct BernoulliSplit {
  LatticePmf source;
  double vartheta;
  // tau and the joint masses share the index window of `source`.
  std::vector<double> tau;
  std::vector<double> joint0;
  std::vector<double> joint1;

  Index first() const { return source.first(); }
  Index last() const { return source.last(); }
  double tau_at(Index k) const;
  double joint(Index k, int eps) const;
  // P{V = v_k} = f(k) + (tau_k - tau_{k-1}) / 2
  double v_marginal(Index k) const;
  double eps_probability() const;
};

// Throws HypothesisError unless 0 < vartheta <= theta(pmf).
BernoulliSplit split(const LatticePmf& pmf, double vartheta);

// Maximal extraction, vartheta = theta(pmf).
BernoulliSplit split(const LatticePmf& pmf);

// Exact law of V + eps * D * L.
LatticePmf reconstruct(const BernoulliSplit& s);

// Law of xi = V + (D/2) eps on the half lattice L(v0, D/2).
LatticePmf xi_law(const BernoulliSplit& s);

}  // namespace llt
