#pragma once

#include <span>
#include <vector>

#include "llt/lattice.hpp"

namespace llt {

// Exact law of S_n = X_1 + ... + X_n for independent lattice summands.
struct SumLaw {
  LatticePmf pmf;
  int n;
  double mean;
  double variance;
};

// Law of B_n = eps_1 + ... + eps_n with P{eps_j = 1} = theta_j.
struct PoissonBinomialLaw {
  std::vector<double> thetas;
  std::vector<double> pmf;  // pmf[b] = P{B_n = b}, b = 0..n
  double theta_n;

  double mean() const;
  // rho_n(h) = P{|B_n - Theta_n| > h Theta_n}
  double tail(double h) const;
};

// Independent sum of two lattice laws. Spans must be integer multiples of
// the smaller one; the result lives on the finer lattice.
LatticePmf convolve(const LatticePmf& a, const LatticePmf& b);

// Throws InputError on an empty list or incompatible spans.
SumLaw convolve_all(std::span<const LatticePmf> pmfs);

// Throws InputError if some theta_j lies outside (0, 1].
PoissonBinomialLaw poisson_binomial(std::span<const double> thetas);

// sup_x |P{(Z - center)/scale < x} - Phi(x)|, evaluated at every jump from
// both sides.
double kolmogorov_distance(const LatticePmf& pmf, double center, double scale);

// Delta_n = sup_N |sqrt(Sigma_n) P{S_n = N} - D/sqrt(2 pi) exp(-(N - M_n)^2 / (2 Sigma_n))|
// over every lattice point N, including points outside the support.
double llt_discrepancy(const SumLaw& sum);

}  // namespace llt
