#pragma once

#include <span>
#include <vector>

#include "llt/bounds.hpp"
#include "llt/convolve.hpp"
#include "llt/lattice.hpp"

namespace llt {

// Interval discrepancy of an integer-valued law against N(a_n, b_n).
//   d_k   = P{S = k} - ell_k,
//   ell_k = Phi((k - a_n)/sqrt(b_n)) - Phi((k - 1 - a_n)/sqrt(b_n)).
// The tables cover the support and every k where ell_k is not negligible.
struct SmoothnessReport {
  double M;
  double R;  // M + sqrt(2/(e pi))
  double rho;
  Index first_k;  // integer value of d_table[0]
  std::vector<double> d_table;
  std::vector<double> ell_table;
  std::vector<double> p_table;  // P{S = k} on the same window
  double a_n;
  double b_n;

  Index last_k() const { return first_k + static_cast<Index>(d_table.size()) - 1; }
  double d(Index k) const;
};

// b_n * sup_k |P{S = k+1} - P{S = k}|, boundary gaps included. Throws
// InputError unless the law lives on the integers with unit span.
double smoothness_stat(const LatticePmf& pmf, double b_n);
double smoothness_stat(const SumLaw& sum, double b_n);

// rho_n = sup_{p <= q} |sum_{k=p}^q d_k|, via max minus min of prefix sums.
SmoothnessReport interval_discrepancy(const LatticePmf& pmf, double a_n, double b_n);
SmoothnessReport interval_discrepancy(const SumLaw& sum, double a_n, double b_n);

struct PointwiseRow {
  Index k;
  double first_lhs;   // sqrt(b_n) |d_k|
  double second_lhs;  // |sqrt(b_n) P{S = k} - exp(-(k - a_n)^2/(2 b_n))/sqrt(2 pi)|
  bool first_ok;
  bool second_ok;
};

struct PointwiseCheck {
  double first_rhs;   // 2 sqrt(R) sqrt(rho)
  double second_rhs;  // first_rhs + 1/sqrt(2 pi e b_n)
  double first_min_slack;
  double second_min_slack;
  std::vector<PointwiseRow> rows;

  bool all_ok() const;
};

PointwiseCheck effective_pointwise_bound(const SmoothnessReport& report);

// max_k |ell_{k+1} - ell_k| against sqrt(2/(e pi)) / b_n.
struct EllStep {
  double max_step;
  double bound;
};
EllStep ell_step(const SmoothnessReport& report);

struct SmoothnessBound {
  double bound;            // the three-term majorant of M
  double chernoff_term;    // 2 b_n exp(-h^2 Theta / (2 (1 + h/3)))
  double local_term;       // 2 C0 b_n / ((1-h)^{3/2} Theta^{3/2})
  double gradient_term;    // 2 b_n / (sqrt(pi e) (1-h) Theta)
  double b_over_theta;
  double theta_n;
};

SmoothnessBound smoothness_via_extraction(std::span<const LatticePmf> summands,
                                          std::span<const double> thetas, double h,
                                          double b_n, const ConstantsRegistry& constants);

// Direct O(window^2) evaluation of rho_n; a test oracle for the prefix trick.
double rho_brute_force(const SmoothnessReport& report);

}  // namespace llt
