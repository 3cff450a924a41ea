#include "llt/gamkrelidze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "llt/errors.hpp"
#include "llt/normal.hpp"

namespace llt {

namespace {

// Integer value of index 0; rejects laws that are not on the unit lattice.
Index integer_offset(const LatticePmf& pmf) {
  if (std::abs(pmf.span() - 1.0) > 1e-12) {
    throw InputError("integer-valued law with span 1 required, got span " + std::to_string(pmf.span()));
  }
  const double r = std::round(pmf.v0());
  if (std::abs(pmf.v0() - r) > 1e-9) {
    throw InputError("integer-valued law required, lattice offset " + std::to_string(pmf.v0()) +
                     " is not an integer");
  }
  return static_cast<Index>(r);
}

void check_b(double b_n) {
  if (!(b_n > 0.0) || !std::isfinite(b_n)) throw InputError("b_n must be a finite positive number");
}

}  // namespace

double SmoothnessReport::d(Index k) const {
  if (k < first_k || k > last_k()) return 0.0;
  return d_table[static_cast<std::size_t>(k - first_k)];
}

double smoothness_stat(const LatticePmf& pmf, double b_n) {
  check_b(b_n);
  integer_offset(pmf);
  double sup = 0.0;
  for (Index k = pmf.first() - 1; k <= pmf.last(); ++k) {
    sup = std::max(sup, std::abs(pmf[k + 1] - pmf[k]));
  }
  return b_n * sup;
}

double smoothness_stat(const SumLaw& sum, double b_n) { return smoothness_stat(sum.pmf, b_n); }

SmoothnessReport interval_discrepancy(const LatticePmf& pmf, double a_n, double b_n) {
  check_b(b_n);
  if (!std::isfinite(a_n)) throw InputError("a_n must be finite");
  const Index off = integer_offset(pmf);
  const double sb = std::sqrt(b_n);
  // beyond 9 standard units the Gaussian cells are below 1e-16
  const Index g_lo = static_cast<Index>(std::floor(a_n - 9.0 * sb));
  const Index g_hi = static_cast<Index>(std::ceil(a_n + 9.0 * sb)) + 1;
  const Index lo = std::min(off + pmf.first(), g_lo);
  const Index hi = std::max(off + pmf.last(), g_hi);

  SmoothnessReport rep{smoothness_stat(pmf, b_n), 0.0, 0.0, lo, {}, {}, {}, a_n, b_n};
  rep.R = rep.M + std::sqrt(2.0 / (std::numbers::e * std::numbers::pi));
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  rep.d_table.reserve(width);
  rep.ell_table.reserve(width);
  rep.p_table.reserve(width);
  double prefix = 0.0;
  double pmax = 0.0;
  double pmin = 0.0;
  for (Index k = lo; k <= hi; ++k) {
    const double p = pmf[k - off];
    const double ell = normal_interval((static_cast<double>(k) - 1.0 - a_n) / sb,
                                       (static_cast<double>(k) - a_n) / sb);
    const double d = p - ell;
    rep.p_table.push_back(p);
    rep.ell_table.push_back(ell);
    rep.d_table.push_back(d);
    prefix += d;
    pmax = std::max(pmax, prefix);
    pmin = std::min(pmin, prefix);
  }
  rep.rho = pmax - pmin;
  return rep;
}

SmoothnessReport interval_discrepancy(const SumLaw& sum, double a_n, double b_n) {
  return interval_discrepancy(sum.pmf, a_n, b_n);
}

bool PointwiseCheck::all_ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const PointwiseRow& r) { return r.first_ok && r.second_ok; });
}

PointwiseCheck effective_pointwise_bound(const SmoothnessReport& report) {
  const double sb = std::sqrt(report.b_n);
  PointwiseCheck out{};
  out.first_rhs = 2.0 * std::sqrt(report.R) * std::sqrt(report.rho);
  out.second_rhs = out.first_rhs + 1.0 / std::sqrt(2.0 * std::numbers::pi * std::numbers::e * report.b_n);
  out.first_min_slack = std::numeric_limits<double>::infinity();
  out.second_min_slack = std::numeric_limits<double>::infinity();
  out.rows.reserve(report.d_table.size());
  for (std::size_t i = 0; i < report.d_table.size(); ++i) {
    const Index k = report.first_k + static_cast<Index>(i);
    const double z = static_cast<double>(k) - report.a_n;
    const double first = sb * std::abs(report.d_table[i]);
    const double second = std::abs(sb * report.p_table[i] -
                                   std::exp(-z * z / (2.0 * report.b_n)) / std::sqrt(2.0 * std::numbers::pi));
    out.first_min_slack = std::min(out.first_min_slack, out.first_rhs - first);
    out.second_min_slack = std::min(out.second_min_slack, out.second_rhs - second);
    out.rows.push_back({k, first, second, first <= out.first_rhs, second <= out.second_rhs});
  }
  return out;
}

EllStep ell_step(const SmoothnessReport& report) {
  double step = 0.0;
  for (std::size_t i = 0; i + 1 < report.ell_table.size(); ++i) {
    step = std::max(step, std::abs(report.ell_table[i + 1] - report.ell_table[i]));
  }
  // the first and last cells border negligible Gaussian mass
  if (!report.ell_table.empty()) {
    step = std::max({step, report.ell_table.front(), report.ell_table.back()});
  }
  return {step, std::sqrt(2.0 / (std::numbers::e * std::numbers::pi)) / report.b_n};
}

SmoothnessBound smoothness_via_extraction(std::span<const LatticePmf> summands,
                                          std::span<const double> thetas, double h,
                                          double b_n, const ConstantsRegistry& constants) {
  check_b(b_n);
  if (!(h > 0.0 && h < 1.0)) throw HypothesisError("h must lie in (0, 1)");
  const auto shape = sum_shape(summands, thetas);
  const double th = shape.theta_n;
  SmoothnessBound out{};
  out.theta_n = th;
  out.b_over_theta = b_n / th;
  out.chernoff_term = 2.0 * b_n * std::exp(-h * h * th / (2.0 * (1.0 + h / 3.0)));
  out.local_term = 2.0 * constants.c0 * b_n / (std::pow(1.0 - h, 1.5) * std::pow(th, 1.5));
  out.gradient_term = 2.0 * b_n / (std::sqrt(std::numbers::pi * std::numbers::e) * (1.0 - h) * th);
  out.bound = out.chernoff_term + out.local_term + out.gradient_term;
  return out;
}

double rho_brute_force(const SmoothnessReport& report) {
  const auto& d = report.d_table;
  double best = 0.0;
  for (std::size_t p = 0; p < d.size(); ++p) {
    double s = 0.0;
    for (std::size_t q = p; q < d.size(); ++q) {
      s += d[q];
      best = std::max(best, std::abs(s));
    }
  }
  return best;
}

}  // namespace llt
