#include "llt/bounds.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "llt/errors.hpp"
#include "llt/extraction.hpp"
#include "llt/normal.hpp"

namespace llt {

namespace {

constexpr double kThetaSlack = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_h(double h) {
  if (!(h > 0.0 && h < 1.0)) throw HypothesisError("h must lie in (0, 1), got " + fmt(h));
}

// Summands re-expressed on the finest common span.
std::vector<LatticePmf> on_common_lattice(std::span<const LatticePmf> summands) {
  if (summands.empty()) throw InputError("at least one summand is required");
  double fine = summands.front().span();
  for (const auto& s : summands) fine = std::min(fine, s.span());
  std::vector<LatticePmf> out;
  out.reserve(summands.size());
  for (const auto& s : summands) {
    const double r = s.span() / fine;
    const double rounded = std::round(r);
    if (std::abs(r - rounded) > 1e-9 * rounded) {
      throw InputError("summand spans are not integer multiples of the finest span " + fmt(fine));
    }
    out.push_back(s.refined(static_cast<Index>(rounded)));
  }
  return out;
}

// Central binomial row P{Bin(n,1/2) = z}, z = 0..n, by products from the mode.
std::vector<double> symmetric_binomial_row(Index n) {
  std::vector<double> row(static_cast<std::size_t>(n + 1), 0.0);
  const Index m = n / 2;
  // C(2m, m) / 4^m = prod_{i=1}^m (2i - 1) / (2i)
  double center = 1.0;
  for (Index i = 1; i <= m; ++i) {
    center *= static_cast<double>(2 * i - 1) / static_cast<double>(2 * i);
  }
  if (n % 2 == 1) center *= static_cast<double>(2 * m + 1) / static_cast<double>(2 * (m + 1));
  row[static_cast<std::size_t>(m)] = center;
  for (Index z = m; z < n; ++z) {
    row[static_cast<std::size_t>(z + 1)] =
        row[static_cast<std::size_t>(z)] * static_cast<double>(n - z) / static_cast<double>(z + 1);
  }
  for (Index z = m; z > 0; --z) {
    row[static_cast<std::size_t>(z - 1)] =
        row[static_cast<std::size_t>(z)] * static_cast<double>(z) / static_cast<double>(n - z + 1);
  }
  return row;
}

double gaussian_term(const SumShape& shape, double kappa, double inflation) {
  const double z = kappa - shape.mean;
  return shape.span / std::sqrt(2.0 * std::numbers::pi * shape.variance) *
         std::exp(-z * z / (2.0 * inflation * shape.variance));
}

void check_corollary_hypotheses(const char* which, double theta_n) {
  if (!(theta_n > 1.0)) {
    throw HypothesisError(std::string(which) + " hypothesis failed: Theta_n = " + fmt(theta_n) +
                          " must exceed 1");
  }
  const double ratio = std::log(theta_n) / theta_n;
  if (ratio > 1.0 / 14.0) {
    throw HypothesisError(std::string(which) + " hypothesis log(Theta_n)/Theta_n <= 1/14 failed: ratio = " +
                          fmt(ratio));
  }
}

BoundReport symmetric_report(std::string kind, const SumShape& shape, double kappa,
                             double half_width, BoundParams params) {
  const double g = gaussian_term(shape, kappa, 1.0);
  return {std::move(kind), kappa, std::nullopt, g, g - half_width, g + half_width, params};
}

}  // namespace

ConstantsRegistry ConstantsRegistry::make(double c0, double ce, std::string provenance) {
  if (!(c0 >= 0.0) || !(ce > 0.0)) throw InputError("constants C0 >= 0 and CE > 0 are required");
  const double c1 = std::max(4.0, c0);
  const double c2 = 12.0 * (c1 + 1.0);
  const double c3 = std::max(c2, std::pow(2.0, 1.5) * ce);
  return {c0, c1, c2, c3, ce, std::move(provenance)};
}

double bernoulli_llt_error(Index n) {
  if (n < 1) throw InputError("n must be >= 1");
  const auto row = symmetric_binomial_row(n);
  const double nd = static_cast<double>(n);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * nd));
  double sup = 0.0;
  for (Index z = 0; z <= n; ++z) {
    const double d = static_cast<double>(2 * z - n);
    const double g = amp * std::exp(-d * d / (2.0 * nd));
    sup = std::max(sup, std::abs(row[static_cast<std::size_t>(z)] - g));
  }
  return sup;
}

C0Calibration calibrate_c0_table(Index n_max) {
  if (n_max < 1) throw InputError("n_max must be >= 1");
  C0Calibration cal{0.0, n_max, 1, {}};
  cal.scaled_errors.reserve(static_cast<std::size_t>(n_max));
  for (Index n = 1; n <= n_max; ++n) {
    const double e = std::pow(static_cast<double>(n), 1.5) * bernoulli_llt_error(n);
    cal.scaled_errors.push_back(e);
    if (e > cal.c0) {
      cal.c0 = e;
      cal.argmax_n = n;
    }
  }
  return cal;
}

double calibrate_c0(Index n_max) { return calibrate_c0_table(n_max).c0; }

ConstantsRegistry calibrated_constants(Index n_max, double ce) {
  const auto cal = calibrate_c0_table(n_max);
  std::ostringstream os;
  os.precision(17);
  os << "C0 = " << cal.c0 << " empirical: exact binomial scan over 1 <= n <= " << n_max
     << " (max at n = " << cal.argmax_n << "), not certified for n > " << n_max
     << "; CE = " << ce << " literature default for the Esseen-type inequality";
  return ConstantsRegistry::make(cal.c0, ce, os.str());
}

double refined_bernoulli_comparison(Index n, Index z) {
  if (n < 1 || z < 0 || z > n) throw InputError("refined comparison needs n >= 1 and 0 <= z <= n");
  const double nd = static_cast<double>(n);
  const double w = static_cast<double>(2 * z - n) / std::sqrt(nd);
  auto integrand = [w, nd](double v) {
    return std::cos(w * v) * std::exp(-0.5 * v * v - v * v * v * v / (12.0 * nd));
  };
  // the integrand is even: integrate over [0, 12] and double. Fixed panels
  // of width 1/4 keep the phase per panel below 8 radians for n <= 1024.
  constexpr int kPanels = 48;
  const double width = 12.0 / kPanels;
  double half = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    half += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, i * width, (i + 1) * width, 0, 0.0);
  }
  return 2.0 * half / (std::numbers::pi * std::sqrt(nd));
}

double chernoff_rho(std::span<const double> thetas, double h) {
  check_h(h);
  double theta_n = 0.0;
  for (double t : thetas) {
    if (!(t > 0.0) || t > 1.0) throw InputError("theta_j must lie in (0, 1], got " + fmt(t));
    theta_n += t;
  }
  return 2.0 * std::exp(-h * h * theta_n / (2.0 * (1.0 + h / 3.0)));
}

double h_default(double theta_n) {
  check_corollary_hypotheses("h_n", theta_n);
  return std::sqrt(7.0 * std::log(theta_n) / (2.0 * theta_n));
}

double h_n_formula(double theta_n) {
  if (!(theta_n > 1.0)) throw HypothesisError("h_n needs Theta_n > 1, got " + fmt(theta_n));
  const double h = std::sqrt(7.0 * std::log(theta_n) / (2.0 * theta_n));
  if (!(h < 1.0)) throw HypothesisError("h_n = " + fmt(h) + " is not below 1");
  return h;
}

const char* to_string(PlugInMode mode) {
  return mode == PlugInMode::Exact ? "exact-plug-ins" : "bounded-plug-ins";
}

std::vector<double> maximal_thetas(std::span<const LatticePmf> summands) {
  const auto common = on_common_lattice(summands);
  std::vector<double> out;
  out.reserve(common.size());
  for (const auto& s : common) out.push_back(theta(s));
  return out;
}

SumShape sum_shape(std::span<const LatticePmf> summands, std::span<const double> thetas) {
  const auto common = on_common_lattice(summands);
  if (thetas.size() != common.size()) {
    throw InputError("need one extraction level per summand (" + std::to_string(common.size()) +
                     " summands, " + std::to_string(thetas.size()) + " levels)");
  }
  SumShape shape{common.front().span(), 0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < common.size(); ++j) {
    const double tx = theta(common[j]);
    if (!(thetas[j] > 0.0) || thetas[j] > tx * (1.0 + kThetaSlack)) {
      throw HypothesisError("extraction level " + std::to_string(j) + " must satisfy 0 < theta_j <= theta_X = " +
                            fmt(tx) + ", got " + fmt(thetas[j]));
    }
    const auto m = moments(common[j]);
    shape.v0 += common[j].v0();
    shape.mean += m.mean;
    shape.variance += m.variance;
    shape.theta_n += thetas[j];
  }
  return shape;
}

LatticePmf conditional_sum_law(std::span<const LatticePmf> summands,
                               std::span<const double> thetas) {
  const auto common = on_common_lattice(summands);
  if (thetas.size() != common.size()) throw InputError("need one extraction level per summand");
  std::vector<LatticePmf> xis;
  xis.reserve(common.size());
  for (std::size_t j = 0; j < common.size(); ++j) {
    xis.push_back(xi_law(split(common[j], std::min(thetas[j], theta(common[j])))));
  }
  return convolve_all(xis).pmf;
}

PlugIns exact_plug_ins(std::span<const LatticePmf> summands, std::span<const double> thetas,
                       double h) {
  check_h(h);
  const auto shape = sum_shape(summands, thetas);
  const double var_prime = shape.variance - shape.span * shape.span * shape.theta_n / 4.0;
  if (!(var_prime > 0.0)) {
    throw HypothesisError("Var(S'_n) = " + fmt(var_prime) + " is not positive; H_n is undefined");
  }
  const auto law = conditional_sum_law(summands, thetas);
  const double h_n = kolmogorov_distance(law, shape.mean, std::sqrt(var_prime));
  const double rho = poisson_binomial(thetas).tail(h);
  return {h_n, rho, PlugInMode::Exact};
}

double lyapunov_ratio(std::span<const LatticePmf> summands, const Psi& psi) {
  double num = 0.0;
  double var = 0.0;
  for (const auto& s : summands) {
    num += psi_moment(s, psi);
    var += moments(s).variance;
  }
  if (!(var > 0.0)) throw HypothesisError("L_n needs Var(S_n) > 0");
  return num / psi(std::sqrt(var));
}

PlugIns bounded_plug_ins(std::span<const LatticePmf> summands, std::span<const double> thetas,
                         double h, const Psi& psi, const ConstantsRegistry& constants) {
  check_h(h);
  sum_shape(summands, thetas);
  const double h_n = std::pow(2.0, 1.5) * constants.ce * lyapunov_ratio(summands, psi);
  return {h_n, chernoff_rho(thetas, h), PlugInMode::Bounded};
}

std::optional<bool> BoundReport::contains_exact() const {
  if (!exact) return std::nullopt;
  return lower <= *exact && *exact <= upper;
}

Index lattice_index(const LatticePmf& pmf, double value) {
  const double r = (value - pmf.v0()) / pmf.span();
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(k))) {
    throw InputError("point " + fmt(value) + " is not on the lattice L(" + fmt(pmf.v0()) + ", " +
                     fmt(pmf.span()) + ")");
  }
  return static_cast<Index>(k);
}

double point_probability(const LatticePmf& pmf, double kappa) {
  return pmf[lattice_index(pmf, kappa)];
}

BoundReport sandwich_envelope(const SumShape& shape, double h, double kappa,
                              const PlugIns& plug_ins, const ConstantsRegistry& constants,
                              std::string kind) {
  check_h(h);
  if (!(shape.theta_n > 0.0)) throw HypothesisError("Theta_n must be positive");
  if (!(shape.variance > 0.0)) throw HypothesisError("Var(S_n) must be positive");
  const double r = (kappa - shape.v0) / shape.span;
  if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw InputError("kappa = " + fmt(kappa) + " is not on the sum lattice");
  }
  const double shrunk = (1.0 - h) * shape.theta_n;
  const double lead = constants.c1 / std::sqrt(shrunk);
  const double rho = plug_ins.rho_n;
  const double upper = (1.0 + h) / (1.0 - h) * gaussian_term(shape, kappa, 1.0 + h) +
                       lead * (plug_ins.h_n + 1.0 / shrunk) + rho;
  const double lower = (1.0 - h) / (1.0 + h) * gaussian_term(shape, kappa, 1.0 - h) -
                       lead * (plug_ins.h_n + 1.0 / shrunk + 2.0 * rho) - rho;
  BoundParams params{h, shape.theta_n, plug_ins.h_n, rho, shape.variance, shape.mean, plug_ins.mode};
  return {std::move(kind), kappa, std::nullopt, gaussian_term(shape, kappa, 1.0), lower, upper, params};
}

BoundReport ger1_envelope(std::span<const LatticePmf> summands, std::span<const double> thetas,
                          double h, double kappa, const PlugIns& plug_ins,
                          const ConstantsRegistry& constants) {
  return sandwich_envelope(sum_shape(summands, thetas), h, kappa, plug_ins, constants, "ger1");
}

BoundReport ger2_envelope(std::span<const LatticePmf> summands, std::span<const double> thetas,
                          double kappa, const PlugIns& plug_ins,
                          const ConstantsRegistry& constants) {
  const auto shape = sum_shape(summands, thetas);
  const double th = shape.theta_n;
  check_corollary_hypotheses("ger2", th);
  const double z = kappa - shape.mean;
  const double range = std::sqrt(th / (14.0 * std::log(th)));
  if (z * z / shape.variance > range) {
    throw HypothesisError("ger2 range (kappa - E S_n)^2 / Var(S_n) <= (Theta_n/(14 log Theta_n))^{1/2} failed: " +
                          fmt(z * z / shape.variance) + " > " + fmt(range));
  }
  const double w = constants.c2 * (shape.span * std::sqrt(std::log(th) / (shape.variance * th)) +
                                   (plug_ins.h_n + 1.0 / th) / std::sqrt(th));
  BoundParams params{h_default(th), th, plug_ins.h_n, plug_ins.rho_n, shape.variance, shape.mean,
                     plug_ins.mode};
  return symmetric_report("ger2", shape, kappa, w, params);
}

BoundReport ger3_envelope(std::span<const LatticePmf> summands, std::span<const double> thetas,
                          double kappa, const Psi& psi, const ConstantsRegistry& constants) {
  const auto shape = sum_shape(summands, thetas);
  const double th = shape.theta_n;
  check_corollary_hypotheses("ger3", th);
  const double z = kappa - shape.mean;
  const double range = std::sqrt(7.0 * std::log(th) / (2.0 * th));
  if (z * z / shape.variance > range) {
    throw HypothesisError("ger3 range (kappa - E S_n)^2 / Var(S_n) <= sqrt(7 log Theta_n / (2 Theta_n)) failed: " +
                          fmt(z * z / shape.variance) + " > " + fmt(range));
  }
  const double l_n = lyapunov_ratio(summands, psi);
  const double w = constants.c3 * (shape.span * std::sqrt(std::log(th) / (shape.variance * th)) +
                                   (l_n + 1.0 / th) / std::sqrt(th));
  const double h = h_default(th);
  BoundParams params{h, th, l_n, chernoff_rho(thetas, h), shape.variance, shape.mean,
                     PlugInMode::Bounded};
  return symmetric_report("ger3", shape, kappa, w, params);
}

double exp_moment_gaussian(double a, double b) {
  if (!(a > 0.0)) throw InputError("exp_moment_gaussian needs a > 0, got " + fmt(a));
  return std::exp(-b * b / (2.0 + 1.0 / a)) / std::sqrt(1.0 + 2.0 * a);
}

double DeMoivreBand::lower() const { return estimate * std::exp(-abs_log_error_bound); }
double DeMoivreBand::upper() const { return estimate * std::exp(abs_log_error_bound); }

DeMoivreBand de_moivre_envelope(Index n, double p, Index k, double gamma) {
  if (n < 1) throw InputError("n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InputError("p must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("gamma must lie in (0, 1)");
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  const double npq = nd * p * q;
  const double x = (static_cast<double>(k) - nd * p) / std::sqrt(npq);
  // |x| <= beta n^{1/6} with the largest admissible beta = gamma sqrt(pq) n^{1/3}
  const double limit = gamma * std::sqrt(p * q) * std::sqrt(nd);
  if (std::abs(x) > limit) {
    throw HypothesisError("De Moivre-Laplace range |x| <= gamma sqrt(pq) sqrt(n) failed: |x| = " +
                          fmt(std::abs(x)) + " > " + fmt(limit));
  }
  const double ax = std::abs(x);
  const double estimate = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi * npq);
  const double bound = ax * ax * ax / std::sqrt(npq) + ax * ax * ax * ax / npq +
                       ax * ax * ax / (2.0 * std::pow(npq, 1.5)) +
                       1.0 / (4.0 * nd * std::min(p, q) * (1.0 - gamma));
  return {estimate, bound};
}

}  // namespace llt
