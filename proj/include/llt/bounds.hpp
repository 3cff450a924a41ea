#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llt/convolve.hpp"
#include "llt/lattice.hpp"

namespace llt {

inline constexpr double kDefaultEsseenConstant = 0.5600;
inline constexpr Index kDefaultC0Scan = 10000;

// Numerical constants of the effective envelopes.
//   C1 = max(4, C0), C2 = 12 (C1 + 1), C3 = max(C2, 2^{3/2} CE)
struct ConstantsRegistry {
  double c0;
  double c1;
  double c2;
  double c3;
  double ce;
  std::string provenance;

  static ConstantsRegistry make(double c0, double ce, std::string provenance);
};

// sup_z |P{Bin(n,1/2) = z} - sqrt(2/(pi n)) exp(-(2z-n)^2/(2n))| over z = 0..n.
double bernoulli_llt_error(Index n);

struct C0Calibration {
  double c0;
  Index n_max;
  Index argmax_n;
  std::vector<double> scaled_errors;  // [n-1] = n^{3/2} * bernoulli_llt_error(n)
};

C0Calibration calibrate_c0_table(Index n_max);

// max_{1 <= n <= n_max} n^{3/2} bernoulli_llt_error(n)
double calibrate_c0(Index n_max);

// C0 from an exact scan up to n_max, CE as given; provenance records both.
ConstantsRegistry calibrated_constants(Index n_max = kDefaultC0Scan,
                                       double ce = kDefaultEsseenConstant);

// Second-order comparison term for P{Bin(n,1/2) = z}:
//   (1/(pi sqrt n)) * int_R cos((2z-n) v / sqrt n) exp(-v^2/2 - v^4/(12 n)) dv,
// i.e. sqrt(2/(pi n)) times the integral against the standard Gaussian
// measure. Truncated at |v| <= 12.
double refined_bernoulli_comparison(Index n, Index z);

// 2 exp(-h^2 Theta_n / (2 (1 + h/3))), an upper bound for rho_n(h).
double chernoff_rho(std::span<const double> thetas, double h);

// sqrt(7 log(Theta_n) / (2 Theta_n)); requires Theta_n > 1 and
// log(Theta_n)/Theta_n <= 1/14, which guarantees a result <= 1/2.
double h_default(double theta_n);

// The same expression without the 1/14 hypothesis; requires Theta_n > 1 and
// a value below 1, so it is usable as the free parameter of the sandwich.
double h_n_formula(double theta_n);

enum class PlugInMode { Exact, Bounded };

const char* to_string(PlugInMode mode);

// Values (or upper bounds) for the Kolmogorov distance H_n of the
// standardized conditional sum S'_n and the tail rho_n(h) of B_n.
struct PlugIns {
  double h_n;
  double rho_n;
  PlugInMode mode;
};

// Summary of the independent sum that the envelopes consume.
struct SumShape {
  double span;
  double v0;  // offset of the sum lattice
  double mean;
  double variance;
  double theta_n;
};

// Validates 0 < theta_j <= theta_{X_j} and a common compatible lattice.
SumShape sum_shape(std::span<const LatticePmf> summands, std::span<const double> thetas);

// Maximal extraction levels theta_{X_j}.
std::vector<double> maximal_thetas(std::span<const LatticePmf> summands);

// Law of S'_n = sum_j (V_j + (D/2) eps_j).
LatticePmf conditional_sum_law(std::span<const LatticePmf> summands,
                               std::span<const double> thetas);

// H_n from the exact S'_n law, rho_n(h) from the exact Poisson-binomial tail.
PlugIns exact_plug_ins(std::span<const LatticePmf> summands,
                       std::span<const double> thetas, double h);

// H_n <= 2^{3/2} CE L_n and the Chernoff bound for rho_n(h).
PlugIns bounded_plug_ins(std::span<const LatticePmf> summands,
                         std::span<const double> thetas, double h, const Psi& psi,
                         const ConstantsRegistry& constants);

// L_n = sum_j E psi(X_j) / psi(sqrt(Var S_n))
double lyapunov_ratio(std::span<const LatticePmf> summands, const Psi& psi);

struct BoundParams {
  double h;
  double theta_n;
  double h_n_used;
  double rho_n_used;
  double variance;
  double mean;
  PlugInMode mode;
};

struct BoundReport {
  std::string kind;
  double kappa;
  std::optional<double> exact;
  double gaussian;
  double lower;
  double upper;
  BoundParams params;

  bool lower_negative() const { return lower < 0.0; }
  // nullopt when no exact probability is attached
  std::optional<bool> contains_exact() const;
  double width() const { return upper - lower; }
};

// Sandwich around P{S_n = kappa} for any 0 < h < 1:
//   upper = (1+h)/(1-h) g_{1+h} + C1/sqrt((1-h) Theta) (H + 1/((1-h) Theta)) + rho
//   lower = (1-h)/(1+h) g_{1-h} - C1/sqrt((1-h) Theta) (H + 1/((1-h) Theta) + 2 rho) - rho
// with g_s = D/sqrt(2 pi Var) exp(-(kappa - E S_n)^2 / (2 s Var)). The lower
// envelope is reported unclamped.
BoundReport sandwich_envelope(const SumShape& shape, double h, double kappa,
                              const PlugIns& plug_ins, const ConstantsRegistry& constants,
                              std::string kind = "ger1");

BoundReport ger1_envelope(std::span<const LatticePmf> summands,
                          std::span<const double> thetas, double h, double kappa,
                          const PlugIns& plug_ins, const ConstantsRegistry& constants);

// Symmetric envelope of half-width
//   C2 (D sqrt(log Theta / (Var Theta)) + (H + 1/Theta) / sqrt(Theta))
// around the Gaussian term. Requires log(Theta)/Theta <= 1/14 and
// (kappa - E S_n)^2 / Var <= sqrt(Theta / (14 log Theta)).
BoundReport ger2_envelope(std::span<const LatticePmf> summands,
                          std::span<const double> thetas, double kappa,
                          const PlugIns& plug_ins, const ConstantsRegistry& constants);

// Same shape as ger2 with H replaced by L_n and C2 by C3; admissible range
// (kappa - E S_n)^2 / Var <= sqrt(7 log Theta / (2 Theta)).
BoundReport ger3_envelope(std::span<const LatticePmf> summands,
                          std::span<const double> thetas, double kappa, const Psi& psi,
                          const ConstantsRegistry& constants);

// E exp(-a (b - g)^2) for standard normal g.
double exp_moment_gaussian(double a, double b);

struct DeMoivreBand {
  double estimate;
  double abs_log_error_bound;

  double lower() const;
  double upper() const;
};

// exp(-x^2/2) / sqrt(2 pi n p q) with a bound on |log(P{S_n = k} / estimate)|;
// requires |x| <= gamma sqrt(pq) sqrt(n).
DeMoivreBand de_moivre_envelope(Index n, double p, Index k, double gamma);

// P{S = kappa} for a lattice point of the sum law; throws if off-lattice.
double point_probability(const LatticePmf& pmf, double kappa);

// Lattice index of `value`; throws InputError when `value` is off-lattice.
Index lattice_index(const LatticePmf& pmf, double value);

}  // namespace llt
