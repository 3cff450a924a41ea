#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "llt/bounds.hpp"
#include "llt/lattice.hpp"

namespace llt {

// r -> vartheta_r, either a constant or an explicit table over the sites the
// walk can reach.
class VarthetaProfile {
 public:
  static VarthetaProfile constant(double vartheta);
  static VarthetaProfile table(std::map<Index, double> values);

  bool is_constant() const { return constant_.has_value(); }
  // Throws InputError for a site missing from the table.
  double at(Index r) const;
  const std::map<Index, double>& values() const { return table_; }
  std::optional<double> constant_value() const { return constant_; }

 private:
  std::optional<double> constant_;
  std::map<Index, double> table_;
};

// S_n = sum_{j<=n} X_{U_j} with i.i.d. scenery X_r and U_j = Y_1 + ... + Y_j
// for i.i.d. integer increments Y_i independent of the scenery.
struct SceneryModel {
  LatticePmf x_law;
  LatticePmf increments;
  int n;
  VarthetaProfile profile;

  // Validates the profile over the reachable sites. Increments must be
  // positive integers unless `allow_general_increments` is set (used only
  // for testing the self-intersection terms).
  static SceneryModel make(LatticePmf x_law, LatticePmf increments, int n,
                           VarthetaProfile profile, bool allow_general_increments = false);

  bool positive_increments() const;
  // U_j is non-random (the increment law is a point mass).
  bool deterministic_index() const;
  // Y_k = V_{U_k} + (D/2) eps_{U_k} are independent: positive increments and
  // either a constant profile or a deterministic index.
  bool independent_conditional_steps() const;
};

// Law of U_j as a pmf on the integers (span 1, v0 0); j = 0 is the point mass at 0.
LatticePmf index_law(const SceneryModel& model, int j);

// Theta_n = sum_j E vartheta_{U_j}
double theta_n_scenery(const SceneryModel& model);

// E vartheta_{U_j} for j = 1..n, in summation order.
std::vector<double> expected_thetas(const SceneryModel& model);

// sigma_{|k-h|} E(3 vartheta^2_{U_min(h,k)}/4 - vartheta_{U_min(h,k)}/2), sigma_m = P{U_m = 0}.
double c_hk(const SceneryModel& model, int h, int k);

struct SceneryMoments {
  double theta_n;
  std::vector<std::vector<double>> c_matrix;  // [h-1][k-1], zero diagonal
  double es;
  double es_prime;
  double es2;
  double es2_prime;
  // es2 - (es2_prime + D^2 theta_n / 4 + D^2/4 sum_{h != k} c_hk)
  double residual;
};

inline constexpr int kSceneryEnumerationCap = 5;

// Exact enumeration over increment paths and the per-site (V, eps, L)
// outcomes. Throws InputError above the step cap or a state budget.
SceneryMoments second_moment_check(const SceneryModel& model,
                                   int max_n = kSceneryEnumerationCap);

struct Interval {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x) const;
};

struct CovarianceFactorization {
  double lhs;  // Cov(1_A(Y_h), 1_B(Y_k)) from the exact joint law
  double rhs;  // beta_A beta_B Cov(vartheta_{U_h}, vartheta_{U_k})
  double beta_a;
  double beta_b;
  double alpha_a;
  double alpha_b;
  double theta_covariance;
};

// beta_phi = -1/2 sum_k (f(k) ^ f(k+1)) / theta_X * (phi(v_k + D) - 2 phi(v_k + D/2) + phi(v_k))
double beta_indicator(const LatticePmf& x_law, const Interval& a);

CovarianceFactorization y_covariance_factorization(const SceneryModel& model, int h, int k,
                                                   const Interval& a, const Interval& b);

// Per-step laws of X_{U_j} (all equal to x_law) and their extraction
// levels E vartheta_{U_j}.
SumShape scenery_shape(const SceneryModel& model);

// H_n and rho_n(h) for the scenery sum. Requires independent conditional
// steps; throws HypothesisError otherwise.
PlugIns scenery_plug_ins(const SceneryModel& model, double h, PlugInMode mode,
                         const Psi& psi, const ConstantsRegistry& constants);

// The sandwich with vartheta_j replaced by vartheta_{U_j}.
BoundReport lltrs_envelope(const SceneryModel& model, double h, double kappa,
                           const PlugIns& plug_ins, const ConstantsRegistry& constants);

// Exact law of S_n through the (V, eps, L) representation, by dynamic
// programming over the current site. Positive increments only.
LatticePmf scenery_sum_law(const SceneryModel& model);

struct MonteCarloEstimate {
  double estimate;
  double std_error;
  std::uint64_t samples;
  std::uint64_t hits;
};

// Simulates U, then (V_r, eps_r, L_r) at each visited site; seeded mt19937_64.
MonteCarloEstimate monte_carlo_point_probability(const SceneryModel& model, double kappa,
                                                 std::uint64_t samples, std::uint64_t seed);

}  // namespace llt
