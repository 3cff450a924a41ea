#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace llt {

using Index = std::int64_t;

// Probability mass function of a random variable living on the lattice
// {v0 + D*k : k in Z}. The support is stored densely between the first and
// last index carrying positive mass; interior zeros are allowed.
class LatticePmf {
 public:
  // Normalizes the weights; duplicate indices are merged by addition.
  // Throws InputError for D <= 0, negative or non-finite weights, or an
  // all-zero weight vector.
  static LatticePmf make(double v0, double span,
                         std::span<const std::pair<Index, double>> entries);

  // Builds a pmf from a dense probability block starting at `first`. When
  // `normalize` is false the block is trusted to already sum to one (used
  // for exact convolution results).
  static LatticePmf from_dense(double v0, double span, Index first,
                               std::vector<double> probs,
                               bool normalize = true);

  static LatticePmf point_mass(double v0, double span, Index k = 0);

  double v0() const { return v0_; }
  double span() const { return span_; }
  Index first() const { return first_; }
  Index last() const { return first_ + static_cast<Index>(probs_.size()) - 1; }
  std::size_t size() const { return probs_.size(); }

  double operator[](Index k) const {
    if (k < first_ || k > last()) return 0.0;
    return probs_[static_cast<std::size_t>(k - first_)];
  }
  double value(Index k) const { return v0_ + span_ * static_cast<double>(k); }
  std::span<const double> probs() const { return probs_; }

  double total_mass() const;

  // Same law expressed on L(v0, span / factor); indices are multiplied.
  LatticePmf refined(Index factor) const;

 private:
  LatticePmf(double v0, double span, Index first, std::vector<double> probs)
      : v0_(v0), span_(span), first_(first), probs_(std::move(probs)) {}

  double v0_;
  double span_;
  Index first_;
  std::vector<double> probs_;
};

struct Moments {
  double mean;
  double variance;
};

struct Characteristics {
  double theta;
  double delta;
  double mean;
  double variance;
  Index maximal_span_multiple;
};

// sum_k min(f(k), f(k+1)): total mass available for Bernoulli extraction.
double theta(const LatticePmf& pmf);

// sum_k |f(k) - f(k+1)| over all of Z, boundary jumps included.
double delta_smoothness(const LatticePmf& pmf);

Moments moments(const LatticePmf& pmf);

// gcd of the differences between support indices; 0 for a point mass.
Index maximal_span_multiple(const LatticePmf& pmf);

Characteristics characteristics(const LatticePmf& pmf);

// Even convex weight function with psi(x)/x^2 and x^3/psi(x) non-decreasing
// on the positive half-line. Admissibility is spot-checked on a grid.
class Psi {
 public:
  Psi(std::string name, std::function<double(double)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  static Psi abs_cubed();
  static Psi square();

  double operator()(double x) const { return fn_(x); }
  const std::string& name() const { return name_; }

  // Throws HypothesisError naming the violated property.
  void check_admissible() const;

 private:
  std::string name_;
  std::function<double(double)> fn_;
};

// E psi(X) = sum_k psi(v_k) f(k). Runs psi.check_admissible() first.
double psi_moment(const LatticePmf& pmf, const Psi& psi);

}  // namespace llt
