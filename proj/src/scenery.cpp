#include "llt/scenery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "llt/convolve.hpp"
#include "llt/errors.hpp"
#include "llt/extraction.hpp"

namespace llt {

namespace {

constexpr double kThetaSlack = 1e-12;
constexpr double kEnumerationBudget = 5e7;

// Increment law re-expressed on the integers with span 1 and offset 0.
LatticePmf integer_law(const LatticePmf& pmf) {
  std::vector<std::pair<Index, double>> entries;
  for (Index k = pmf.first(); k <= pmf.last(); ++k) {
    if (pmf[k] <= 0.0) continue;
    const double v = pmf.value(k);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) {
      throw InputError("increment values must be integers, got " + std::to_string(v));
    }
    entries.emplace_back(static_cast<Index>(r), pmf[k]);
  }
  return LatticePmf::make(0.0, 1.0, entries);
}

std::vector<LatticePmf> index_laws(const SceneryModel& model) {
  std::vector<LatticePmf> laws;
  laws.reserve(static_cast<std::size_t>(model.n) + 1);
  laws.push_back(LatticePmf::point_mass(0.0, 1.0, 0));
  for (int j = 1; j <= model.n; ++j) laws.push_back(convolve(laws.back(), model.increments));
  return laws;
}

void check_step(const SceneryModel& model, int j, const char* name) {
  if (j < 1 || j > model.n) {
    throw InputError(std::string(name) + " must lie in 1..n, got " + std::to_string(j));
  }
}

double site_theta(const SceneryModel& model, Index r) { return model.profile.at(r); }

}  // namespace

VarthetaProfile VarthetaProfile::constant(double vartheta) {
  VarthetaProfile p;
  p.constant_ = vartheta;
  return p;
}

VarthetaProfile VarthetaProfile::table(std::map<Index, double> values) {
  VarthetaProfile p;
  p.table_ = std::move(values);
  return p;
}

double VarthetaProfile::at(Index r) const {
  if (constant_) return *constant_;
  const auto it = table_.find(r);
  if (it == table_.end()) {
    throw InputError("vartheta profile has no value for reachable site r = " + std::to_string(r));
  }
  return it->second;
}

SceneryModel SceneryModel::make(LatticePmf x_law, LatticePmf increments, int n,
                                VarthetaProfile profile, bool allow_general_increments) {
  if (n < 0) throw InputError("number of steps n must be >= 0");
  SceneryModel model{std::move(x_law), integer_law(increments), n, std::move(profile)};
  if (!allow_general_increments && !model.positive_increments()) {
    throw InputError("increments must take values in {1, 2, ...}");
  }
  const double tx = theta(model.x_law);
  if (!(tx > 0.0)) throw HypothesisError("scenery law has theta_X = 0; no Bernoulli part to extract");
  const auto laws = index_laws(model);
  for (int j = 1; j <= n; ++j) {
    const auto& u = laws[static_cast<std::size_t>(j)];
    for (Index r = u.first(); r <= u.last(); ++r) {
      if (u[r] <= 0.0) continue;
      const double t = model.profile.at(r);
      if (!(t > 0.0) || t > tx * (1.0 + kThetaSlack)) {
        throw HypothesisError("vartheta_r at site " + std::to_string(r) +
                              " must lie in (0, theta_X = " + std::to_string(tx) + "]");
      }
    }
  }
  return model;
}

bool SceneryModel::positive_increments() const { return increments.first() >= 1; }

bool SceneryModel::deterministic_index() const { return increments.size() == 1; }

bool SceneryModel::independent_conditional_steps() const {
  return positive_increments() && (profile.is_constant() || deterministic_index());
}

LatticePmf index_law(const SceneryModel& model, int j) {
  if (j < 0) throw InputError("index law needs j >= 0");
  auto law = LatticePmf::point_mass(0.0, 1.0, 0);
  for (int i = 0; i < j; ++i) law = convolve(law, model.increments);
  return law;
}

std::vector<double> expected_thetas(const SceneryModel& model) {
  const auto laws = index_laws(model);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(model.n));
  for (int j = 1; j <= model.n; ++j) {
    const auto& u = laws[static_cast<std::size_t>(j)];
    double e = 0.0;
    for (Index r = u.first(); r <= u.last(); ++r) {
      if (u[r] > 0.0) e += site_theta(model, r) * u[r];
    }
    out.push_back(e);
  }
  return out;
}

double theta_n_scenery(const SceneryModel& model) {
  double sum = 0.0;
  for (double t : expected_thetas(model)) sum += t;
  return sum;
}

double c_hk(const SceneryModel& model, int h, int k) {
  check_step(model, h, "h");
  check_step(model, k, "k");
  if (h == k) throw InputError("c_hk is defined for h != k only");
  const int lo = std::min(h, k);
  const double sigma = index_law(model, std::abs(k - h))[0];
  if (sigma == 0.0) return 0.0;
  const auto u = index_law(model, lo);
  double e = 0.0;
  for (Index r = u.first(); r <= u.last(); ++r) {
    if (u[r] <= 0.0) continue;
    const double t = site_theta(model, r);
    e += (0.75 * t * t - 0.5 * t) * u[r];
  }
  return sigma * e;
}

namespace {

struct Atom {
  double x;        // contribution to S_n: v_k + eps D L
  double x_prime;  // contribution to S'_n: v_k + eps D/2
  double p;
};

std::vector<Atom> site_atoms(const LatticePmf& x_law, double vartheta) {
  const auto s = split(x_law, std::min(vartheta, theta(x_law)));
  const double d = x_law.span();
  std::vector<Atom> atoms;
  for (Index k = s.first(); k <= s.last(); ++k) {
    const double v = x_law.value(k);
    if (s.joint(k, 0) > 0.0) atoms.push_back({v, v, s.joint(k, 0)});
    if (s.joint(k, 1) > 0.0) {
      atoms.push_back({v, v + 0.5 * d, 0.5 * s.joint(k, 1)});
      atoms.push_back({v + d, v + 0.5 * d, 0.5 * s.joint(k, 1)});
    }
  }
  return atoms;
}

struct Enumerator {
  const SceneryModel& model;
  std::map<Index, std::vector<Atom>> atoms;
  std::vector<std::pair<Index, const Atom*>> assigned;
  double es = 0.0, es_prime = 0.0, es2 = 0.0, es2_prime = 0.0;

  const std::vector<Atom>& at(Index r) {
    auto it = atoms.find(r);
    if (it == atoms.end()) it = atoms.emplace(r, site_atoms(model.x_law, model.profile.at(r))).first;
    return it->second;
  }

  void leaf(double w, double s, double sp) {
    es += w * s;
    es_prime += w * sp;
    es2 += w * s * s;
    es2_prime += w * sp * sp;
  }

  void walk(int j, Index u, double w, double s, double sp) {
    if (j == model.n) {
      leaf(w, s, sp);
      return;
    }
    const auto& inc = model.increments;
    for (Index y = inc.first(); y <= inc.last(); ++y) {
      if (inc[y] <= 0.0) continue;
      const Index r = u + y;
      const double wy = w * inc[y];
      const auto hit = std::find_if(assigned.begin(), assigned.end(),
                                    [r](const auto& e) { return e.first == r; });
      if (hit != assigned.end()) {
        walk(j + 1, r, wy, s + hit->second->x, sp + hit->second->x_prime);
        continue;
      }
      for (const auto& a : at(r)) {
        assigned.emplace_back(r, &a);
        walk(j + 1, r, wy * a.p, s + a.x, sp + a.x_prime);
        assigned.pop_back();
      }
    }
  }
};

}  // namespace

SceneryMoments second_moment_check(const SceneryModel& model, int max_n) {
  if (model.n > max_n) {
    throw InputError("exact enumeration is capped at n = " + std::to_string(max_n) +
                     "; use Monte Carlo for n = " + std::to_string(model.n));
  }
  const double per_step = static_cast<double>(model.increments.size()) *
                          3.0 * static_cast<double>(model.x_law.size());
  if (std::pow(per_step, model.n) > kEnumerationBudget) {
    throw InputError("instance too large for exact enumeration");
  }
  Enumerator en{model, {}, {}};
  en.walk(0, 0, 1.0, 0.0, 0.0);

  SceneryMoments out{};
  out.theta_n = theta_n_scenery(model);
  const auto n = static_cast<std::size_t>(model.n);
  out.c_matrix.assign(n, std::vector<double>(n, 0.0));
  double csum = 0.0;
  for (int h = 1; h <= model.n; ++h) {
    for (int k = 1; k <= model.n; ++k) {
      if (h == k) continue;
      const double c = c_hk(model, h, k);
      out.c_matrix[static_cast<std::size_t>(h - 1)][static_cast<std::size_t>(k - 1)] = c;
      csum += c;
    }
  }
  out.es = en.es;
  out.es_prime = en.es_prime;
  out.es2 = en.es2;
  out.es2_prime = en.es2_prime;
  const double d2 = model.x_law.span() * model.x_law.span();
  out.residual = out.es2 - (out.es2_prime + d2 * out.theta_n / 4.0 + d2 / 4.0 * csum);
  return out;
}

bool Interval::contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

double beta_indicator(const LatticePmf& x_law, const Interval& a) {
  const double tx = theta(x_law);
  if (!(tx > 0.0)) throw HypothesisError("beta needs theta_X > 0");
  const double d = x_law.span();
  auto ind = [&a](double t) { return a.contains(t) ? 1.0 : 0.0; };
  double sum = 0.0;
  for (Index k = x_law.first(); k < x_law.last(); ++k) {
    const double w = std::min(x_law[k], x_law[k + 1]);
    if (w <= 0.0) continue;
    const double v = x_law.value(k);
    sum += w / tx * (ind(v + d) - 2.0 * ind(v + 0.5 * d) + ind(v));
  }
  return -0.5 * sum;
}

CovarianceFactorization y_covariance_factorization(const SceneryModel& model, int h, int k,
                                                   const Interval& a, const Interval& b) {
  check_step(model, h, "h");
  check_step(model, k, "k");
  if (h == k) throw InputError("covariance factorization needs h != k");
  if (!model.positive_increments()) {
    throw HypothesisError("covariance factorization requires P{U_h = U_k} = 0 (positive increments)");
  }
  const int lo = std::min(h, k);
  const auto u_lo = index_law(model, lo);
  const auto gap = index_law(model, std::abs(k - h));

  std::map<Index, double> prob_a;
  std::map<Index, double> prob_b;
  auto xi_prob = [&model](Index r, const Interval& iv, std::map<Index, double>& cache) {
    const auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    const auto xi = xi_law(split(model.x_law, std::min(model.profile.at(r), theta(model.x_law))));
    double p = 0.0;
    for (Index i = xi.first(); i <= xi.last(); ++i) {
      if (iv.contains(xi.value(i))) p += xi[i];
    }
    cache.emplace(r, p);
    return p;
  };

  double joint = 0.0, mean_a = 0.0, mean_b = 0.0;
  double tt = 0.0, t_h = 0.0, t_k = 0.0;
  for (Index r = u_lo.first(); r <= u_lo.last(); ++r) {
    if (u_lo[r] <= 0.0) continue;
    for (Index g = gap.first(); g <= gap.last(); ++g) {
      if (gap[g] <= 0.0) continue;
      const double w = u_lo[r] * gap[g];
      const Index s = r + g;
      const Index site_h = h < k ? r : s;
      const Index site_k = h < k ? s : r;
      const double pa = xi_prob(site_h, a, prob_a);
      const double pb = xi_prob(site_k, b, prob_b);
      joint += w * pa * pb;
      mean_a += w * pa;
      mean_b += w * pb;
      const double th = model.profile.at(site_h);
      const double tk = model.profile.at(site_k);
      tt += w * th * tk;
      t_h += w * th;
      t_k += w * tk;
    }
  }
  CovarianceFactorization out{};
  out.lhs = joint - mean_a * mean_b;
  out.beta_a = beta_indicator(model.x_law, a);
  out.beta_b = beta_indicator(model.x_law, b);
  for (Index i = model.x_law.first(); i <= model.x_law.last(); ++i) {
    if (a.contains(model.x_law.value(i))) out.alpha_a += model.x_law[i];
    if (b.contains(model.x_law.value(i))) out.alpha_b += model.x_law[i];
  }
  out.theta_covariance = tt - t_h * t_k;
  out.rhs = out.beta_a * out.beta_b * out.theta_covariance;
  return out;
}

namespace {

std::vector<LatticePmf> step_laws(const SceneryModel& model) {
  return std::vector<LatticePmf>(static_cast<std::size_t>(model.n), model.x_law);
}

void require_independent_steps(const SceneryModel& model) {
  if (!model.positive_increments()) {
    throw HypothesisError("scenery envelope requires positive increments (no self-intersections)");
  }
  if (!model.independent_conditional_steps()) {
    throw HypothesisError(
        "H_n and rho_n plug-ins need independent Y_k: use a constant vartheta profile or a "
        "deterministic index process");
  }
}

}  // namespace

SumShape scenery_shape(const SceneryModel& model) {
  if (model.n < 1) throw InputError("scenery envelope needs n >= 1");
  if (!model.positive_increments()) {
    throw HypothesisError("scenery envelope requires positive increments (no self-intersections)");
  }
  const auto laws = step_laws(model);
  const auto thetas = expected_thetas(model);
  return sum_shape(laws, thetas);
}

PlugIns scenery_plug_ins(const SceneryModel& model, double h, PlugInMode mode,
                         const Psi& psi, const ConstantsRegistry& constants) {
  require_independent_steps(model);
  const auto laws = step_laws(model);
  std::vector<double> thetas;
  if (model.profile.is_constant()) {
    thetas.assign(static_cast<std::size_t>(model.n), *model.profile.constant_value());
  } else {
    const Index step = model.increments.first();
    for (int j = 1; j <= model.n; ++j) thetas.push_back(model.profile.at(step * j));
  }
  if (mode == PlugInMode::Exact) return exact_plug_ins(laws, thetas, h);
  return bounded_plug_ins(laws, thetas, h, psi, constants);
}

BoundReport lltrs_envelope(const SceneryModel& model, double h, double kappa,
                           const PlugIns& plug_ins, const ConstantsRegistry& constants) {
  return sandwich_envelope(scenery_shape(model), h, kappa, plug_ins, constants, "lltrs");
}

LatticePmf scenery_sum_law(const SceneryModel& model) {
  if (model.n < 1) throw InputError("scenery sum law needs n >= 1");
  if (!model.positive_increments()) throw HypothesisError("scenery sum law requires positive increments");
  const auto& x = model.x_law;
  const Index a = x.first();
  const auto width = static_cast<std::size_t>(x.last() + 1 - a + 1);
  std::map<Index, std::vector<double>> site_law;
  auto z_law = [&](Index r) -> const std::vector<double>& {
    auto it = site_law.find(r);
    if (it == site_law.end()) {
      const auto z = reconstruct(split(x, std::min(model.profile.at(r), theta(x))));
      std::vector<double> dense(width, 0.0);
      for (std::size_t i = 0; i < width; ++i) dense[i] = z[a + static_cast<Index>(i)];
      it = site_law.emplace(r, std::move(dense)).first;
    }
    return it->second;
  };
  // state[site] = weighted law of the partial sum index, offset by j * a
  std::map<Index, std::vector<double>> state{{0, {1.0}}};
  const auto& inc = model.increments;
  for (int j = 0; j < model.n; ++j) {
    std::map<Index, std::vector<double>> next;
    for (const auto& [u, law] : state) {
      for (Index y = inc.first(); y <= inc.last(); ++y) {
        if (inc[y] <= 0.0) continue;
        const Index r = u + y;
        const auto& z = z_law(r);
        auto& out = next[r];
        if (out.size() < law.size() + width - 1) out.resize(law.size() + width - 1, 0.0);
        for (std::size_t i = 0; i < law.size(); ++i) {
          const double wi = law[i] * inc[y];
          if (wi == 0.0) continue;
          for (std::size_t m = 0; m < width; ++m) out[i + m] += wi * z[m];
        }
      }
    }
    state = std::move(next);
  }
  std::vector<double> total;
  for (const auto& [u, law] : state) {
    if (total.size() < law.size()) total.resize(law.size(), 0.0);
    for (std::size_t i = 0; i < law.size(); ++i) total[i] += law[i];
  }
  const double nd = static_cast<double>(model.n);
  return LatticePmf::from_dense(nd * x.v0(), x.span(), a * model.n, std::move(total), false);
}

MonteCarloEstimate monte_carlo_point_probability(const SceneryModel& model, double kappa,
                                                 std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("Monte Carlo needs at least one sample");
  if (model.n < 1) throw InputError("Monte Carlo needs n >= 1");
  if (!model.positive_increments()) throw HypothesisError("Monte Carlo sampler requires positive increments");
  const auto& x = model.x_law;
  const double nd = static_cast<double>(model.n);
  const double r = (kappa - nd * x.v0()) / x.span();
  const double target_d = std::round(r);
  if (std::abs(r - target_d) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw InputError("kappa is not on the sum lattice");
  }
  const auto target = static_cast<Index>(target_d);

  const auto& inc = model.increments;
  std::vector<double> inc_w;
  for (Index y = inc.first(); y <= inc.last(); ++y) inc_w.push_back(inc[y]);
  std::discrete_distribution<int> inc_dist(inc_w.begin(), inc_w.end());

  // per-site law of (k, eps), indexed by 2 (k - first) + eps
  struct SiteSampler {
    std::discrete_distribution<int> dist;
  };
  std::map<Index, SiteSampler> samplers;
  auto sampler = [&](Index site) -> std::discrete_distribution<int>& {
    auto it = samplers.find(site);
    if (it == samplers.end()) {
      const auto s = split(x, std::min(model.profile.at(site), theta(x)));
      std::vector<double> w;
      for (Index k = s.first(); k <= s.last(); ++k) {
        w.push_back(s.joint(k, 0));
        w.push_back(s.joint(k, 1));
      }
      it = samplers.emplace(site, SiteSampler{std::discrete_distribution<int>(w.begin(), w.end())}).first;
    }
    return it->second.dist;
  };

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Index u = 0;
    Index sum = 0;
    for (int j = 0; j < model.n; ++j) {
      u += inc.first() + inc_dist(rng);
      const int atom = sampler(u)(rng);
      const Index k = x.first() + atom / 2;
      const int eps = atom % 2;
      sum += k + (eps == 1 && coin(rng) ? 1 : 0);
    }
    if (sum == target) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples, hits};
}

}  // namespace llt
