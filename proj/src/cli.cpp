#include "llt/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>

#include "llt/bounds.hpp"
#include "llt/convolve.hpp"
#include "llt/errors.hpp"
#include "llt/extraction.hpp"
#include "llt/gamkrelidze.hpp"
#include "llt/io.hpp"
#include "llt/partition.hpp"
#include "llt/scenery.hpp"

namespace llt::cli {

using io::Json;

namespace {

const ConstantsRegistry& calibrated(Index scan) {
  static std::mutex mu;
  static std::map<Index, ConstantsRegistry> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(scan);
  if (it == cache.end()) it = cache.emplace(scan, calibrated_constants(scan)).first;
  return it->second;
}

Psi make_psi(const std::string& name) {
  if (name == "abs_cubed") return Psi::abs_cubed();
  if (name == "square") return Psi::square();
  throw InputError("unknown psi '" + name + "' (expected abs_cubed or square)");
}

std::string csv_cell(const std::optional<double>& x) { return x ? io::format_number(*x) : ""; }
std::string csv_cell(const std::optional<bool>& x) { return x ? (*x ? "true" : "false") : ""; }

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }
Json optional_json(const std::optional<bool>& x) { return x ? Json(*x) : Json(nullptr); }

// Summands of the independent sum, cycling through the input list up to n.
struct SumInput {
  std::vector<LatticePmf> laws;
  std::vector<double> thetas;
};

SumInput load_sum(const RunConfig& config) {
  if (config.input_path.empty()) throw InputError("an input file is required");
  const auto base = io::summands_from_json(io::read_json_file(config.input_path));
  const int n = config.n.value_or(static_cast<int>(base.size()));
  if (n < 1) throw InputError("--n must be >= 1");
  SumInput in;
  for (int j = 0; j < n; ++j) in.laws.push_back(base[static_cast<std::size_t>(j) % base.size()]);
  if (config.vartheta) {
    in.thetas.assign(in.laws.size(), *config.vartheta);
  } else {
    in.thetas = maximal_thetas(in.laws);
  }
  return in;
}

double nearest_lattice_point(const SumShape& shape, double x) {
  return shape.v0 + shape.span * std::round((x - shape.v0) / shape.span);
}

std::vector<double> lattice_points(const SumShape& shape, double lo, double hi) {
  std::vector<double> out;
  if (!(lo <= hi)) return out;
  const auto first = static_cast<Index>(std::ceil((lo - shape.v0) / shape.span - 1e-9));
  const auto last = static_cast<Index>(std::floor((hi - shape.v0) / shape.span + 1e-9));
  for (Index i = first; i <= last; ++i) out.push_back(shape.v0 + shape.span * static_cast<double>(i));
  return out;
}

struct BoundContext {
  SumInput in;
  SumShape shape;
  SumLaw sum;
  ConstantsRegistry constants;
  Psi psi;
  double h;
  PlugIns plug_ins;
};

BoundContext bound_context(const RunConfig& config) {
  auto in = load_sum(config);
  const auto shape = sum_shape(in.laws, in.thetas);
  auto sum = convolve_all(in.laws);
  auto constants = resolve_constants(config);
  auto psi = make_psi(config.psi);
  double h = 0.0;
  if (config.kind == "ger1") {
    h = config.h ? *config.h : h_default(shape.theta_n);
  } else if (config.kind == "ger2" || config.kind == "ger3") {
    try {
      h = h_default(shape.theta_n);
    } catch (const HypothesisError& e) {
      throw HypothesisError(config.kind + ": " + e.what());
    }
  } else {
    throw InputError("unknown envelope kind '" + config.kind + "' (expected ger1, ger2 or ger3)");
  }
  PlugIns plug{};
  if (config.kind != "ger3") {
    plug = config.mode == PlugInMode::Exact
               ? exact_plug_ins(in.laws, in.thetas, h)
               : bounded_plug_ins(in.laws, in.thetas, h, psi, constants);
  }
  return {std::move(in), shape, std::move(sum), std::move(constants), std::move(psi), h, plug};
}

BoundReport envelope_at(const BoundContext& ctx, const std::string& kind, double kappa) {
  BoundReport r = [&] {
    if (kind == "ger1") return ger1_envelope(ctx.in.laws, ctx.in.thetas, ctx.h, kappa, ctx.plug_ins, ctx.constants);
    if (kind == "ger2") return ger2_envelope(ctx.in.laws, ctx.in.thetas, kappa, ctx.plug_ins, ctx.constants);
    return ger3_envelope(ctx.in.laws, ctx.in.thetas, kappa, ctx.psi, ctx.constants);
  }();
  r.exact = point_probability(ctx.sum.pmf, kappa);
  return r;
}

SweepRow to_row(const BoundReport& r) {
  return {r.kappa, r.exact, r.gaussian, r.lower, r.upper, r.width(), r.contains_exact()};
}

void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "kappa,exact,gaussian,lower,upper,envelope_width,contains_exact\n";
  for (const auto& r : rows) {
    out << io::format_number(r.kappa) << ',' << csv_cell(r.exact) << ',' << io::format_number(r.gaussian)
        << ',' << io::format_number(r.lower) << ',' << io::format_number(r.upper) << ','
        << io::format_number(r.envelope_width) << ',' << csv_cell(r.contains_exact) << '\n';
  }
}

Json rows_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"kappa", r.kappa},
                       {"exact", optional_json(r.exact)},
                       {"gaussian", r.gaussian},
                       {"lower", r.lower},
                       {"upper", r.upper},
                       {"envelope_width", r.envelope_width},
                       {"contains_exact", optional_json(r.contains_exact)}});
  }
  return arr;
}

void run_characteristics(const RunConfig& config, std::ostream& out) {
  const auto pmf = io::pmf_from_json(io::read_json_file(config.input_path));
  const auto c = characteristics(pmf);
  if (config.output_format == OutputFormat::Csv) {
    out << "theta,delta,mean,variance,span_multiple\n"
        << io::format_number(c.theta) << ',' << io::format_number(c.delta) << ','
        << io::format_number(c.mean) << ',' << io::format_number(c.variance) << ','
        << c.maximal_span_multiple << '\n';
    return;
  }
  io::write_json(out, io::characteristics_to_json(c));
}

void run_split(const RunConfig& config, std::ostream& out) {
  const auto pmf = io::pmf_from_json(io::read_json_file(config.input_path));
  const auto s = config.vartheta ? split(pmf, *config.vartheta) : split(pmf);
  if (config.output_format == OutputFormat::Csv) {
    out << "k,value,f,tau,joint0,joint1\n";
    for (Index k = s.first(); k <= s.last(); ++k) {
      out << k << ',' << io::format_number(pmf.value(k)) << ',' << io::format_number(pmf[k]) << ','
          << io::format_number(s.tau_at(k)) << ',' << io::format_number(s.joint(k, 0)) << ','
          << io::format_number(s.joint(k, 1)) << '\n';
    }
    return;
  }
  io::write_json(out, io::split_to_json(s));
}

void run_llt_bound(const RunConfig& config, std::ostream& out) {
  if (config.kappa_min || config.kappa_max) {
    if (!config.kappa_min || !config.kappa_max) {
      throw InputError("a sweep needs both --kappa-min and --kappa-max");
    }
    const auto rows = sweep(config, *config.kappa_min, *config.kappa_max);
    if (config.output_format == OutputFormat::Csv) {
      write_rows_csv(out, rows);
      return;
    }
    io::write_json(out, Json{{"kind", config.kind},
                             {"constants", io::constants_to_json(resolve_constants(config))},
                             {"rows", rows_json(rows)}});
    return;
  }
  const auto ctx = bound_context(config);
  const double kappa = config.kappa ? *config.kappa : nearest_lattice_point(ctx.shape, ctx.shape.mean);
  const auto r = envelope_at(ctx, config.kind, kappa);
  if (config.output_format == OutputFormat::Csv) {
    write_rows_csv(out, {to_row(r)});
    return;
  }
  auto j = io::report_to_json(r);
  j["constants"] = io::constants_to_json(ctx.constants);
  io::write_json(out, j);
}

void run_gamkrelidze(const RunConfig& config, std::ostream& out) {
  const auto in = load_sum(config);
  const auto sum = convolve_all(in.laws);
  const double a = config.a_n.value_or(sum.mean);
  const double b = config.b_n.value_or(sum.variance);
  const auto rep = interval_discrepancy(sum, a, b);
  const auto check = effective_pointwise_bound(rep);
  const auto step = ell_step(rep);
  if (config.output_format == OutputFormat::Csv) {
    out << "k,p,ell,d,first_lhs,second_lhs,first_ok,second_ok\n";
    for (std::size_t i = 0; i < check.rows.size(); ++i) {
      const auto& row = check.rows[i];
      out << row.k << ',' << io::format_number(rep.p_table[i]) << ',' << io::format_number(rep.ell_table[i])
          << ',' << io::format_number(rep.d_table[i]) << ',' << io::format_number(row.first_lhs) << ','
          << io::format_number(row.second_lhs) << ',' << (row.first_ok ? "true" : "false") << ','
          << (row.second_ok ? "true" : "false") << '\n';
    }
    return;
  }
  const auto shape = sum_shape(in.laws, in.thetas);
  const double h = config.h ? *config.h : h_default(shape.theta_n);
  const auto constants = resolve_constants(config);
  const auto mb = smoothness_via_extraction(in.laws, in.thetas, h, b, constants);
  Json table = Json::array();
  for (std::size_t i = 0; i < rep.d_table.size(); ++i) {
    table.push_back(Json::array({rep.first_k + static_cast<Index>(i), rep.p_table[i], rep.ell_table[i], rep.d_table[i]}));
  }
  io::write_json(out, Json{{"M", rep.M},
                           {"R", rep.R},
                           {"rho", rep.rho},
                           {"a_n", rep.a_n},
                           {"b_n", rep.b_n},
                           {"first_rhs", check.first_rhs},
                           {"second_rhs", check.second_rhs},
                           {"first_min_slack", check.first_min_slack},
                           {"second_min_slack", check.second_min_slack},
                           {"pointwise_ok", check.all_ok()},
                           {"ell_max_step", step.max_step},
                           {"ell_step_bound", step.bound},
                           {"M_bound", Json{{"h", h},
                                            {"bound", mb.bound},
                                            {"chernoff_term", mb.chernoff_term},
                                            {"local_term", mb.local_term},
                                            {"gradient_term", mb.gradient_term},
                                            {"b_over_theta", mb.b_over_theta},
                                            {"theta_n", mb.theta_n},
                                            {"dominates_M", mb.bound >= rep.M}}},
                           {"constants", io::constants_to_json(constants)},
                           {"d_table", table}});
}

void run_scenery(const RunConfig& config, std::ostream& out) {
  if (config.input_path.empty()) throw InputError("an input file is required");
  auto j = io::read_json_file(config.input_path);
  if (config.n) j["n"] = *config.n;
  const auto model = io::scenery_from_json(j);
  const auto constants = resolve_constants(config);
  const auto shape = scenery_shape(model);
  const double h = config.h ? *config.h : h_default(shape.theta_n);
  const double kappa = config.kappa ? *config.kappa : nearest_lattice_point(shape, shape.mean);
  const auto plug = scenery_plug_ins(model, h, config.mode, make_psi(config.psi), constants);
  auto r = lltrs_envelope(model, h, kappa, plug, constants);
  const auto law = scenery_sum_law(model);
  r.exact = point_probability(law, kappa);

  Json moments = nullptr;
  if (model.n <= kSceneryEnumerationCap) {
    try {
      const auto m = second_moment_check(model);
      moments = Json{{"es", m.es}, {"es_prime", m.es_prime}, {"es2", m.es2},
                     {"es2_prime", m.es2_prime}, {"residual", m.residual}};
    } catch (const InputError&) {
      moments = nullptr;
    }
  }
  Json mc = nullptr;
  if (config.samples) {
    const auto est = monte_carlo_point_probability(model, kappa, *config.samples, config.seed.value_or(20240601));
    mc = Json{{"estimate", est.estimate}, {"std_error", est.std_error}, {"samples", est.samples},
              {"hits", est.hits}, {"seed", config.seed.value_or(20240601)}};
  }
  if (config.output_format == OutputFormat::Csv) {
    write_rows_csv(out, {to_row(r)});
    return;
  }
  auto rep = io::report_to_json(r);
  io::write_json(out, Json{{"theta_n", shape.theta_n},
                           {"mean", shape.mean},
                           {"variance", shape.variance},
                           {"moments", moments},
                           {"envelope", rep},
                           {"monte_carlo", mc},
                           {"constants", io::constants_to_json(constants)}});
}

void run_partition(const RunConfig& config, std::ostream& out) {
  if (!config.m || !config.n) throw InputError("partition needs --m and --n");
  const int m = *config.m;
  const int n = *config.n;
  const auto& mode = config.partition_mode;
  if (mode != "model" && mode != "enum" && mode != "both") {
    throw InputError("--mode for partition must be model, enum or both");
  }
  std::optional<PartitionCount> model;
  std::optional<std::uint64_t> enumerated;
  if (mode != "enum") model = count_via_model(m, n);
  if (mode != "model") enumerated = count_via_enumeration(m, n);
  if (config.output_format == OutputFormat::Csv) {
    out << "m,n,sigma,q_model,q_enum\n" << m << ',' << n << ','
        << (model ? io::format_number(model->sigma) : "") << ',' << (model ? std::to_string(model->q) : "")
        << ',' << (enumerated ? std::to_string(*enumerated) : "") << '\n';
    return;
  }
  io::write_json(out, Json{{"m", m},
                           {"n", n},
                           {"sigma", model ? Json(model->sigma) : Json(nullptr)},
                           {"degenerate", model ? Json(model->degenerate) : Json(nullptr)},
                           {"q_model", model ? Json(model->q) : Json(nullptr)},
                           {"rounding_error", model ? Json(model->rounding_error) : Json(nullptr)},
                           {"q_enum", enumerated ? Json(*enumerated) : Json(nullptr)}});
}

LatticePmf random_pmf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(2, 21);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::vector<std::pair<Index, double>> e;
  const int size = len(rng);
  for (int k = 0; k < size; ++k) e.emplace_back(k, w(rng));
  e.front().second += 0.1;
  e[1].second += 0.1;
  return LatticePmf::make(0.0, 1.0, e);
}

bool run_validate(const RunConfig& config, std::ostream& out) {
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, Json detail) {
    all = all && ok;
    checks.push_back(Json{{"name", name}, {"passed", ok}, {"detail", std::move(detail)}});
  };

  std::mt19937_64 rng(config.seed.value_or(20240601));
  double rec_err = 0.0, id_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto p = random_pmf(rng);
    const auto s = split(p, theta(p) * std::uniform_real_distribution<double>(0.05, 1.0)(rng));
    const auto z = reconstruct(s);
    for (Index k = p.first() - 1; k <= p.last() + 1; ++k) rec_err = std::max(rec_err, std::abs(z[k] - p[k]));
    id_err = std::max(id_err, std::abs(delta_smoothness(p) - (2.0 - 2.0 * theta(p))));
  }
  record("reconstruction", rec_err <= 1e-14, Json{{"max_error", rec_err}});
  record("delta_identity", id_err <= 1e-12, Json{{"max_error", id_err}});

  const auto constants = resolve_constants(config);
  {
    const std::vector<LatticePmf> laws(64, LatticePmf::make(0.0, 1.0, std::vector<std::pair<Index, double>>{{0, 1}, {1, 1}}));
    const auto thetas = maximal_thetas(laws);
    const auto sum = convolve_all(laws);
    const auto plug = exact_plug_ins(laws, thetas, 0.25);
    bool ok = true;
    int count = 0;
    for (int k = 16; k <= 48; ++k) {
      auto r = ger1_envelope(laws, thetas, 0.25, k, plug, constants);
      r.exact = sum.pmf[k];
      ok = ok && r.contains_exact().value_or(false);
      ++count;
    }
    record("ger1_sandwich_bernoulli_64", ok, Json{{"kappas", count}});
    const auto rep = interval_discrepancy(sum, 32.0, 16.0);
    const auto chk = effective_pointwise_bound(rep);
    record("pointwise_bounds_bernoulli_64", chk.all_ok(),
           Json{{"rho", rep.rho}, {"first_min_slack", chk.first_min_slack}});
  }
  {
    bool ok = true;
    for (int n : {10, 100}) {
      const std::vector<double> th(static_cast<std::size_t>(n), 0.5);
      const auto pb = poisson_binomial(th);
      for (int i = 1; i <= 9; ++i) ok = ok && chernoff_rho(th, 0.1 * i) >= pb.tail(0.1 * i);
    }
    record("chernoff_dominance", ok, Json::object());
  }
  {
    bool ok = true;
    for (int n = 1; n <= 20; ++n) {
      for (int m = 1; m <= n; ++m) ok = ok && count_via_model(m, n).q == count_via_enumeration(m, n);
    }
    record("partition_grid_20", ok, Json::object());
  }
  const Json report{{"passed", all}, {"checks", checks}};
  if (config.output_format == OutputFormat::Csv) {
    out << "name,passed\n";
    for (const auto& c : checks) out << c["name"].get<std::string>() << ',' << (c["passed"].get<bool>() ? "true" : "false") << '\n';
  } else {
    io::write_json(out, report);
  }
  return all;
}

int emit_error(std::ostream& out, const char* type, const std::string& message, int code) {
  io::write_json(out, Json{{"error", Json{{"type", type}, {"message", message}, {"exit_code", code}}}});
  return code;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  static const std::map<std::string, Command> names{
      {"characteristics", Command::Characteristics}, {"split", Command::Split},
      {"llt-bound", Command::LltBound},              {"gamkrelidze", Command::Gamkrelidze},
      {"scenery", Command::Scenery},                 {"partition", Command::Partition},
      {"validate", Command::Validate}};
  const auto it = names.find(name);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

ConstantsRegistry resolve_constants(const RunConfig& config) {
  auto c = calibrated(config.c0_scan);
  if (const char* path = std::getenv("LLT_CONSTANTS"); path != nullptr && *path != '\0') {
    c = io::constants_from_json(io::read_json_file(path), c, std::string("LLT_CONSTANTS=") + path);
  }
  if (!config.constants_overrides.empty()) {
    Json j = Json::object();
    for (const auto& [key, value] : config.constants_overrides) {
      if (key != "C0" && key != "CE") throw InputError("constant override key must be C0 or CE, got " + key);
      j[key] = value;
    }
    c = io::constants_from_json(j, c, "command-line override");
  }
  return c;
}

std::vector<SweepRow> sweep(const RunConfig& config, double kappa_min, double kappa_max) {
  if (!(kappa_min <= kappa_max)) return {};
  const auto ctx = bound_context(config);
  std::vector<SweepRow> rows;
  for (double kappa : lattice_points(ctx.shape, kappa_min, kappa_max)) {
    rows.push_back(to_row(envelope_at(ctx, config.kind, kappa)));
  }
  return rows;
}

int run(const RunConfig& config, std::ostream& out) {
  try {
    switch (config.command) {
      case Command::Characteristics: run_characteristics(config, out); break;
      case Command::Split: run_split(config, out); break;
      case Command::LltBound: run_llt_bound(config, out); break;
      case Command::Gamkrelidze: run_gamkrelidze(config, out); break;
      case Command::Scenery: run_scenery(config, out); break;
      case Command::Partition: run_partition(config, out); break;
      case Command::Validate:
        if (!run_validate(config, out)) return kExitHypothesis;
        break;
    }
    return kExitOk;
  } catch (const HypothesisError& e) {
    return emit_error(out, "hypothesis", e.what(), kExitHypothesis);
  } catch (const InputError& e) {
    return emit_error(out, "input", e.what(), kExitInput);
  } catch (const NumericalError& e) {
    return emit_error(out, "numerical", e.what(), kExitNumerical);
  } catch (const nlohmann::json::exception& e) {
    return emit_error(out, "input", e.what(), kExitInput);
  }
}

}  // namespace llt::cli
