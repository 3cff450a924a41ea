#include "llt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "llt/errors.hpp"

namespace llt::io {

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

Index integer(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return v.get<Index>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::isfinite(d)) return static_cast<Index>(d);
  }
  throw InputError(what + " must be an integer");
}

void write_value(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_value(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // short rows of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_value(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_value(os, j[i], indent, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

LatticePmf pmf_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("pmf must be a JSON object");
  const double v0 = number(j, "v0");
  const double d = number(j, "D");
  if (!j.contains("probs") || !j.at("probs").is_array()) {
    throw InputError("pmf field \"probs\" must be an array of [k, weight] pairs");
  }
  std::vector<std::pair<Index, double>> entries;
  for (const auto& e : j.at("probs")) {
    if (!e.is_array() || e.size() != 2 || !e[1].is_number()) {
      throw InputError("each pmf entry must be a [k, weight] pair");
    }
    entries.emplace_back(integer(e[0], "pmf index"), e[1].get<double>());
  }
  return LatticePmf::make(v0, d, entries);
}

Json pmf_to_json(const LatticePmf& pmf) {
  Json probs = Json::array();
  for (Index k = pmf.first(); k <= pmf.last(); ++k) {
    if (pmf[k] > 0.0) probs.push_back(Json::array({k, pmf[k]}));
  }
  return Json{{"v0", pmf.v0()}, {"D", pmf.span()}, {"probs", probs}};
}

std::vector<LatticePmf> summands_from_json(const Json& j) {
  if (j.is_object() && j.contains("summands")) {
    const auto& arr = j.at("summands");
    if (!arr.is_array() || arr.empty()) throw InputError("\"summands\" must be a non-empty array");
    std::vector<LatticePmf> out;
    for (const auto& e : arr) out.push_back(pmf_from_json(e));
    return out;
  }
  return {pmf_from_json(j)};
}

SceneryModel scenery_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("scenery model must be a JSON object");
  for (const char* key : {"x_law", "increments", "n", "vartheta"}) {
    if (!j.contains(key)) throw InputError(std::string("scenery model is missing \"") + key + "\"");
  }
  auto x = pmf_from_json(j.at("x_law"));
  auto inc = pmf_from_json(j.at("increments"));
  const auto n = integer(j.at("n"), "n");
  const auto& vt = j.at("vartheta");
  VarthetaProfile profile = VarthetaProfile::constant(0.0);
  if (vt.is_number()) {
    profile = VarthetaProfile::constant(vt.get<double>());
  } else if (vt.is_array()) {
    std::map<Index, double> table;
    for (const auto& e : vt) {
      if (!e.is_array() || e.size() != 2 || !e[1].is_number()) {
        throw InputError("vartheta table entries must be [r, theta_r] pairs");
      }
      table[integer(e[0], "site r")] = e[1].get<double>();
    }
    profile = VarthetaProfile::table(std::move(table));
  } else {
    throw InputError("\"vartheta\" must be a number or a list of [r, theta_r] pairs");
  }
  return SceneryModel::make(std::move(x), std::move(inc), static_cast<int>(n), std::move(profile));
}

Json constants_to_json(const ConstantsRegistry& c) {
  return Json{{"C0", c.c0}, {"C1", c.c1}, {"C2", c.c2}, {"C3", c.c3}, {"CE", c.ce},
              {"provenance", c.provenance}};
}

ConstantsRegistry constants_from_json(const Json& j, const ConstantsRegistry& base,
                                      const std::string& origin) {
  if (!j.is_object()) throw InputError("constants override must be a JSON object");
  double c0 = base.c0;
  double ce = base.ce;
  std::string prov = base.provenance;
  if (j.contains("C0")) {
    c0 = number(j, "C0");
    prov = "C0 = " + format_number(c0) + " overridden by " + origin;
  }
  if (j.contains("CE")) {
    ce = number(j, "CE");
    prov += "; CE = " + format_number(ce) + " overridden by " + origin;
  }
  return ConstantsRegistry::make(c0, ce, prov);
}

Json report_to_json(const BoundReport& r) {
  Json params{{"h", r.params.h},
              {"theta_n", r.params.theta_n},
              {"H_n_used", r.params.h_n_used},
              {"rho_n_used", r.params.rho_n_used},
              {"variance", r.params.variance},
              {"mean", r.params.mean},
              {"mode", to_string(r.params.mode)}};
  Json out{{"kind", r.kind},
           {"kappa", r.kappa},
           {"exact", r.exact ? Json(*r.exact) : Json(nullptr)},
           {"gaussian", r.gaussian},
           {"lower", r.lower},
           {"upper", r.upper},
           {"envelope_width", r.width()},
           {"lower_negative", r.lower_negative()},
           {"params", params}};
  const auto inside = r.contains_exact();
  out["contains_exact"] = inside ? Json(*inside) : Json(nullptr);
  return out;
}

Json split_to_json(const BernoulliSplit& s) {
  Json tau = Json::array();
  Json joint = Json::array();
  for (Index k = s.first(); k <= s.last(); ++k) {
    if (s.tau_at(k) > 0.0) tau.push_back(Json::array({k, s.tau_at(k)}));
    for (int e = 0; e <= 1; ++e) {
      if (s.joint(k, e) > 0.0) joint.push_back(Json::array({k, e, s.joint(k, e)}));
    }
  }
  return Json{{"source", pmf_to_json(s.source)},
              {"vartheta", s.vartheta},
              {"tau", tau},
              {"joint", joint},
              {"eps_probability", s.eps_probability()},
              {"xi_law", pmf_to_json(xi_law(s))}};
}

Json characteristics_to_json(const Characteristics& c) {
  return Json{{"theta", c.theta},
              {"delta", c.delta},
              {"mean", c.mean},
              {"variance", c.variance},
              {"span_multiple", c.maximal_span_multiple}};
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_json(std::ostream& os, const Json& j) {
  write_value(os, j, 2, 0);
  os << "\n";
}

}  // namespace llt::io
