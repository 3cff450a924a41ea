#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "llt/bounds.hpp"
#include "llt/extraction.hpp"
#include "llt/gamkrelidze.hpp"
#include "llt/lattice.hpp"
#include "llt/scenery.hpp"

namespace llt::io {

using Json = nlohmann::json;

// Parses a file; throws InputError with the parser message on failure.
Json read_json_file(const std::string& path);

// {"v0": real, "D": real, "probs": [[k, weight], ...]}; weights may be unnormalized.
LatticePmf pmf_from_json(const Json& j);
Json pmf_to_json(const LatticePmf& pmf);

// A single pmf object or {"summands": [pmf, ...]}.
std::vector<LatticePmf> summands_from_json(const Json& j);

// {"x_law": pmf, "increments": pmf, "n": int, "vartheta": real | [[r, theta_r], ...]}
SceneryModel scenery_from_json(const Json& j);

Json constants_to_json(const ConstantsRegistry& c);
// {"C0": real, "CE": real}, either key optional.
ConstantsRegistry constants_from_json(const Json& j, const ConstantsRegistry& base,
                                      const std::string& origin);

Json report_to_json(const BoundReport& r);
Json split_to_json(const BernoulliSplit& s);
Json characteristics_to_json(const Characteristics& c);

// 17 significant digits for every floating-point value.
std::string format_number(double x);
void write_json(std::ostream& os, const Json& j);

}  // namespace llt::io
