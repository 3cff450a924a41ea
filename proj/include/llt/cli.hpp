#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "llt/bounds.hpp"

namespace llt::cli {

enum class Command { Characteristics, Split, LltBound, Gamkrelidze, Scenery, Partition, Validate };

std::optional<Command> parse_command(const std::string& name);

enum class OutputFormat { Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::Characteristics;
  std::string input_path;
  OutputFormat output_format = OutputFormat::Json;
  PlugInMode mode = PlugInMode::Exact;
  std::optional<double> h;
  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  // keys "C0" and "CE"; applied after LLT_CONSTANTS
  std::vector<std::pair<std::string, double>> constants_overrides;

  // llt-bound
  std::string kind = "ger1";  // ger1 | ger2 | ger3
  std::optional<double> kappa;
  std::optional<double> kappa_min;
  std::optional<double> kappa_max;
  std::optional<double> vartheta;
  std::string psi = "abs_cubed";  // abs_cubed | square

  // gamkrelidze
  std::optional<double> a_n;
  std::optional<double> b_n;

  // scenery
  std::optional<std::uint64_t> samples;

  // partition
  std::optional<int> m;
  std::string partition_mode = "both";  // model | enum | both

  Index c0_scan = kDefaultC0Scan;
};

struct SweepRow {
  double kappa;
  std::optional<double> exact;
  double gaussian;
  double lower;
  double upper;
  double envelope_width;
  std::optional<bool> contains_exact;
};

// Constants from a C0 scan, then LLT_CONSTANTS (if set), then the config overrides.
ConstantsRegistry resolve_constants(const RunConfig& config);

// Envelope rows for every lattice point of the sum in [kappa_min, kappa_max].
// An empty range yields an empty table.
std::vector<SweepRow> sweep(const RunConfig& config, double kappa_min, double kappa_max);

// Dispatches the command and writes the report to `out`. Failures are
// written as {"error": {...}} to `out` and mapped to the exit codes above.
int run(const RunConfig& config, std::ostream& out);

}  // namespace llt::cli
