// Command-line front end for the lattice LLT toolkit.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "llt/cli.hpp"

int main(int argc, char** argv) {
  using llt::cli::RunConfig;
  CLI::App app{"Effective local limit theorem bounds for lattice sums"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "json";
  std::string mode = "exact-plug-ins";
  std::string input;
  double c0 = -1.0;
  double ce = -1.0;

  auto common = [&](CLI::App* sub, bool needs_input) {
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--c0", c0, "override C0");
    sub->add_option("--ce", ce, "override CE");
    sub->add_option("--c0-scan", cfg.c0_scan, "largest n of the C0 calibration scan");
    if (needs_input) sub->add_option("input", input, "input JSON file")->required();
  };

  auto* characteristics = app.add_subcommand("characteristics", "theta, delta and moments of a pmf");
  common(characteristics, true);

  auto* split = app.add_subcommand("split", "Bernoulli part of a pmf");
  common(split, true);
  split->add_option("--vartheta", cfg.vartheta, "extraction level (default: maximal)");

  auto* bound = app.add_subcommand("llt-bound", "envelopes for P{S_n = kappa}");
  common(bound, true);
  bound->add_option("--n", cfg.n, "number of summands (cycles through the input list)");
  bound->add_option("--kappa", cfg.kappa, "lattice point (default: nearest to E S_n)");
  bound->add_option("--kappa-min", cfg.kappa_min, "sweep start");
  bound->add_option("--kappa-max", cfg.kappa_max, "sweep end");
  bound->add_option("--kind", cfg.kind, "ger1, ger2 or ger3")->check(CLI::IsMember({"ger1", "ger2", "ger3"}));
  bound->add_option("--mode", mode, "exact-plug-ins or bounded-plug-ins")
      ->check(CLI::IsMember({"exact-plug-ins", "bounded-plug-ins"}));
  bound->add_option("--h", cfg.h, "sandwich parameter in (0, 1)");
  bound->add_option("--vartheta", cfg.vartheta, "common extraction level");
  bound->add_option("--psi", cfg.psi, "abs_cubed or square");

  auto* gam = app.add_subcommand("gamkrelidze", "interval discrepancy and pointwise bounds");
  common(gam, true);
  gam->add_option("--n", cfg.n, "number of summands");
  gam->add_option("--a", cfg.a_n, "centering a_n (default: E S_n)");
  gam->add_option("--b", cfg.b_n, "scaling b_n (default: Var S_n)");
  gam->add_option("--h", cfg.h, "parameter of the smoothness majorant");
  gam->add_option("--vartheta", cfg.vartheta, "common extraction level");

  auto* scenery = app.add_subcommand("scenery", "random walk in random scenery envelope");
  common(scenery, true);
  scenery->add_option("--n", cfg.n, "override the number of steps");
  scenery->add_option("--kappa", cfg.kappa, "lattice point (default: nearest to E S_n)");
  scenery->add_option("--h", cfg.h, "sandwich parameter in (0, 1)");
  scenery->add_option("--mode", mode, "exact-plug-ins or bounded-plug-ins")
      ->check(CLI::IsMember({"exact-plug-ins", "bounded-plug-ins"}));
  scenery->add_option("--psi", cfg.psi, "abs_cubed or square");
  scenery->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  scenery->add_option("--seed", cfg.seed, "Monte Carlo seed");

  auto* partition = app.add_subcommand("partition", "partitions of n into distinct parts >= m");
  common(partition, false);
  partition->add_option("--m", cfg.m, "smallest part")->required();
  partition->add_option("--n", cfg.n, "target")->required();
  partition->add_option("--mode", cfg.partition_mode, "model, enum or both")
      ->check(CLI::IsMember({"model", "enum", "both"}));

  auto* validate = app.add_subcommand("validate", "quick self-check against exact oracles");
  common(validate, false);
  validate->add_option("--seed", cfg.seed, "seed for the random pmfs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : llt::cli::kExitInput;
  }

  const auto* sub = app.get_subcommands().front();
  cfg.command = *llt::cli::parse_command(sub->get_name());
  cfg.input_path = input;
  cfg.output_format = format == "csv" ? llt::cli::OutputFormat::Csv : llt::cli::OutputFormat::Json;
  cfg.mode = mode == "bounded-plug-ins" ? llt::PlugInMode::Bounded : llt::PlugInMode::Exact;
  if (c0 >= 0.0) cfg.constants_overrides.emplace_back("C0", c0);
  if (ce >= 0.0) cfg.constants_overrides.emplace_back("CE", ce);
  return llt::cli::run(cfg, std::cout);
}
