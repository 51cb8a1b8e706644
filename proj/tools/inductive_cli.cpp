// Batch experiment harness: inductive <task> --config <path> [--seed N] [--out DIR] [--tolerance X]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "inductive/experiment.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tolerance;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "overrides process.seed");
  cmd->add_option("--out", opt.out, "output directory, overrides config output");
  cmd->add_option("--tolerance", opt.tolerance, "overrides audit.tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive rules of succession, analogical inductive logic and symmetry audits"};
  app.require_subcommand(1);
  Options opt;
  for (const char* name : {"predict", "simulate", "audit", "converge", "compare"}) {
    add_common(app.add_subcommand(name, std::string("run the ") + name + " task"), opt);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : inductive::kExitConfig;
  }

  const std::string task = app.get_subcommands().front()->get_name();
  inductive::ExperimentConfig config;
  try {
    config = inductive::load_config(opt.config);
    config.task = inductive::parse_task(task);
    if (opt.seed) config.process.seed = *opt.seed;
    if (opt.out) config.output = *opt.out;
    if (opt.tolerance) config.audit.tolerance = *opt.tolerance;
  } catch (const inductive::InvalidInput& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return inductive::kExitConfig;
  }
  return inductive::run_guarded(config, std::cout, std::cerr);
}
