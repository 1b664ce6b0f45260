// gwtw: run single trials, parameter sweeps and validators.
//
//   gwtw run <spec.json>      trace.csv + outcome.csv
//   gwtw sweep <spec.json>    sweep.csv
//   gwtw validate             oracle and statistical self-checks
//
// --seed, --trials, --out and --jobs override the spec document.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "gwtw/cli.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
};

gwtw::ExperimentSpec load_with_overrides(const std::string& path, const Overrides& o) {
  auto spec = gwtw::load_spec(path);
  if (o.seed) spec.config.seed = *o.seed;
  if (o.trials) spec.trials = *o.trials;
  if (o.out) spec.output = *o.out;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Go-With-The-Winner server selection simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides overrides;
  std::size_t jobs = 1;
  app.add_option("--seed", overrides.seed, "Base seed (overrides the spec)");
  app.add_option("--trials", overrides.trials, "Trials per sweep point")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", overrides.out, "Output directory");
  app.add_option("--jobs", jobs, "Worker threads for sweeps (0 = hardware)");

  std::string spec_path;
  auto* run = app.add_subcommand("run", "Run one trial and write trace.csv/outcome.csv");
  run->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write sweep.csv");
  sweep->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
  app.add_subcommand("validate", "Run the LRU, Zipf and balls-into-bins validators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gwtw::kExitConfigError;
  }
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  try {
    if (run->parsed()) {
      gwtw::cmd_run(load_with_overrides(spec_path, overrides), std::cout);
    } else if (sweep->parsed()) {
      gwtw::cmd_sweep(load_with_overrides(spec_path, overrides), jobs, std::cout);
    } else {
      if (!gwtw::cmd_validate(std::cout, overrides.seed.value_or(1))) {
        return gwtw::kExitValidationFailure;
      }
    }
  } catch (const gwtw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gwtw::kExitConfigError;
  } catch (const gwtw::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return gwtw::kExitIoError;
  }
  return gwtw::kExitOk;
}
