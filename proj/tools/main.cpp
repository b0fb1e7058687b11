// Command-line front end: identity suites, inequality suites, and asymptotic
// experiment sweeps driven by a sectioned key-value config file.
//
//   charsieve identities  --config run.cfg --out results/
//   charsieve asymptotics --config run.cfg --seed 7 --workers 4
//   charsieve sieve       --config run.cfg --tolerance 1e-9
//
// Exit codes: 0 all checks pass, 1 residual/tolerance violation,
// 2 configuration or domain error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "charsieve/cli_runner.hpp"
#include "charsieve/config.hpp"

using namespace charsieve;

int main(int argc, char** argv) {
  CLI::App app{"character-sum averaging operators: identity checks, sieve "
               "inequalities and bilinear-form experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path, out_dir;
  std::optional<u64> seed;
  std::optional<int> workers;
  std::optional<double> tolerance;
  app.add_option("--config", config_path, "config file path (sectioned key = value)");
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override for every section");
  app.add_option("--workers", workers, "worker pool size override");
  app.add_option("--tolerance", tolerance, "exact-identity tolerance override");

  auto* cmd_identities = app.add_subcommand("identities", "run the exact-identity suites");
  auto* cmd_asymptotics = app.add_subcommand("asymptotics", "run asymptotic experiment sweeps");
  auto* cmd_sieve = app.add_subcommand("sieve", "run the inequality suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;  // bad flags are configuration errors
  }

  ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? default_config() : ExperimentConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (workers) cfg.workers = *workers;
  if (seed) {
    if (cfg.identities) cfg.identities->seed = *seed;
    if (cfg.asymptotics) cfg.asymptotics->seed = *seed;
    if (cfg.sieve) cfg.sieve->seed = *seed;
  }
  if (tolerance && cfg.identities) cfg.identities->tol_exact = *tolerance;

  try {
    if (cmd_identities->parsed()) return run_identities(cfg, std::cout);
    if (cmd_asymptotics->parsed()) return run_asymptotics(cfg, std::cout);
    if (cmd_sieve->parsed()) return run_sieve(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
