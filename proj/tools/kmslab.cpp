// Command-line entry point: kmslab --config run.toml [--seed S] [--samples N] [--out DIR]
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "kmslab/config.hpp"
#include "kmslab/errors.hpp"
#include "kmslab/parallel.hpp"
#include "kmslab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kmslab: equilibrium-state residual experiments"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out_dir;
  bool verbose = false;
  app.add_option("--config", config_path, "experiment config (TOML, or JSON by extension)")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--samples", samples, "override sampler.samples");
  app.add_option("--out", out_dir, "output directory for report.json and summary.csv");
  app.add_flag("--verbose", verbose, "log progress to standard error");
  CLI11_PARSE(app, argc, argv);

  // Worker count only changes scheduling, never estimates.
  if (const char* w = std::getenv("KMSLAB_WORKERS")) {
    try {
      kmslab::set_worker_count(std::stoi(w));
    } catch (const std::exception&) {
      std::cerr << "error: KMSLAB_WORKERS must be a positive integer\n";
      return 2;
    }
  }

  kmslab::ExperimentConfig config;
  try {
    config = kmslab::load_config(config_path);
    if (seed) config.seed = *seed;
    if (samples) config.sampler.samples = *samples;
    if (out_dir) config.out_dir = *out_dir;
    config.validate();
  } catch (const kmslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  kmslab::RunResult result;
  try {
    result = kmslab::run_experiment(config, kmslab::RunOptions{verbose});
  } catch (const kmslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const kmslab::ModuleError& e) {
    std::cerr << "error in " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    kmslab::emit_report(result, config.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return 4;
  }
  std::size_t passed = 0, total = result.residuals.size() + result.bounds.size();
  for (const auto& r : result.residuals) passed += r.pass;
  for (const auto& b : result.bounds) passed += b.bounded;
  std::cout << kmslab::to_string(config.kind) << ": " << passed << "/" << total << " checks pass -> "
            << (result.pass() ? "PASS" : "FAIL") << " (" << config.out_dir << "/report.json)\n";
  return result.pass() ? 0 : 1;
}
