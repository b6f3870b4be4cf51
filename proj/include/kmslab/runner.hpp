#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmslab/config.hpp"
#include "kmslab/parallel.hpp"
#include "kmslab/report.hpp"

namespace kmslab {

inline constexpr int kSchemaVersion = 1;

// A downstream failure tagged with the module that raised it.
struct ModuleError : std::runtime_error {
  ModuleError(std::string module_name, const std::string& what)
      : std::runtime_error(module_name + ": " + what), module(std::move(module_name)) {}
  std::string module;
};

struct RunOptions {
  bool verbose = false;
  Exec exec = Exec::Parallel;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<ResidualReport> residuals;
  std::vector<BoundCheck> bounds;

  bool empty() const { return residuals.empty() && bounds.empty(); }
  bool pass() const;
};

// sample -> weight -> estimate -> report for the configured experiment.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

nlohmann::json report_json(const RunResult& result);
std::string summary_csv(const RunResult& result);
// Writes <dir>/report.json and <dir>/summary.csv atomically. Throws
// std::invalid_argument on empty results.
void emit_report(const RunResult& result, const std::string& dir);

}  // namespace kmslab
