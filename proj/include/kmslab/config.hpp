#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmslab/interaction.hpp"
#include "kmslab/report.hpp"

namespace kmslab {

enum class ExperimentKind {
  GaussianDiagnostics,
  KmsFree,
  KmsGibbs,
  KmsLocal,
  Hierarchy,
  Stationarity,
  Ibp,
  DensityOde,
  FiniteDim,
  Liouville,
  Estimates,
};

std::string to_string(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);

struct SamplerBlock {
  double beta = 1.0;
  int dimension = 1;
  int cutoff = 4;
  std::size_t samples = 100000;
  bool wave = false;  // sample (u, v) wave pairs instead of complex fields
};

struct ProbeBlock {
  int count = 10;             // size of the random probe battery
  double amplitude = 0.5;     // scale of probe coefficients
  int max_mode = -1;          // probes use modes with index <= max_mode (-1: all)
  int hierarchy_max_p = 2;
  double radial_radius = 1.0; // support of the radial bump (kms-local)
};

struct DynamicsBlock {
  double dt = 0.01;
  double horizon = 1.0;
  int checkpoints = 4;        // drift times T/c, 2T/c, ..., T
};

struct FiniteDimBlock {
  int modes = 1;
  std::vector<double> quartic{0.0, 0.5};
  double perturbation = 0.3;  // relative density perturbation for the negative control
};

struct ConvSpec {
  int dimension = 2;
  double delta = 2.0;
  double M = 0.0;
  double rho = 0.0;
};

struct CauchySpec {
  Variant variant = Variant::WickNLS2D;
  int dimension = 2;
  int power = 2;
  double gamma = 2.5;
  std::vector<int> levels{2, 4, 8};
  std::size_t samples = 2000;
};

struct EstimatesBlock {
  std::vector<ConvSpec> conv;
  std::vector<int> conv_probes{2, 4, 8, 16, 32, 64};
  int truncation = 256;
  std::vector<int> hyper_p{4, 6};
  std::size_t hyper_samples = 1000000;
  std::vector<CauchySpec> cauchy;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::KmsFree;
  std::uint64_t seed = 0;
  bool has_seed = false;
  SamplerBlock sampler;
  std::optional<InteractionSpec> interaction;
  ProbeBlock probes;
  TolerancePolicy tolerance;
  double min_ess_fraction = 0.0;  // adds an ESS gate when positive
  DynamicsBlock dynamics;
  FiniteDimBlock finite_dim;
  EstimatesBlock estimates;
  std::string out_dir = "out";

  // Throws ConfigError naming the offending field.
  void validate() const;
  // Canonical JSON of every parameter that affects results.
  nlohmann::json to_json() const;
  std::string hash() const;
};

// TOML by default; JSON when the path ends in .json.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_toml(const std::string& text);
ExperimentConfig parse_config_json(const std::string& text);

}  // namespace kmslab
