#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmslab/stats.hpp"

namespace kmslab {

struct TolerancePolicy {
  double multiplier = 3.0;
  int batches = 100;
};

// How a report's verdict is decided.
enum class Gate {
  Stderr,     // |component| <= multiplier * stderr, both components
  Absolute,   // |estimate| <= threshold
  Exceeds,    // discrimination: some component > multiplier * stderr
  Above,      // |estimate| > threshold
};

struct ResidualReport {
  std::string identity;
  std::complex<double> estimate{0.0, 0.0};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t samples = 0;
  Gate gate = Gate::Stderr;
  double multiplier = 3.0;
  double threshold = 0.0;
  bool pass = false;
  std::string spec_hash;
  std::uint64_t seed = 0;
  std::map<std::string, double> details;

  double stderr_max() const { return std::max(stderr_re, stderr_im); }
  // Largest |component| / stderr; infinite when a nonzero component has stderr 0.
  double sigma_excess() const;
};

// Fills the verdict from estimate, stderr and gate.
void decide(ResidualReport& r);

ResidualReport make_stderr_report(std::string identity, const ComplexEstimate& e, std::size_t samples,
                                  const TolerancePolicy& policy);
ResidualReport make_absolute_report(std::string identity, std::complex<double> value, double threshold,
                                    std::size_t samples = 0);

struct BoundRow {
  double n = 0.0;
  double value = 0.0;
  double ratio = 0.0;
  double stderr_ = 0.0;
  // Secondary quantity tracked alongside (e.g. a gradient norm); omitted from JSON when unused.
  double aux = 0.0;
  double aux_stderr = 0.0;
};

struct BoundCheck {
  std::string lemma;
  std::map<std::string, double> parameters;
  std::string probe_range;
  double worst_ratio = 0.0;
  bool bounded = false;
  std::string note;
  std::string aux_label;
  std::vector<BoundRow> rows;
};

nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const BoundCheck& b);
std::string to_string(Gate g);

}  // namespace kmslab
