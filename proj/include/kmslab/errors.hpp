#pragma once

#include <stdexcept>
#include <string>

namespace kmslab {

// Fields or probes defined on different lattices were combined.
struct LatticeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A grid is too coarse for the product being evaluated.
struct AliasingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Configuration or input failed validation; `field` names the offending entry.
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_name, const std::string& what)
      : std::runtime_error(field_name + ": " + what), field(std::move(field_name)) {}
  std::string field;
};

// Numerical procedure failed to reach its stated accuracy.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kmslab
