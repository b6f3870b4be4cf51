#pragma once

#include <map>
#include <optional>
#include <string>

#include "kmslab/lattice.hpp"

namespace kmslab {

enum class Variant { Hartree1D, WickHartree, NLS1D, WickNLS2D, WickWave };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

// Fourier coefficients V^(k) of the pair potential (unit-volume convention).
// Either C <k>^{-gamma} or an explicit table (absent modes are zero).
struct Potential {
  enum class Kind { PowerLaw, Table };
  Kind kind = Kind::PowerLaw;
  double C = 1.0;
  double gamma = 0.0;
  std::map<Mode, double> table;
  // Declared decay bound V^(k) <= bound_C <k>^{-(2+bound_eps)}, required for
  // tables in d = 3.
  std::optional<double> bound_C;
  std::optional<double> bound_eps;

  static Potential power_law(double C, double gamma);
  static Potential from_table(std::map<Mode, double> table);

  double operator()(const Mode& k) const;
};

// Loads "k1[,k2[,k3]],value" rows; '#' starts a comment, a non-numeric first
// row is treated as a header.
Potential load_potential_csv(const std::string& path, int dimension);

struct InteractionSpec {
  Variant variant = Variant::NLS1D;
  int dimension = 1;
  int cutoff = 0;
  double beta = 1.0;
  // q for NLS1D, r for WickNLS2D, m for WickWave; unused for Hartree.
  int power = 4;
  Potential potential;
  bool focusing = false;
  std::optional<double> mass_cutoff;

  // Throws ConfigError naming the offending field.
  void validate() const;
  bool is_wave() const { return variant == Variant::WickWave; }
  bool is_hartree() const { return variant == Variant::Hartree1D || variant == Variant::WickHartree; }
  // Total polynomial degree of the energy density, used for grid sizing.
  int degree() const;
  // Stable hash of all parameters.
  std::string hash() const;
};

}  // namespace kmslab
