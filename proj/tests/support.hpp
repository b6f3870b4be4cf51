#pragma once

#include <random>

#include "kmslab/field.hpp"
#include "kmslab/report.hpp"

namespace kmslab::support {

// Coefficients a + ib with a, b ~ N(0, scale^2 / lambda).
inline SpectralField random_field(const LatticePtr& lattice, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  SpectralField u(lattice);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double s = scale / std::sqrt(lattice->eigenvalue(i));
    u[i] = cplx(s * n(g), s * n(g));
  }
  return u;
}

inline FieldPair random_real_pair(const LatticePtr& lattice, std::uint64_t seed, double scale = 1.0) {
  return make_pair(real_part(random_field(lattice, seed, scale)), real_part(random_field(lattice, seed + 7, scale)));
}

// |component| / stderr, the quantity gated by the tolerance policy.
inline double sigmas(const ResidualReport& r) { return r.sigma_excess(); }

}  // namespace kmslab::support
