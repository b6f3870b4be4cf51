#pragma once

#include <span>
#include <vector>

#include "kmslab/field.hpp"

namespace kmslab {

// Uniform m^d grid on the unit-volume torus, x_j = 2 pi j / m. Point values are
// u(x_j) = sum_k c_k e^{ik.x_j}; forward transforms divide by m^d so that the
// coefficient of e_0 is the grid mean. Thread-safe: FFTW plans are shared,
// buffers are per call.
class GridTransform {
 public:
  GridTransform(int dimension, int points);

  int dimension() const { return dimension_; }
  int points() const { return points_; }
  std::size_t total() const { return total_; }

  // Flat grid index holding frequency k (wrapped modulo m).
  std::size_t slot(const Mode& k) const;
  // Signed frequency stored in a flat grid slot, components in [-m/2, m/2).
  Mode frequency(std::size_t slot) const;

  std::vector<cplx> eval(const SpectralField& u) const;
  SpectralField synth(std::span<const cplx> values, const LatticePtr& lattice) const;

  // Full normalized coefficient array in grid slot order, and its inverse.
  std::vector<cplx> forward(std::span<const cplx> values) const;
  std::vector<cplx> backward(std::span<const cplx> coeffs) const;

 private:
  void execute(std::vector<cplx>& buf, int sign) const;

  int dimension_;
  int points_;
  std::size_t total_;
};

// Smallest 2^a 3^b 5^c that is >= degree*n + 1 (and >= 2n + 1).
int alias_free_points(int cutoff, int degree);

// Checked wrappers: m must exceed 2n.
std::vector<cplx> grid_eval(const SpectralField& u, int points);
SpectralField grid_synth(std::span<const cplx> values, const LatticePtr& lattice, int points);

}  // namespace kmslab
