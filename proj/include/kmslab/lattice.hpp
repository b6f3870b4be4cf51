#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace kmslab {

// Frequency vector; components beyond the lattice dimension are zero.
using Mode = std::array<int, 3>;

// Truncated index set {k in Z^d : |k| <= n} (Euclidean ball) ordered by |k|^2
// then lexicographically. Eigenvalues are those of A = -Laplacian + 1.
class ModeLattice {
 public:
  ModeLattice(int dimension, int cutoff);

  int dimension() const { return dimension_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return modes_.size(); }

  std::span<const Mode> modes() const { return modes_; }
  const Mode& mode(std::size_t i) const { return modes_[i]; }
  int norm2(std::size_t i) const { return norm2_[i]; }
  double eigenvalue(std::size_t i) const { return norm2_[i] + 1.0; }

  std::optional<std::size_t> index_of(const Mode& k) const;
  // Index of -k; the ball is symmetric so this always exists.
  std::size_t negated(std::size_t i) const { return negated_[i]; }

  bool operator==(const ModeLattice& other) const {
    return dimension_ == other.dimension_ && cutoff_ == other.cutoff_;
  }

 private:
  static long long key(const Mode& k);

  int dimension_;
  int cutoff_;
  std::vector<Mode> modes_;
  std::vector<int> norm2_;
  std::vector<std::size_t> negated_;
  std::unordered_map<long long, std::size_t> lookup_;
};

using LatticePtr = std::shared_ptr<const ModeLattice>;

// Throws std::invalid_argument for d outside {1,2,3} or n < 0.
LatticePtr build_lattice(int dimension, int cutoff);

inline int mode_norm2(const Mode& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

}  // namespace kmslab
