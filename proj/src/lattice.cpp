#include "kmslab/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kmslab {

ModeLattice::ModeLattice(int dimension, int cutoff) : dimension_(dimension), cutoff_(cutoff) {
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("unsupported lattice dimension " + std::to_string(dimension));
  }
  if (cutoff < 0) throw std::invalid_argument("lattice cutoff must be >= 0");

  const int n = cutoff;
  const int r1 = n;
  const int r2 = dimension >= 2 ? n : 0;
  const int r3 = dimension >= 3 ? n : 0;
  for (int a = -r1; a <= r1; ++a)
    for (int b = -r2; b <= r2; ++b)
      for (int c = -r3; c <= r3; ++c) {
        Mode k{a, b, c};
        if (mode_norm2(k) <= n * n) modes_.push_back(k);
      }
  std::sort(modes_.begin(), modes_.end(), [](const Mode& x, const Mode& y) {
    const int nx = mode_norm2(x), ny = mode_norm2(y);
    if (nx != ny) return nx < ny;
    return x < y;
  });

  norm2_.reserve(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    norm2_.push_back(mode_norm2(modes_[i]));
    lookup_.emplace(key(modes_[i]), i);
  }
  negated_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const Mode& k = modes_[i];
    negated_[i] = lookup_.at(key(Mode{-k[0], -k[1], -k[2]}));
  }
}

long long ModeLattice::key(const Mode& k) {
  // Components are bounded by the cutoff, far below 2^20.
  constexpr long long base = 1 << 21;
  constexpr long long off = 1 << 20;
  return ((k[0] + off) * base + (k[1] + off)) * base + (k[2] + off);
}

std::optional<std::size_t> ModeLattice::index_of(const Mode& k) const {
  auto it = lookup_.find(key(k));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

LatticePtr build_lattice(int dimension, int cutoff) {
  return std::make_shared<const ModeLattice>(dimension, cutoff);
}

}  // namespace kmslab
