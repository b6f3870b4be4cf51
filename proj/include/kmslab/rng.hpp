#pragma once

#include <cstdint>
#include <random>

namespace kmslab {

// Counter-style substream derivation: the engine for sample `index` depends
// only on (seed, stream, index), so results never depend on worker count.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

inline std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return std::mt19937_64(substream_seed(seed, stream, index));
}

}  // namespace kmslab
