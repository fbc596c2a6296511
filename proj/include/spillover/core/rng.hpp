#pragma once

#include <cstdint>
#include <random>

namespace spillover {

using Rng = std::mt19937_64;

/// Stream tags keep substreams of different pipeline stages disjoint.
enum class StreamTag : std::uint32_t {
  posterior = 1,
  rotation = 2,
  simulation = 3,
  multistart = 4,
  events = 5,
};

/// Deterministic generator for work item `index` of a stage. Draw `i` sees the
/// same sequence whatever the number of workers, which keeps parallel runs
/// reproducible.
inline Rng substream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace spillover
