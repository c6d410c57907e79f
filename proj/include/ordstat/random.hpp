#pragma once

#include <cstdint>
#include <random>

namespace ordstat {

using Rng = std::mt19937_64;

/// Independent stream for (seed, index). Used to give every block of
/// replications a fixed stream so results do not depend on worker count.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6f726473u};
  return Rng(seq);
}

/// Worker count: ORDSTAT_THREADS if set and positive, else hardware concurrency.
unsigned default_thread_count();

}  // namespace ordstat
