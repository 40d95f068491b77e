#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace gausschan {

/// splitmix64 step; used to derive independent per-index seeds from a root
/// seed so sharded Monte-Carlo runs agree with sequential ones.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Runs body(i) for i in [0, count) on up to `workers` threads, static
/// round-robin assignment. workers <= 1 runs inline.
void parallel_for_index(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace gausschan
