#pragma once

#include <cstdint>

namespace thzdoa {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for the stream keyed by `key` under `parent`. Chaining keys gives
/// a seed per (master, snr point, trial, stage, link) that does not depend on
/// the order in which work is executed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
  return splitmix64(parent ^ splitmix64(key + 0x632BE59BD9B4E019ULL));
}

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key, Keys... rest) {
  return derive_seed(derive_seed(parent, key), static_cast<std::uint64_t>(rest)...);
}

}  // namespace thzdoa
