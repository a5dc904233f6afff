#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace motiontext {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a; stable across platforms and runs.
inline constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                       std::uint64_t h = 0xCBF29CE484222325ull) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Seed for one sequence, derived from the run-wide seed and the sequence id.
inline constexpr std::uint64_t sequence_seed(std::uint64_t global_seed, std::string_view id) noexcept {
  return splitmix64(splitmix64(global_seed) ^ fnv1a64(id));
}

/// Counter-based generator: draw n is a pure function of (seed, n).
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t next() noexcept { return splitmix64(seed_ ^ splitmix64(counter_++)); }

  /// Uniform in [0, 1).
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n); n must be positive.
  constexpr std::size_t pick(std::size_t n) noexcept {
    // Multiply-shift on the top 32 bits; bias is negligible for bank sizes.
    return static_cast<std::size_t>(((next() >> 32) * static_cast<std::uint64_t>(n)) >> 32);
  }

  constexpr std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace motiontext
