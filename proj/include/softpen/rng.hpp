#pragma once

#include <cstddef>
#include <cstdint>

namespace softpen {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * Counter-based generator: every draw is a pure function of
 * (seed, epoch, step), so any (epoch, step) cell can be replayed on its own.
 */
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t bits(std::uint64_t epoch, std::uint64_t step) const {
    return mix64(seed_ ^ mix64(epoch ^ mix64(step + 0x632BE59BD9B4E019ULL)));
  }

  /// Uniform index in [0, n) via multiply-shift.
  constexpr std::size_t index(std::uint64_t epoch, std::uint64_t step,
                              std::size_t n) const {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(bits(epoch, step)) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

  /// A derived generator for a sub-stream (e.g. one catalyst stage).
  constexpr CounterRng split(std::uint64_t stream) const {
    return stream == 0 ? *this : CounterRng(mix64(seed_ ^ mix64(~stream)));
  }

  constexpr std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace softpen
