#pragma once

#include <cstdint>
#include <limits>

namespace gaussfft {

// SplitMix64-style generator: output i is a bijective 64-bit mix of the
// Weyl state seed + (i+1)*gamma. Each (seed, gamma) pair has period 2^64;
// distinct streams get distinct odd gammas.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  CounterEngine(std::uint64_t state, std::uint64_t gamma) : state_(state), gamma_(gamma | 1u) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(state_ += gamma_); }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
};

// Identifies one reproducible random stream. Identical (seed, stream) pairs
// reproduce identical samples; child streams are derived by hashing.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngStream child(std::uint64_t index) const;

  // Engine for one fixed-size block of samples within this stream.
  CounterEngine engine(std::uint64_t block = 0) const;
};

}  // namespace gaussfft
