#include "gaussfft/rng.hpp"

namespace gaussfft {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix_gamma(std::uint64_t z) {
  z = CounterEngine::mix64(z) | 1u;
  // Reject gammas with too few bit transitions (weak Weyl sequences).
  const int transitions = __builtin_popcountll(z ^ (z >> 1));
  return transitions < 24 ? z ^ 0xaaaaaaaaaaaaaaaaull : z;
}

}  // namespace

RngStream RngStream::child(std::uint64_t index) const {
  const std::uint64_t h = CounterEngine::mix64(stream * kGolden + CounterEngine::mix64(index + 0x632be59bd9b4e019ull));
  return RngStream{seed, h};
}

CounterEngine RngStream::engine(std::uint64_t block) const {
  const std::uint64_t base = CounterEngine::mix64(seed ^ CounterEngine::mix64(stream + kGolden));
  const std::uint64_t key = CounterEngine::mix64(base + block * kGolden);
  return CounterEngine(CounterEngine::mix64(key ^ 0x5851f42d4c957f2dull), mix_gamma(key + kGolden));
}

}  // namespace gaussfft
