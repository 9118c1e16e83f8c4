#include <doctest.h>

#include <cmath>
#include <set>

#include "gaussfft/rng.hpp"

using namespace gaussfft;

TEST_CASE("identical streams reproduce identical draws") {
  const RngStream s{42, 3};
  auto a = s.engine(5), b = s.engine(5);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("streams, children and blocks are distinct") {
  const RngStream s{42, 0};
  std::set<std::uint64_t> first;
  for (std::uint64_t i = 0; i < 64; ++i) {
    first.insert(s.child(i).engine(0)());
    first.insert(s.engine(i)());
  }
  CHECK(first.size() == 128);
  CHECK(RngStream{1, 0}.engine(0)() != RngStream{2, 0}.engine(0)());
}

TEST_CASE("counter engine output is the splitmix finalizer of the Weyl sequence") {
  CounterEngine e(0, 0x9e3779b97f4a7c15ull);
  // Reference values of SplitMix64 seeded with 0.
  CHECK(e() == 0xe220a8397b1dcdafull);
  CHECK(e() == 0x6e789e6aa1b965f4ull);
  CHECK(e() == 0x06c45d188009454full);
}

TEST_CASE("uniform bits are balanced") {
  auto e = RngStream{9, 9}.engine(0);
  std::size_t ones = 0;
  const std::size_t draws = 20000;
  for (std::size_t i = 0; i < draws; ++i) ones += static_cast<std::size_t>(__builtin_popcountll(e()));
  const double mean = static_cast<double>(ones) / (64.0 * draws);
  // Binomial(64 * draws, 1/2): sd of the fraction is 0.5 / sqrt(1.28e6).
  CHECK(std::fabs(mean - 0.5) <= 4 * 0.5 / std::sqrt(64.0 * draws));
}
