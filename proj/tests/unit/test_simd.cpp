#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string_view>
#include <vector>

#include "gaussfft/rng.hpp"
#include "gaussfft/simd.hpp"

using namespace gaussfft;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  CounterEngine eng(seed, 0x9e3779b97f4a7c15ull);
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(eng() >> 11) * 0x1p-53 * 4.0 - 2.0;
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar dot matches a long double reference") {
  const auto& k = simd::scalar_kernels();
  for (std::size_t n : {0u, 1u, 7u, 1024u, 1025u}) {
    auto a = random_vec(n, 1), b = random_vec(n, 2);
    long double ref = 0;
    for (std::size_t i = 0; i < n; ++i) ref += static_cast<long double>(a[i]) * b[i];
    CHECK(k.dot(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
  }
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const simd::Kernels* v = simd::avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 variant unavailable on this host");
    return;
  }
  const auto& s = simd::scalar_kernels();
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1024u, 1027u}) {
    auto a = random_vec(n, 3 + n), b = random_vec(n, 4 + n);
    CAPTURE(n);

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::fabs(a[i] * b[i]);
    CHECK(std::fabs(v->dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= 1e-15 * (scale + 1.0));

    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < 7; ++r) rows.push_back(random_vec(n, 100 + r));
    std::vector<const double*> ptrs;
    for (auto& r : rows) ptrs.push_back(r.data());
    std::vector<double> out_v(7), out_s(7);
    v->dot_many(ptrs.data(), 7, a.data(), n, out_v.data());
    s.dot_many(ptrs.data(), 7, a.data(), n, out_s.data());
    for (std::size_t r = 0; r < 7; ++r) CHECK(std::fabs(out_v[r] - out_s[r]) <= 1e-13 * (1.0 + n));

    std::vector<double> ov(n), os(n);
    v->mul(ov.data(), a.data(), b.data(), n);
    s.mul(os.data(), a.data(), b.data(), n);
    CHECK(bitwise_equal(ov, os));
    v->scale(ov.data(), a.data(), -1.75, n);
    s.scale(os.data(), a.data(), -1.75, n);
    CHECK(bitwise_equal(ov, os));
    v->hypot(ov.data(), a.data(), b.data(), n);
    s.hypot(os.data(), a.data(), b.data(), n);
    CHECK(bitwise_equal(ov, os));

    std::vector<double> sum_v(n, 0.0), comp_v(n, 0.0), sum_s(n, 0.0), comp_s(n, 0.0);
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      auto h = random_vec(n, 50 + rep);
      v->add_squares(sum_v.data(), comp_v.data(), h.data(), n);
      s.add_squares(sum_s.data(), comp_s.data(), h.data(), n);
    }
    CHECK(bitwise_equal(sum_v, sum_s));
    CHECK(bitwise_equal(comp_v, comp_s));
  }
}

TEST_CASE("compensated squares recover small terms lost by naive summation") {
  const auto& s = simd::scalar_kernels();
  double sum = 0.0, comp = 0.0;
  const double big = 1e8, small = 1e-5;
  s.add_squares(&sum, &comp, &big, 1);
  for (int i = 0; i < 1000; ++i) s.add_squares(&sum, &comp, &small, 1);
  // 1e16 + 1000 * 1e-10 = 1e16 + 1e-7, below one ulp of 1e16 (2.0): the
  // compensation carries it.
  CHECK(sum + comp == 1e16);
  CHECK(comp == doctest::Approx(1e-7).epsilon(1e-6));
}

TEST_CASE("active variant honors the scalar override") {
  const auto& k = simd::active();
  const char* env = std::getenv("GAUSSFFT_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") {
    CHECK(k.name == "scalar");
  } else if (simd::avx2_kernels() != nullptr) {
    CHECK(k.name == "avx2");
  } else {
    CHECK(k.name == "scalar");
  }
  MESSAGE("active kernels: " << k.name);
}
