#pragma once

// Data-parallel inner loops used by the grid calculus and the Monte Carlo
// samplers. Every kernel has a scalar reference implementation; vector
// variants are selected once at runtime from the CPU feature set.
//
// Nodewise kernels (mul, hypot, add_squares) are bit-identical across
// variants. Reductions (dot, dot_many) agree to rounding only.

#include <cstddef>
#include <string_view>

namespace gaussfft::simd {

struct Kernels {
  std::string_view name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // out[r] = sum_i rows[r][i] * x[i] for r < m
  void (*dot_many)(const double* const* rows, std::size_t m, const double* x,
                   std::size_t n, double* out);

  // out[i] = a[i] * b[i]
  void (*mul)(double* out, const double* a, const double* b, std::size_t n);

  // out[i] = a[i] * s
  void (*scale)(double* out, const double* a, double s, std::size_t n);

  // out[i] = sqrt(a[i]^2 + b[i]^2), no rescaling
  void (*hypot)(double* out, const double* a, const double* b, std::size_t n);

  // Neumaier-compensated nodewise accumulation: sum[i] += h[i]^2 with the
  // running compensation kept in comp[i].
  void (*add_squares)(double* sum, double* comp, const double* h, std::size_t n);
};

const Kernels& scalar_kernels();

// nullptr when the build or the host CPU lacks AVX2+FMA.
const Kernels* avx2_kernels();

// The variant used by the library. Setting GAUSSFFT_SIMD=scalar in the
// environment forces the reference path.
const Kernels& active();

}  // namespace gaussfft::simd
