#include "gaussfft/simd.hpp"

#include <cmath>

namespace gaussfft::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void dot_many(const double* const* rows, std::size_t m, const double* x,
              std::size_t n, double* out) {
  for (std::size_t r = 0; r < m; ++r) out[r] = dot(rows[r], x, n);
}

void mul(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(double* out, const double* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void hypot(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double aa = a[i] * a[i];
    const double bb = b[i] * b[i];
    out[i] = std::sqrt(aa + bb);
  }
}

void add_squares(double* sum, double* comp, const double* h, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = h[i] * h[i];
    const double s = sum[i];
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
      comp[i] += (s - t) + x;
    } else {
      comp[i] += (x - t) + s;
    }
    sum[i] = t;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", &dot, &dot_many, &mul, &scale, &hypot, &add_squares};
  return k;
}

}  // namespace gaussfft::simd
