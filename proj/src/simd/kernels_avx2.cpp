#include "gaussfft/simd.hpp"

#include <immintrin.h>

#include <cmath>

namespace gaussfft::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Four rows at a time so each load of x feeds four accumulators.
void dot_many(const double* const* rows, std::size_t m, const double* x,
              std::size_t n, double* out) {
  std::size_t r = 0;
  for (; r + 4 <= m; r += 4) {
    const double* r0 = rows[r];
    const double* r1 = rows[r + 1];
    const double* r2 = rows[r + 2];
    const double* r3 = rows[r + 3];
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d xv = _mm256_loadu_pd(x + i);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + i), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + i), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + i), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + i), xv, a3);
    }
    double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
    for (; i < n; ++i) {
      s0 += r0[i] * x[i];
      s1 += r1[i] * x[i];
      s2 += r2[i] * x[i];
      s3 += r3[i] * x[i];
    }
    out[r] = s0;
    out[r + 1] = s1;
    out[r + 2] = s2;
    out[r + 3] = s3;
  }
  for (; r < m; ++r) out[r] = dot(rows[r], x, n);
}

void mul(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(double* out, const double* a, double s, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), sv));
  }
  for (; i < n; ++i) out[i] = a[i] * s;
}

void hypot(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d bv = _mm256_loadu_pd(b + i);
    const __m256d sum = _mm256_add_pd(_mm256_mul_pd(av, av), _mm256_mul_pd(bv, bv));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sum));
  }
  for (; i < n; ++i) {
    const double aa = a[i] * a[i];
    const double bb = b[i] * b[i];
    out[i] = std::sqrt(aa + bb);
  }
}

void add_squares(double* sum, double* comp, const double* h, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d hv = _mm256_loadu_pd(h + i);
    const __m256d x = _mm256_mul_pd(hv, hv);
    const __m256d s = _mm256_loadu_pd(sum + i);
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d big_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d big_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    const __m256d abs_s = _mm256_andnot_pd(sign_mask, s);
    const __m256d abs_x = _mm256_andnot_pd(sign_mask, x);
    const __m256d use_s = _mm256_cmp_pd(abs_s, abs_x, _CMP_GE_OQ);
    const __m256d corr = _mm256_blendv_pd(big_x, big_s, use_s);
    _mm256_storeu_pd(comp + i, _mm256_add_pd(_mm256_loadu_pd(comp + i), corr));
    _mm256_storeu_pd(sum + i, t);
  }
  for (; i < n; ++i) {
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

const Kernels& avx2_kernels_impl() {
  static const Kernels k{"avx2", &dot, &dot_many, &mul, &scale, &hypot, &add_squares};
  return k;
}

}  // namespace gaussfft::simd
