#pragma once

// One-dimensional complex Gaussian-polynomial functions
//
//   g(u) = p(u) exp(-a u^2 / 2 + b u),   Re a > 0,
//
// and the closed forms the transforms are built from: Gaussian moment
// integrals and the normalized convolution
//
//   (K_c g)(r) = sqrt(c / 2pi) * int g(u) exp(-c (u - r)^2 / 2) du,  Re c >= 0.
//
// For c = lambda / sigma^2 with lambda > 0 this is Gaussian smoothing; for
// c = -i q / sigma^2 it is the Fresnel kernel. The class is closed under K_c:
// 1/a' = 1/a + 1/c, so Re a' > 0 is preserved.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace gaussfft {

using cplx = std::complex<double>;

struct GaussPolyFactor {
  std::vector<cplx> coeffs;  // ascending powers of u
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  cplx operator()(double u) const;
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  // exp(-u^2/2) times a constant.
  static GaussPolyFactor standard(cplx scale = 1.0);
};

cplx eval_poly(std::span<const cplx> coeffs, cplx u);
std::vector<cplx> poly_mul(std::span<const cplx> p, std::span<const cplx> q);

// int P(u) exp(-A u^2/2 + B u) du over the real line. Requires Re A > 0.
cplx gaussian_poly_integral(std::span<const cplx> poly, cplx A, cplx B);

// K_c applied to g, in closed form. Throws std::domain_error when c == 0,
// Re c < 0, or Re(a + c) <= 0.
GaussPolyFactor gaussian_convolve(const GaussPolyFactor& g, cplx c);

// int f(u) conj(g(u)) du, closed form.
cplx l2_inner(const GaussPolyFactor& f, const GaussPolyFactor& g);

// Interval outside which |g| is negligible (below ~1e-40 of its peak scale).
std::pair<double, double> support_interval(const GaussPolyFactor& g);

// Adaptive Gauss-Kronrod bisection over [lo, hi] for complex integrands.
// A piece is accepted once its error estimate is below its length share of
// max(tol * |whole-interval estimate|, abs_tol).
cplx integrate_adaptive(const std::function<cplx(double)>& fn, double lo, double hi, double tol = 1e-13,
                        double* error = nullptr, double abs_tol = 0.0);

}  // namespace gaussfft
