#include "gaussfft/gauss_poly.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaussfft {
namespace {

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Coefficients (in mu) of E[P(mu + V)] where V is the complex "normal" with
// variance 1/A: E V^{2m} = (2m-1)!! A^{-m}, odd moments vanish.
std::vector<cplx> smoothed_poly(std::span<const cplx> poly, cplx A) {
  std::vector<cplx> out(std::max<std::size_t>(poly.size(), 1), cplx{0.0, 0.0});
  const cplx inv_a = 1.0 / A;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    cplx moment = 1.0;  // (2m-1)!! A^{-m}
    for (std::size_t m = 0; 2 * m <= k; ++m) {
      out[k - 2 * m] += poly[k] * binomial(k, 2 * m) * moment;
      moment *= static_cast<double>(2 * m + 1) * inv_a;
    }
  }
  return out;
}

// Coefficients in r of Q(beta0 + beta1 r).
std::vector<cplx> affine_substitute(std::span<const cplx> q, cplx beta0, cplx beta1) {
  std::vector<cplx> out(q.size(), cplx{0.0, 0.0});
  for (std::size_t j = 0; j < q.size(); ++j) {
    // (beta0 + beta1 r)^j = sum_i C(j,i) beta0^{j-i} beta1^i r^i
    cplx b1pow = 1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      out[i] += q[j] * binomial(j, i) * std::pow(beta0, static_cast<int>(j - i)) * b1pow;
      b1pow *= beta1;
    }
  }
  return out;
}

}  // namespace

cplx eval_poly(std::span<const cplx> coeffs, cplx u) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::vector<cplx> poly_mul(std::span<const cplx> p, std::span<const cplx> q) {
  if (p.empty() || q.empty()) return {};
  std::vector<cplx> out(p.size() + q.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

cplx GaussPolyFactor::operator()(double u) const {
  return eval_poly(coeffs, u) * std::exp(-0.5 * a * u * u + b * u);
}

GaussPolyFactor GaussPolyFactor::standard(cplx scale) { return GaussPolyFactor{{scale}, {1.0, 0.0}, {0.0, 0.0}}; }

cplx gaussian_poly_integral(std::span<const cplx> poly, cplx A, cplx B) {
  if (!(A.real() > 0.0)) throw std::domain_error("gaussian_poly_integral: Re A must be positive");
  if (poly.empty()) return 0.0;
  const cplx mu = B / A;
  const std::vector<cplx> q = smoothed_poly(poly, A);
  return std::sqrt(2.0 * std::numbers::pi / A) * std::exp(B * B / (2.0 * A)) * eval_poly(q, mu);
}

GaussPolyFactor gaussian_convolve(const GaussPolyFactor& g, cplx c) {
  if (c == cplx{0.0, 0.0}) throw std::domain_error("gaussian_convolve: zero kernel parameter");
  if (c.real() < 0.0) throw std::domain_error("gaussian_convolve: Re c must be nonnegative");
  const cplx A = g.a + c;
  if (!(A.real() > 0.0)) throw std::domain_error("gaussian_convolve: Re(a + c) must be positive");

  // Exponent in u: -(a+c) u^2/2 + (b + c r) u - c r^2/2. Completing the
  // square at mu = (b + c r)/A leaves exp(b^2/2A + (bc/A) r - (ac/A) r^2/2).
  const std::vector<cplx> q = smoothed_poly(g.coeffs, A);
  std::vector<cplx> coeffs = affine_substitute(q, g.b / A, c / A);
  const cplx prefactor = std::sqrt(c / (2.0 * std::numbers::pi)) * std::sqrt(2.0 * std::numbers::pi / A) *
                         std::exp(g.b * g.b / (2.0 * A));
  for (cplx& x : coeffs) x *= prefactor;
  if (g.coeffs.empty()) coeffs.clear();
  return GaussPolyFactor{std::move(coeffs), g.a * c / A, g.b * c / A};
}

cplx l2_inner(const GaussPolyFactor& f, const GaussPolyFactor& g) {
  std::vector<cplx> gc(g.coeffs.size());
  std::transform(g.coeffs.begin(), g.coeffs.end(), gc.begin(), [](cplx z) { return std::conj(z); });
  const std::vector<cplx> p = poly_mul(f.coeffs, gc);
  return gaussian_poly_integral(p, f.a + std::conj(g.a), f.b + std::conj(g.b));
}

std::pair<double, double> support_interval(const GaussPolyFactor& g) {
  const double ra = g.a.real();
  if (!(ra > 0.0)) throw std::domain_error("support_interval: Re a must be positive");
  const double center = g.b.real() / ra;
  const double width = 1.0 / std::sqrt(ra);
  // exp(-K^2/2) with K = 14 + degree leaves room for polynomial growth.
  const double k = 14.0 + static_cast<double>(g.degree());
  return {center - k * width, center + k * width};
}

cplx integrate_adaptive(const std::function<cplx(double)>& fn, double lo, double hi, double tol, double* error,
                        double abs_tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Piece {
    double a, b;
    int depth;
  };
  constexpr int kMaxDepth = 40;
  const double width = hi - lo;
  std::vector<Piece> stack{{lo, hi, 0}};
  cplx total{};
  double total_err = 0.0;
  // A whole-interval estimate sets the relative scale.
  double coarse_err = 0.0;
  const double scale = std::abs(GK::integrate(fn, lo, hi, 0, 0.0, &coarse_err));
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    double err = 0.0;
    const cplx v = GK::integrate(fn, p.a, p.b, 0, 0.0, &err);
    const double share = (p.b - p.a) / width;
    if (err <= std::max(tol * scale, abs_tol) * share || p.depth >= kMaxDepth) {
      total += v;
      total_err += err;
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, p.depth + 1});
    stack.push_back({p.a, mid, p.depth + 1});
  }
  if (error != nullptr) *error = total_err;
  return total;
}

}  // namespace gaussfft
