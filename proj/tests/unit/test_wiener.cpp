#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaussfft/cylinder.hpp"
#include "gaussfft/errors.hpp"
#include "gaussfft/wiener.hpp"

using namespace gaussfft;

namespace {

// Mean and standard error of the squares of a sample.
struct Moments {
  double mean = 0, var = 0, var_se = 0, skew = 0, kurt = 0;
};

Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double m = 0;
  for (double v : x) m += v;
  m /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {m, m2, std::sqrt((m4 - m2 * m2) / n), m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

}  // namespace

TEST_CASE("wiener path construction") {
  const TimeGrid g(1.0, 4);
  CHECK_THROWS(WienerPath(g, {0.1, 0, 0, 0, 0}));
  const auto p = WienerPath::from_increments(g, std::vector<double>{1, -2, 0.5, 0.25});
  CHECK(p[0] == 0.0);
  CHECK(p[4] == doctest::Approx(-0.25));
  const auto inc = p.increments();
  CHECK(inc[1] == doctest::Approx(-2.0));
}

TEST_CASE("pwz is the left-endpoint sum") {
  const TimeGrid g(1.0, 4);
  const auto x = WienerPath::from_increments(g, std::vector<double>{1, -2, 0.5, 0.25});
  const auto v = GridFunction::sample(g, [](double t) { return 1.0 + t; });
  // 1*1 + 1.25*(-2) + 1.5*0.5 + 1.75*0.25
  CHECK(pwz(v, x) == doctest::Approx(1.0 - 2.5 + 0.75 + 0.4375).epsilon(1e-15));
  CHECK(pwz(GridFunction::constant(g, 1.0), x) == doctest::Approx(x[4]).epsilon(1e-15));
  CHECK(pwz(3.0 * v, x) == doctest::Approx(3.0 * pwz(v, x)).epsilon(1e-15));
  const auto z = z_process(v, x);
  CHECK(z[0] == 0.0);
  CHECK(z[4] == doctest::Approx(pwz(v, x)).epsilon(1e-15));
  const auto id = z_process(GridFunction::constant(g, 1.0), x);
  for (std::size_t k = 0; k <= 4; ++k) CHECK(id[k] == doctest::Approx(x[k]).epsilon(1e-15));
  CHECK_THROWS_AS(pwz(GridFunction::constant(TimeGrid(1.0, 8), 1.0), x), GridMismatch);
}

TEST_CASE("sampled paths have Brownian variance, covariance and Gaussian PWZ integrals") {
  const TimeGrid g(1.0, 64);
  const std::size_t n = 100000;
  const RngStream root{2024, 0};
  const auto v = GridFunction::sample(g, [](double t) { return std::cos(2.0 * t) + t; });
  std::vector<double> xT(n), xs(n), xt(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = sample_path(g, root.child(i));
    CHECK_MESSAGE(p[0] == 0.0, "path must start at 0");
    xT[i] = p[64];
    xs[i] = p[16];
    xt[i] = p[48];
    w[i] = pwz(v, p);
  }
  const auto mT = moments(xT);
  CHECK(std::fabs(mT.var - 1.0) <= 3 * mT.var_se);
  // Cov(x(1/4), x(3/4)) = 1/4
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = xs[i] * xt[i];
  const auto mp = moments(prod);
  CHECK(std::fabs(mp.mean - 0.25) <= 3 * std::sqrt(mp.var / n));
  // pwz(v) ~ N(0, sum of left squares * dt)
  double left = 0;
  for (std::size_t k = 0; k < 64; ++k) left += v[k] * v[k] * g.dt();
  const auto mw = moments(w);
  CHECK(std::fabs(mw.mean) <= 3 * std::sqrt(mw.var / n));
  CHECK(std::fabs(mw.var - left) <= 3 * mw.var_se);
  CHECK(std::fabs(mw.skew) <= 3 * std::sqrt(6.0 / n));
  CHECK(std::fabs(mw.kurt) <= 3 * std::sqrt(24.0 / n));
}

TEST_CASE("Z_h covariance follows beta_h and the cross integral") {
  const TimeGrid g(1.0, 32);
  const std::size_t n = 100000;
  const auto h1 = GridFunction::sample(g, [](double t) { return 1.0 + t; });
  const auto h2 = GridFunction::sample(g, [](double t) { return 2.0 - 3.0 * t; });
  std::vector<double> same(n), cross(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = sample_path(g, RngStream{77, i});
    const auto z1 = z_process(h1, p), z2 = z_process(h2, p);
    same[i] = z1[8] * z1[24];
    cross[i] = z1[24] * z2[8];
  }
  // Left sums of the discrete model up to min(s, t) = t_8.
  double b = 0, c = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    b += h1[k] * h1[k] * g.dt();
    c += h1[k] * h2[k] * g.dt();
  }
  const auto ms = moments(same), mc = moments(cross);
  CHECK(std::fabs(ms.mean - b) <= 3 * std::sqrt(ms.var / n));
  CHECK(std::fabs(mc.mean - c) <= 3 * std::sqrt(mc.var / n));
  // The continuous beta_h differs from the left sum by O(dt).
  CHECK(std::fabs(beta(h1, g.node(8)) - b) <= 2 * g.dt() * 4.0);
}

TEST_CASE("pwz series") {
  const TimeGrid g(1.0, 4096);
  const auto phi1 = cosine_basis(1, g, true);
  const auto x = sample_path(g, RngStream{5, 5});
  CHECK(std::fabs(pwz_series(phi1, x, 1) - pwz(phi1, x)) <= 1e-10);
  CHECK(std::fabs(pwz_series(phi1, x, 8) - pwz(phi1, x)) <= 1e-10);
  CHECK_THROWS(pwz_series(phi1, x, 0));

  const auto v = GridFunction::sample(g, [](double t) { return t; });
  double prev = INFINITY;
  for (std::size_t m : {64u, 128u, 256u}) {
    double sq = 0;
    const std::size_t paths = 1000;
    for (std::size_t i = 0; i < paths; ++i) {
      const auto p = sample_path(g, RngStream{6, i});
      const double d = pwz_series(v, p, m) - pwz(v, p);
      sq += d * d;
    }
    // The residual is a left sum of (series - v) against the increments, so
    // its variance is sum_k (series(t_k) - v(t_k))^2 dt.
    std::vector<double> series(g.intervals(), 0.0);
    for (std::size_t j = 1; j <= m; ++j) {
      const auto phi = GridFunction::sample(
          g, [&](double t) { return std::sqrt(2.0) * std::cos((static_cast<double>(j) - 0.5) * std::numbers::pi * t); });
      const double c = inner_product(v, phi);
      for (std::size_t k = 0; k < g.intervals(); ++k) series[k] += c * phi[k];
    }
    double var = 0;
    for (std::size_t k = 0; k < g.intervals(); ++k) var += (series[k] - v[k]) * (series[k] - v[k]) * g.dt();
    const double rms = std::sqrt(sq / paths);
    CHECK(std::fabs(sq / paths / var - 1.0) <= 5 * std::sqrt(2.0 / paths));
    CHECK(rms <= prev * 1.05);
    prev = rms;
  }
}

TEST_CASE("moment accumulator merge matches a single pass") {
  MomentAccumulator a, b, all;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(i * 0.37) * 3 + (i % 7);
    (i < 400 ? a : b).add(x);
    all.add(x);
  }
  a.merge(b);
  CHECK(a.count() == 1000);
  CHECK(a.estimate().mean == doctest::Approx(all.estimate().mean).epsilon(1e-13));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("zscore conventions") {
  CHECK(zscore({1.0, 0.0, 10}, {1.0, 0.0, 10}) == 0.0);
  CHECK(std::isinf(zscore({1.0, 0.0, 10}, {2.0, 0.0, 10})));
  CHECK(zscore({1.0, 0.3, 10}, {0.0, 0.4, 10}) == doctest::Approx(2.0));
}

TEST_CASE("Monte Carlo driver is independent of the worker count") {
  const TimeGrid g(1.0, 16);
  auto fn = [](std::span<const std::span<const double>> inc, std::span<double> out) {
    double s = 0;
    for (double d : inc[0]) s += d;
    out[0] = s * s;
    out[1] = std::cos(s + inc[1][0]);
  };
  const auto a = run_monte_carlo(g, 20000, 2, 2, RngStream{3, 1}, fn, McOptions{1, 1000});
  const auto b = run_monte_carlo(g, 20000, 2, 2, RngStream{3, 1}, fn, McOptions{4, 1000});
  for (int o = 0; o < 2; ++o) {
    CHECK(a[o].mean == b[o].mean);
    CHECK(a[o].stderr_ == b[o].stderr_);
  }
  CHECK(std::fabs(a[0].mean - 1.0) <= 3 * a[0].stderr_);
  auto thrower = [](std::span<const std::span<const double>>, std::span<double>) {
    throw std::runtime_error("boom");
  };
  CHECK_THROWS_AS(run_monte_carlo(g, 100, 1, 1, RngStream{}, thrower, McOptions{3, 10}), std::runtime_error);
}
