#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "gaussfft/errors.hpp"
#include "gaussfft/transform.hpp"

using namespace gaussfft;

namespace {

constexpr double kPi = std::numbers::pi;

struct Setup {
  TimeGrid grid{1.0, 1024};
  GridFunction phi1 = cosine_basis(1, grid, true);
  GridFunction phi2 = cosine_basis(2, grid, true);
  GridFunction one = GridFunction::constant(grid, 1.0);
  OrthogonalFamily unit1{{phi1}};
  OrthogonalFamily unit2{{phi1, phi2}};
};

CylinderFunctional gaussian(const OrthogonalFamily& A) {
  ProductGaussPoly p;
  for (std::size_t j = 0; j < A.size(); ++j) p.factors.push_back(GaussPolyFactor::standard());
  return CylinderFunctional(A, p);
}

CylinderFunctional sample_functional(const OrthogonalFamily& A) {
  return CylinderFunctional(A, ProductGaussPoly{{GaussPolyFactor{{1.0, {0.5, -0.2}, 0.1}, {1.2, 0.3}, {0.2, -0.1}},
                                                 GaussPolyFactor{{0.7, 0.0, {0.0, 0.4}}, 0.8, {-0.3, 0.0}}}});
}

}  // namespace

TEST_CASE("q-group elements in reciprocal coordinates") {
  CHECK_THROWS_AS(QElem::from_q(0.0), std::domain_error);
  CHECK_THROWS_AS(QElem::identity().q(), std::domain_error);
  CHECK(q_compose(QElem::from_q(2.0), QElem::from_q(2.0)).q() == 1.0);
  CHECK(q_compose(QElem::from_q(3.0), QElem::from_q(-3.0)).is_identity());
  CHECK(q_compose(QElem::identity(), QElem::from_q(-0.25)).q() == -0.25);
  CHECK(q_inverse(QElem::from_q(4.0)).q() == -4.0);
  const double q1 = 1.5, q2 = -0.5;
  CHECK(q_compose(QElem::from_q(q1), QElem::from_q(q2)).q() == doctest::Approx(q1 * q2 / (q1 + q2)).epsilon(1e-15));
}

TEST_CASE("transform tags normalize identities") {
  Setup s;
  CHECK(TransformTag::make(QElem::identity(), s.one).kind == TransformTag::Kind::identity);
  CHECK(TransformTag::make(QElem::from_q(1.0), GridFunction::zero(s.grid)).kind == TransformTag::Kind::identity);
  const auto t = TransformTag::make(QElem::from_q(2.0), s.one);
  CHECK(t.kind == TransformTag::Kind::forward);
  CHECK(t.q == 2.0);
  const auto F = gaussian(s.unit1);
  CHECK(coefficient_distance(apply(TransformTag::make(QElem::identity(), s.one), F).pgp(), F.pgp()) == 0.0);
  CHECK(coefficient_distance(apply(t, F).pgp(), gfft(F, 2.0, s.one).pgp()) == 0.0);
}

TEST_CASE("t_lambda closed form") {
  Setup s;
  const auto F = gaussian(s.unit1);
  // sigma^2 = ||phi_1||^2 = 1: exp(-u^2/2) smoothed -> exp(-r^2/4) / sqrt(2)
  const auto G = t_lambda(F, 1.0, s.one);
  for (double r : {-1.5, 0.0, 0.4, 2.0}) {
    const std::vector<double> u{r};
    CHECK(std::abs(G.eval_f(u) - std::exp(-r * r / 4) / std::sqrt(2.0)) <= 1e-12);
  }
  CHECK(coefficient_distance(t_lambda(F, 1.0, GridFunction::zero(s.grid)).pgp(), F.pgp()) == 0.0);
  CHECK_THROWS(t_lambda(F, 0.0, s.one));
  CHECK_THROWS(t_lambda(F, -1.0, s.one));
  const OrthogonalFamily A({cosine_basis(1, s.grid), cosine_basis(2, s.grid)});
  CHECK_THROWS_AS(t_lambda(gaussian(A), 1.0, cosine_basis(1, s.grid)), MembershipError);
  BlackBoxF bb{[](std::span<const double>) { return cplx(1.0); }, 1, 4.0, 16, "one"};
  CHECK_THROWS(t_lambda(CylinderFunctional(s.unit1, bb), 1.0, s.one));
}

TEST_CASE("t_lambda Monte Carlo oracle") {
  Setup s;
  BlackBoxF bb{[](std::span<const double>) { return cplx(1.0); }, 1, 4.0, 16, "one"};
  const auto est1 = t_lambda_mc(CylinderFunctional(s.unit1, bb), 2.0, s.one, WienerPath::zero(s.grid), 1000, RngStream{1, 0});
  CHECK(est1.re.mean == 1.0);
  CHECK(est1.re.stderr_ == 0.0);

  const auto F = sample_functional(s.unit2);
  const auto zero = WienerPath::zero(s.grid);
  const std::size_t n = 100000;
  const auto est = t_lambda_mc(F, 2.0, s.one, zero, n, RngStream{2, 0});
  const cplx exact = eval_cylinder(t_lambda(F, 2.0, s.one), zero);
  CHECK(std::fabs(est.re.mean - exact.real()) <= 3 * est.re.stderr_);
  CHECK(std::fabs(est.im.mean - exact.imag()) <= 3 * est.im.stderr_);

  // lambda scaling: T_{lambda,h} = T_{1, h / sqrt(lambda)} in distribution.
  const double lambda = 0.5;
  const auto a = t_lambda_mc(F, lambda, s.one, zero, n, RngStream{3, 0});
  const auto b = t_lambda_mc(F, 1.0, (1.0 / std::sqrt(lambda)) * s.one, zero, n, RngStream{4, 0});
  CHECK(std::fabs(zscore(a.re, b.re)) <= 3);
  CHECK(std::fabs(zscore(a.im, b.im)) <= 3);
}

TEST_CASE("gfft inverse and sign invariance") {
  Setup s;
  const auto F = sample_functional(s.unit2);
  for (double q : {-4.5, -1.0, 0.3, 2.0}) {
    for (const auto& h : {s.one, GridFunction::constant(s.grid, 0.35), GridFunction::constant(s.grid, -2.0)}) {
      const auto back = gfft(gfft(F, q, h), -q, h);
      CHECK(coefficient_distance(back.pgp(), F.pgp()) <= 1e-9);
      CHECK(coefficient_distance(gfft(F, q, h).pgp(), gfft(F, q, -h).pgp()) == 0.0);
    }
  }
  CHECK_THROWS(gfft(F, 0.0, s.one));
  CHECK(coefficient_distance(gfft(F, 1.0, GridFunction::zero(s.grid)).pgp(), F.pgp()) == 0.0);
}

TEST_CASE("gfft is the vanishing-damping limit of Gaussian smoothing") {
  Setup s;
  const auto F = gaussian(s.unit1);
  const cplx psi0 = gfft(F, 1.0, s.one).eval_f(std::vector<double>{0.0});
  // Smoothing at lambda = eps - i by direct quadrature, then eps -> 0 by
  // Richardson extrapolation of the (analytic) eps dependence.
  auto smooth = [](double eps) {
    const cplx c{eps, -1.0};
    auto f = [&](double u) { return std::exp(-u * u / 2.0 - c * u * u / 2.0); };
    return std::sqrt(c / (2 * kPi)) *
           boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -40.0, 40.0, 18, 1e-14);
  };
  const cplx e1 = smooth(1e-3), e2 = smooth(5e-4);
  CHECK(std::abs(psi0 - (2.0 * e2 - e1)) <= 1e-6);
  // Closed form of that limit: sqrt(-i / (1 - i)).
  CHECK(std::abs(psi0 - std::sqrt(cplx(0, -1) / cplx(1, -1))) <= 1e-12);
}

TEST_CASE("quadrature continuation reproduces the closed form") {
  Setup s;
  const auto F = CylinderFunctional(s.unit1, ProductGaussPoly{{GaussPolyFactor{{1.0, 0.3}, {1.0, 0.2}, 0.1}}});
  const auto closed = gfft(F, 1.5, s.one);
  const auto p = F.pgp();
  BlackBoxF bb{[p](std::span<const double> u) { return p(u); }, 1, 14.0, 96, "pgp"};
  GeneralOptions go;
  go.r_half_width = 10.0;
  go.r_points = 401;
  const auto sampled = gfft_general(CylinderFunctional(s.unit1, bb), 1.5, s.one, go);
  CHECK(sampled.converged);
  double worst = 0;
  for (std::size_t i = 0; i < sampled.axis.size(); ++i) {
    const std::vector<double> r{sampled.axis[i]};
    worst = std::max(worst, std::abs(sampled.values[i] - closed.eval_f(r)));
  }
  CHECK(worst <= 1e-4);
  CHECK(sampled.rho_steps.size() == 3);

  // Fixed eps, doubled box: the sample does not move.
  GeneralOptions fixed = go;
  fixed.eps = {1e-3, 9e-4};
  fixed.throw_on_failure = false;
  BlackBoxF wide = bb;
  wide.half_width = 28.0;
  wide.panels = 192;
  const auto a = gfft_general(CylinderFunctional(s.unit1, bb), 1.5, s.one, fixed);
  const auto b = gfft_general(CylinderFunctional(s.unit1, wide), 1.5, s.one, fixed);
  double change = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) change = std::max(change, std::abs(a.values[i] - b.values[i]));
  CHECK(change <= 1e-8);
}

TEST_CASE("indicator continuation keeps the L2 norm") {
  Setup s;
  BlackBoxF ind{[](std::span<const double> u) { return cplx(std::fabs(u[0]) <= 1.0 ? 1.0 : 0.0); }, 1, 8.0, 64,
                "indicator"};
  const CylinderFunctional F(s.unit1, ind);
  CHECK(a2_norm(F) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  const auto psi = gfft_general(F, 1.0, s.one);
  CHECK(psi.converged);
  CHECK(std::fabs(psi.l2_norm() - std::sqrt(2.0)) <= 1e-2);

  GeneralOptions strict;
  strict.eps = {1e-1, 5e-2};
  strict.tol = 1e-12;
  CHECK_THROWS_AS(gfft_general(F, 1.0, s.one, strict), ConvergenceError);
  strict.throw_on_failure = false;
  CHECK_FALSE(gfft_general(F, 1.0, s.one, strict).converged);
}

TEST_CASE("composition of transforms") {
  Setup s;
  const auto F = sample_functional(s.unit2);
  const double norm = a2_norm(F);
  CHECK(compose_check(F, 0.8, s.one, GridFunction::zero(s.grid)) == 0.0);
  CHECK(compose_check(F, 0.8, GridFunction::constant(s.grid, 3.0), GridFunction::constant(s.grid, 4.0)) <= 1e-9 * norm);
  const HSeq H{{GridFunction::constant(s.grid, 0.5), GridFunction::constant(s.grid, 0.7), GridFunction::constant(s.grid, -1.2)}};
  CHECK(compose_check_seq(F, -1.3, H) <= 1e-8 * norm);
  CHECK(compose_check_wedge(F, 2.1, HSeq{{s.one}}, H) <= 1e-8 * norm);
  // Composition at different q follows the q-group.
  const auto twice = gfft(gfft(F, 2.0, s.one), 2.0, s.one);
  CHECK(a2_distance(twice, gfft(F, 1.0, s.one)) <= 1e-10 * norm);
  CHECK(coefficient_distance(q_act(q_compose(QElem::from_q(2.0), QElem::from_q(-2.0)), F, s.one).pgp(), F.pgp()) == 0.0);
}

TEST_CASE("Plancherel") {
  Setup s;
  const auto F = gaussian(s.unit1);
  const auto [nf, nt] = plancherel_check(F, 1.0, s.one);
  CHECK(std::fabs(nt / nf - 1) <= 1e-10);
  const CylinderFunctional scaled(s.unit1, F.pgp().scaled(cplx(0.0, -2.5)));
  const auto [sf, st] = plancherel_check(scaled, 1.0, s.one);
  CHECK(sf == doctest::Approx(2.5 * nf).epsilon(1e-13));
  CHECK(st == doctest::Approx(2.5 * nt).epsilon(1e-13));
  // The hypothesis is enforced.
  CHECK_THROWS_AS(plancherel_check(F, 1.0, GridFunction::constant(s.grid, 2.0)), MembershipError);
  // Off the hypothesis the closed form is still isometric: the Fresnel
  // kernel has a unimodular Fourier multiplier for every variance.
  const auto G = sample_functional(s.unit2);
  for (double c : {0.3, 2.0}) {
    const auto h = GridFunction::constant(s.grid, c);
    CHECK_FALSE(in_O_inf_n(G.family, h));
    CHECK(std::fabs(a2_norm(gfft(G, 1.7, h)) / a2_norm(G) - 1.0) <= 1e-10);
  }
}
