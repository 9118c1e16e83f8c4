#pragma once

// Gaussian smoothing T_{lambda,h} (lambda > 0) and its L2 analytic
// continuation, the Gaussian Fourier-Feynman transform T_{q,h}, on cylinder
// functionals. On ProductGaussPoly functionals both are the closed-form
// convolution of gauss_poly.hpp with c_j = lambda / ||alpha_j h||^2,
// lambda = -iq for the transform. Black-box functionals go through an
// eps-regularized quadrature sequence lambda = eps - iq.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gaussfft/cylinder.hpp"
#include "gaussfft/rng.hpp"
#include "gaussfft/wiener.hpp"

namespace gaussfft {

// Element of the q-parameter group in reciprocal coordinates r = 1/q; r = 0
// is the identity transform.
struct QElem {
  double r = 0.0;

  static QElem identity() { return QElem{0.0}; }
  static QElem from_q(double q);
  bool is_identity() const { return r == 0.0; }
  double q() const;  // throws std::domain_error for the identity

  friend bool operator==(const QElem&, const QElem&) = default;
};

// Composition T_{q2} o T_{q1}: r1 + r2. For a nonzero result the parameter
// is q1 q2 / (q1 + q2); q + (-q) is the identity.
QElem q_compose(QElem a, QElem b);
QElem q_inverse(QElem a);

struct TransformTag {
  enum class Kind { identity, forward };

  Kind kind = Kind::identity;
  double q = 0.0;
  GridFunction h;

  // Normalizes h == 0 and the q-group identity to Kind::identity.
  static TransformTag make(QElem q, GridFunction h);
};

// Gaussian smoothing with variances ||alpha_j h||^2 / lambda.
CylinderFunctional t_lambda(const CylinderFunctional& F, double lambda, const GridFunction& h);

// Mean of F(y + lambda^{-1/2} Z_h(x, .)) over n Brownian paths.
ComplexEstimate t_lambda_mc(const CylinderFunctional& F, double lambda, const GridFunction& h, const WienerPath& y,
                            std::size_t n, const RngStream& rng, const McOptions& opts = {});

// Several functionals on shared paths (all on one grid).
std::vector<ComplexEstimate> t_lambda_mc_batch(std::span<const CylinderFunctional> Fs, double lambda,
                                               const GridFunction& h, const WienerPath& y, std::size_t n,
                                               const RngStream& rng, const McOptions& opts = {});

// T_{q,h}(F) in closed form. h == 0 is the identity.
CylinderFunctional gfft(const CylinderFunctional& F, double q, const GridFunction& h);

// Same closed form with an arbitrary kernel parameter lambda (Re lambda >= 0,
// lambda != 0); gfft is lambda = -iq and t_lambda is real lambda.
CylinderFunctional smooth_closed_form(const CylinderFunctional& F, cplx lambda, const GridFunction& h);

CylinderFunctional apply(const TransformTag& tag, const CylinderFunctional& F);

struct GeneralOptions {
  std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double r_half_width = 40.0;
  std::size_t r_points = 1601;
  double tol = 1e-2;
  // Scales rho at which the Wiener-weighted L2 convergence is also checked.
  std::vector<double> rho{0.5, 1.0, 2.0};
  bool throw_on_failure = true;
};

struct SampledTransform {
  std::vector<double> axis;          // sample points, shared by every coordinate
  std::size_t arity = 1;
  std::vector<cplx> values;          // row-major, last coordinate fastest
  std::vector<double> eps;
  std::vector<double> l2_steps;      // ||psi_{eps_k} - psi_{eps_{k-1}}|| for k >= 1
  std::vector<std::vector<double>> rho_steps;  // same, Gaussian-weighted, per rho
  bool converged = false;

  double l2_norm() const;
  cplx at(std::span<const std::size_t> index) const;
};

// psi sampled on [-R, R]^n by box quadrature of the eps-damped kernel.
SampledTransform gfft_general(const CylinderFunctional& F, double q, const GridFunction& h,
                              const GeneralOptions& opts = {});

// Residual ||T_{q,h2}(T_{q,h1} F) - T_{q,s(h1,h2)} F||.
double compose_check(const CylinderFunctional& F, double q, const GridFunction& h1, const GridFunction& h2);

// Iterated transform over H against the single transform with s(H).
double compose_check_seq(const CylinderFunctional& F, double q, const HSeq& H);

// T_{q,s(H2)}(T_{q,s(H1)} F) against T_{q,s(H1 ^ H2)} F.
double compose_check_wedge(const CylinderFunctional& F, double q, const HSeq& H1, const HSeq& H2);

// (||F||, ||T_{q,h} F||). Requires h in O_inf^n of the family.
std::pair<double, double> plancherel_check(const CylinderFunctional& F, double q, const GridFunction& h);

// Closed-form action of a q-group element: the identity leaves F unchanged.
CylinderFunctional q_act(QElem q, const CylinderFunctional& F, const GridFunction& h);

}  // namespace gaussfft
