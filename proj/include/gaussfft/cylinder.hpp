#pragma once

// Cylinder functionals F(x) = f(<alpha_1, x>, ..., <alpha_n, x>) over an
// orthogonal family, membership tests for the weight classes that keep
// alpha_j h orthogonal (orthonormal), and the L2(R^n) inner product on the
// representing f.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gaussfft/gauss_poly.hpp"
#include "gaussfft/grid.hpp"
#include "gaussfft/wiener.hpp"

namespace gaussfft {

inline constexpr double kOrthogonalityTol = 1e-8;

class OrthogonalFamily {
 public:
  // Throws std::invalid_argument if the atoms are not pairwise orthogonal
  // within tol, if any atom has norm <= tol, or if grids differ.
  OrthogonalFamily(std::vector<GridFunction> atoms, double tol = kOrthogonalityTol);

  const std::vector<GridFunction>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const TimeGrid& grid() const { return atoms_.front().grid(); }
  double tol() const { return tol_; }

  // Row-major Gram matrix of the atoms.
  std::vector<double> gram() const;

 private:
  std::vector<GridFunction> atoms_;
  double tol_;
};

// f(u) = prod_j g_j(u_j), one Gaussian-polynomial factor per coordinate.
struct ProductGaussPoly {
  std::vector<GaussPolyFactor> factors;

  std::size_t arity() const { return factors.size(); }
  cplx operator()(std::span<const double> u) const;
  ProductGaussPoly scaled(cplx c) const;
};

// Largest absolute difference over coefficients, a and b, factor by factor.
// Shorter coefficient lists are padded with zeros.
double coefficient_distance(const ProductGaussPoly& f, const ProductGaussPoly& g);

// Arbitrary f in L2(R^n), integrated by composite Gauss-Legendre over the
// box [-L, L]^n with M panels per axis.
struct BlackBoxF {
  std::function<cplx(std::span<const double>)> fn;
  std::size_t arity = 1;
  double half_width = 8.0;
  std::size_t panels = 64;
  std::string label;

  cplx operator()(std::span<const double> u) const { return fn(u); }
};

struct CylinderFunctional {
  CylinderFunctional(OrthogonalFamily family, std::variant<ProductGaussPoly, BlackBoxF> f);

  OrthogonalFamily family;
  std::variant<ProductGaussPoly, BlackBoxF> f;

  std::size_t arity() const { return family.size(); }
  bool closed_form() const { return std::holds_alternative<ProductGaussPoly>(f); }
  const ProductGaussPoly& pgp() const;  // throws std::invalid_argument for BlackBoxF
  cplx eval_f(std::span<const double> u) const;
};

// e_j(t) = cos((j - 1/2) pi t / T), j >= 1; multiplied by sqrt(2/T) when
// normalized.
GridFunction cosine_basis(std::size_t j, const TimeGrid& grid, bool normalized = false);

// h is nonzero, every alpha_j h is nonzero, and {alpha_j h} is orthogonal.
bool in_O_inf(const OrthogonalFamily& family, const GridFunction& h, double tol = kOrthogonalityTol);

// As in_O_inf, and additionally every ||alpha_j h|| is 1 within tol.
bool in_O_inf_n(const OrthogonalFamily& family, const GridFunction& h, double tol = kOrthogonalityTol);

// ||alpha_j h||_2^2 for every atom.
std::vector<double> scaled_variances(const OrthogonalFamily& family, const GridFunction& h);

// Requires h1, h2 in O_inf (throws MembershipError otherwise). Returns
// in_O_inf(family, s(h1, h2)) and checks that the squared norms add.
bool s_preserves_O_inf(const OrthogonalFamily& family, const GridFunction& h1, const GridFunction& h2,
                       double tol = kOrthogonalityTol);

std::vector<GridFunction> find_O_inf_elements(const OrthogonalFamily& family, std::span<const GridFunction> pool,
                                              double tol = kOrthogonalityTol);

// The PWZ integrals <alpha_j, y>.
std::vector<double> pwz_coordinates(const OrthogonalFamily& family, const WienerPath& y);

cplx eval_cylinder(const CylinderFunctional& F, const WienerPath& y);

// <<F1, F2>> = int f1 conj(f2) du. Closed form for two ProductGaussPoly
// operands, box quadrature otherwise. Both operands must share the family.
cplx a2_inner(const CylinderFunctional& F1, const CylinderFunctional& F2);
double a2_norm(const CylinderFunctional& F);

// ||F1 - F2|| without cancellation: differences of factors are formed
// pointwise and integrated numerically.
double a2_distance(const CylinderFunctional& F1, const CylinderFunctional& F2);

// Same-family check used by the binary operations above.
bool same_family(const OrthogonalFamily& a, const OrthogonalFamily& b, double tol = 1e-12);

// Tensor-product quadrature nodes and weights on [-L, L] (M panels, 8-point
// Gauss-Legendre in each).
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LineRule box_rule(double half_width, std::size_t panels);

}  // namespace gaussfft
