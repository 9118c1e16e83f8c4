#include "gaussfft/cylinder.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gaussfft/errors.hpp"

namespace gaussfft {

OrthogonalFamily::OrthogonalFamily(std::vector<GridFunction> atoms, double tol) : atoms_(std::move(atoms)), tol_(tol) {
  if (atoms_.empty()) throw std::invalid_argument("OrthogonalFamily: no atoms");
  if (!(tol > 0.0)) throw std::invalid_argument("OrthogonalFamily: tol must be positive");
  for (const auto& a : atoms_) require_same_grid(atoms_.front().grid(), a.grid(), "OrthogonalFamily");
  const std::size_t n = atoms_.size();
  const std::vector<double> g = gram();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::sqrt(std::max(0.0, g[i * n + i])) > tol)) {
      throw std::invalid_argument("OrthogonalFamily: atom " + std::to_string(i) + " has zero norm");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(g[i * n + j]) > tol) {
        std::ostringstream msg;
        msg << "OrthogonalFamily: atoms " << i << " and " << j << " not orthogonal (inner product " << g[i * n + j]
            << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

std::vector<double> OrthogonalFamily::gram() const {
  const std::size_t n = atoms_.size();
  std::vector<double> g(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      g[i * n + j] = g[j * n + i] = inner_product(atoms_[i], atoms_[j]);
    }
  }
  return g;
}

cplx ProductGaussPoly::operator()(std::span<const double> u) const {
  if (u.size() != factors.size()) throw std::invalid_argument("ProductGaussPoly: arity mismatch");
  cplx v = 1.0;
  for (std::size_t j = 0; j < factors.size(); ++j) v *= factors[j](u[j]);
  return v;
}

ProductGaussPoly ProductGaussPoly::scaled(cplx c) const {
  ProductGaussPoly out = *this;
  if (!out.factors.empty()) {
    for (cplx& x : out.factors.front().coeffs) x *= c;
  }
  return out;
}

CylinderFunctional::CylinderFunctional(OrthogonalFamily fam, std::variant<ProductGaussPoly, BlackBoxF> fun)
    : family(std::move(fam)), f(std::move(fun)) {
  const std::size_t n = std::visit(
      [](const auto& g) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, ProductGaussPoly>) {
          return g.arity();
        } else {
          return g.arity;
        }
      },
      f);
  if (n != family.size()) {
    throw std::invalid_argument("CylinderFunctional: f has arity " + std::to_string(n) + " but family has " +
                                std::to_string(family.size()) + " atoms");
  }
  if (const auto* p = std::get_if<ProductGaussPoly>(&f)) {
    for (const auto& fac : p->factors) {
      if (!(fac.a.real() > 0.0)) throw std::invalid_argument("CylinderFunctional: Re a_j must be positive");
    }
  } else {
    const auto& bb = std::get<BlackBoxF>(f);
    if (!bb.fn) throw std::invalid_argument("CylinderFunctional: empty black-box function");
    if (!(bb.half_width > 0.0)) throw std::invalid_argument("BlackBoxF: half_width must be positive");
    if (bb.panels < 2) throw std::invalid_argument("BlackBoxF: need at least 2 panels (16 points) per axis");
  }
}

const ProductGaussPoly& CylinderFunctional::pgp() const {
  if (const auto* p = std::get_if<ProductGaussPoly>(&f)) return *p;
  throw std::invalid_argument("closed form requires a ProductGaussPoly functional");
}

cplx CylinderFunctional::eval_f(std::span<const double> u) const {
  return std::visit([&](const auto& g) { return g(u); }, f);
}

double coefficient_distance(const ProductGaussPoly& f, const ProductGaussPoly& g) {
  if (f.arity() != g.arity()) throw std::invalid_argument("coefficient_distance: arity mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < f.arity(); ++j) {
    const auto& x = f.factors[j];
    const auto& y = g.factors[j];
    const std::size_t m = std::max(x.coeffs.size(), y.coeffs.size());
    for (std::size_t k = 0; k < m; ++k) {
      const cplx cx = k < x.coeffs.size() ? x.coeffs[k] : cplx{};
      const cplx cy = k < y.coeffs.size() ? y.coeffs[k] : cplx{};
      d = std::max(d, std::abs(cx - cy));
    }
    d = std::max({d, std::abs(x.a - y.a), std::abs(x.b - y.b)});
  }
  return d;
}

GridFunction cosine_basis(std::size_t j, const TimeGrid& grid, bool normalized) {
  if (j < 1) throw std::invalid_argument("cosine_basis: index starts at 1");
  const double T = grid.horizon();
  const double freq = (static_cast<double>(j) - 0.5) * std::numbers::pi / T;
  const double scale = normalized ? std::sqrt(2.0 / T) : 1.0;
  return GridFunction::sample(grid, [&](double t) { return scale * std::cos(freq * t); });
}

namespace {

std::vector<GridFunction> scaled_atoms(const OrthogonalFamily& family, const GridFunction& h) {
  require_same_grid(family.grid(), h.grid(), "scaled family");
  std::vector<GridFunction> out;
  out.reserve(family.size());
  for (const auto& a : family.atoms()) out.push_back(a * h);
  return out;
}

bool orthogonal_nonzero(const std::vector<GridFunction>& ah, const GridFunction& h, double tol) {
  if (!(l2_norm(h) > tol)) return false;
  for (std::size_t i = 0; i < ah.size(); ++i) {
    if (!(l2_norm(ah[i]) > tol)) return false;
    for (std::size_t j = i + 1; j < ah.size(); ++j) {
      if (std::fabs(inner_product(ah[i], ah[j])) > tol) return false;
    }
  }
  return true;
}

}  // namespace

bool in_O_inf(const OrthogonalFamily& family, const GridFunction& h, double tol) {
  return orthogonal_nonzero(scaled_atoms(family, h), h, tol);
}

bool in_O_inf_n(const OrthogonalFamily& family, const GridFunction& h, double tol) {
  const auto ah = scaled_atoms(family, h);
  if (!orthogonal_nonzero(ah, h, tol)) return false;
  return std::all_of(ah.begin(), ah.end(), [&](const GridFunction& g) { return std::fabs(l2_norm(g) - 1.0) <= tol; });
}

std::vector<double> scaled_variances(const OrthogonalFamily& family, const GridFunction& h) {
  std::vector<double> out;
  for (const auto& g : scaled_atoms(family, h)) out.push_back(inner_product(g, g));
  return out;
}

bool s_preserves_O_inf(const OrthogonalFamily& family, const GridFunction& h1, const GridFunction& h2, double tol) {
  if (!in_O_inf(family, h1, tol)) throw MembershipError("s_preserves_O_inf: h1 is not in O_inf(A)");
  if (!in_O_inf(family, h2, tol)) throw MembershipError("s_preserves_O_inf: h2 is not in O_inf(A)");
  const GridFunction s = s_combine(h1, h2);
  if (!in_O_inf(family, s, tol)) return false;
  const auto v1 = scaled_variances(family, h1);
  const auto v2 = scaled_variances(family, h2);
  const auto vs = scaled_variances(family, s);
  for (std::size_t j = 0; j < vs.size(); ++j) {
    const double expect = v1[j] + v2[j];
    if (std::fabs(vs[j] - expect) > tol * std::max(1.0, expect)) return false;
  }
  return true;
}

std::vector<GridFunction> find_O_inf_elements(const OrthogonalFamily& family, std::span<const GridFunction> pool,
                                              double tol) {
  std::vector<GridFunction> out;
  for (const auto& h : pool) {
    if (in_O_inf(family, h, tol)) out.push_back(h);
  }
  return out;
}

std::vector<double> pwz_coordinates(const OrthogonalFamily& family, const WienerPath& y) {
  require_same_grid(family.grid(), y.grid(), "pwz_coordinates");
  const std::vector<double> dy = y.increments();
  std::vector<double> r;
  r.reserve(family.size());
  for (const auto& a : family.atoms()) r.push_back(pwz_increments(a, dy));
  return r;
}

cplx eval_cylinder(const CylinderFunctional& F, const WienerPath& y) {
  const std::vector<double> r = pwz_coordinates(F.family, y);
  return F.eval_f(r);
}

bool same_family(const OrthogonalFamily& a, const OrthogonalFamily& b, double tol) {
  if (a.size() != b.size() || !(a.grid() == b.grid())) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (max_abs_diff(a.atoms()[j], b.atoms()[j]) > tol) return false;
  }
  return true;
}

LineRule box_rule(double half_width, std::size_t panels) {
  using GL = boost::math::quadrature::gauss<double, 8>;
  const auto& abscissa = GL::abscissa();
  const auto& weight = GL::weights();
  LineRule rule;
  const double h = 2.0 * half_width / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = -half_width + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      // boost stores the nonnegative half of the symmetric rule.
      rule.nodes.push_back(mid - 0.5 * h * abscissa[i]);
      rule.weights.push_back(0.5 * h * weight[i]);
      if (abscissa[i] != 0.0) {
        rule.nodes.push_back(mid + 0.5 * h * abscissa[i]);
        rule.weights.push_back(0.5 * h * weight[i]);
      }
    }
  }
  return rule;
}

namespace {

void require_same_family(const CylinderFunctional& F1, const CylinderFunctional& F2, const char* op) {
  if (F1.arity() != F2.arity()) throw std::invalid_argument(std::string(op) + ": arity mismatch");
  if (!same_family(F1.family, F2.family)) throw std::invalid_argument(std::string(op) + ": families differ");
}

std::pair<double, std::size_t> box_of(const CylinderFunctional& F) {
  if (const auto* bb = std::get_if<BlackBoxF>(&F.f)) return {bb->half_width, bb->panels};
  return {0.0, 0};
}

// Tensor quadrature of g over the larger box of the two operands.
cplx box_integral(const CylinderFunctional& F1, const CylinderFunctional& F2,
                  const std::function<cplx(std::span<const double>)>& g) {
  const auto [l1, m1] = box_of(F1);
  const auto [l2, m2] = box_of(F2);
  const LineRule rule = box_rule(std::max(l1, l2), std::max(m1, m2));
  const std::size_t n = F1.arity();
  const std::size_t q = rule.nodes.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> u(n);
  cplx total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      u[j] = rule.nodes[idx[j]];
      w *= rule.weights[idx[j]];
    }
    total += w * g(u);
    std::size_t j = 0;
    while (j < n && ++idx[j] == q) idx[j++] = 0;
    if (j == n) break;
  }
  return total;
}

}  // namespace

cplx a2_inner(const CylinderFunctional& F1, const CylinderFunctional& F2) {
  require_same_family(F1, F2, "a2_inner");
  if (F1.closed_form() && F2.closed_form()) {
    const auto& p = F1.pgp();
    const auto& q = F2.pgp();
    cplx v = 1.0;
    for (std::size_t j = 0; j < p.arity(); ++j) v *= l2_inner(p.factors[j], q.factors[j]);
    return v;
  }
  return box_integral(F1, F2, [&](std::span<const double> u) { return F1.eval_f(u) * std::conj(F2.eval_f(u)); });
}

double a2_norm(const CylinderFunctional& F) { return std::sqrt(std::max(0.0, a2_inner(F, F).real())); }

double a2_distance(const CylinderFunctional& F1, const CylinderFunctional& F2) {
  require_same_family(F1, F2, "a2_distance");
  if (!(F1.closed_form() && F2.closed_form())) {
    const cplx v = box_integral(F1, F2, [&](std::span<const double> u) {
      const cplx d = F1.eval_f(u) - F2.eval_f(u);
      return cplx{std::norm(d), 0.0};
    });
    return std::sqrt(std::max(0.0, v.real()));
  }
  // prod f_j - prod g_j = sum_k (prod_{j<k} g_j) d_k (prod_{j>k} f_j), d_k = f_k - g_k.
  const auto& f = F1.pgp().factors;
  const auto& g = F2.pgp().factors;
  const std::size_t n = f.size();

  auto diff_inner = [](const GaussPolyFactor& x1, const GaussPolyFactor& x2, const GaussPolyFactor& other) {
    // int (x1 - x2) conj(other)
    auto [lo1, hi1] = support_interval(x1);
    auto [lo2, hi2] = support_interval(x2);
    auto [lo3, hi3] = support_interval(other);
    const double lo = std::min({lo1, lo2}), hi = std::max({hi1, hi2});
    const double a = std::max(lo, lo3), b = std::min(hi, hi3);
    if (!(a < b)) return cplx{0.0, 0.0};
    const double floor = 1e-15 * std::sqrt((l2_inner(x1, x1).real() + l2_inner(x2, x2).real()) *
                                           l2_inner(other, other).real());
    return integrate_adaptive([&](double u) { return (x1(u) - x2(u)) * std::conj(other(u)); }, a, b, 1e-12, nullptr,
                              floor);
  };
  auto diff_diff = [](const GaussPolyFactor& x1, const GaussPolyFactor& x2) {
    auto [lo1, hi1] = support_interval(x1);
    auto [lo2, hi2] = support_interval(x2);
    return integrate_adaptive(
        [&](double u) {
          const cplx d = x1(u) - x2(u);
          return cplx{std::norm(d), 0.0};
        },
        std::min(lo1, lo2), std::max(hi1, hi2), 1e-12, nullptr,
        1e-26 * (l2_inner(x1, x1).real() + l2_inner(x2, x2).real()));
  };

  // <t_k, t_l> = prod_j <t_k^j, t_l^j>, t_k^j = g_j (j<k), d_k (j=k), f_j (j>k).
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) {
      cplx term = 1.0;
      for (std::size_t j = 0; j < n && term != cplx{0.0, 0.0}; ++j) {
        if (j < k) {
          term *= l2_inner(g[j], g[j]);
        } else if (j == k && j == l) {
          term *= diff_diff(f[j], g[j]);
        } else if (j == k) {  // k < l: left d_k, right g_j
          term *= diff_inner(f[j], g[j], g[j]);
        } else if (j < l) {  // k < j < l
          term *= l2_inner(f[j], g[j]);
        } else if (j == l) {  // left f_j, right d_l
          term *= std::conj(diff_inner(f[j], g[j], f[j]));
        } else {
          term *= l2_inner(f[j], f[j]);
        }
      }
      total += (k == l) ? term.real() : 2.0 * term.real();
    }
  }
  return std::sqrt(std::max(0.0, total));
}

}  // namespace gaussfft
