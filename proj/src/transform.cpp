#include "gaussfft/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gaussfft/errors.hpp"
#include "gaussfft/simd.hpp"

namespace gaussfft {

QElem QElem::from_q(double q) {
  if (q == 0.0 || !std::isfinite(q)) throw std::domain_error("QElem: q must be finite and nonzero");
  return QElem{1.0 / q};
}

double QElem::q() const {
  if (is_identity()) throw std::domain_error("QElem: the identity has no finite q");
  return 1.0 / r;
}

QElem q_compose(QElem a, QElem b) { return QElem{a.r + b.r}; }

QElem q_inverse(QElem a) { return QElem{a.r == 0.0 ? 0.0 : -a.r}; }

TransformTag TransformTag::make(QElem q, GridFunction h) {
  if (q.is_identity() || h.is_zero() || l2_norm(h) == 0.0) {
    return TransformTag{Kind::identity, 0.0, std::move(h)};
  }
  return TransformTag{Kind::forward, q.q(), std::move(h)};
}

namespace {

bool is_identity_weight(const GridFunction& h) { return h.is_zero(); }

void require_member(const CylinderFunctional& F, const GridFunction& h, const char* op) {
  if (!in_O_inf(F.family, h, F.family.tol())) {
    throw MembershipError(std::string(op) + ": h is not in O_inf of the functional's family");
  }
}

}  // namespace

CylinderFunctional smooth_closed_form(const CylinderFunctional& F, cplx lambda, const GridFunction& h) {
  if (is_identity_weight(h)) return F;
  require_member(F, h, "transform");
  const ProductGaussPoly& p = F.pgp();
  const std::vector<double> var = scaled_variances(F.family, h);
  ProductGaussPoly out;
  out.factors.reserve(p.arity());
  for (std::size_t j = 0; j < p.arity(); ++j) out.factors.push_back(gaussian_convolve(p.factors[j], lambda / var[j]));
  return CylinderFunctional(F.family, std::move(out));
}

CylinderFunctional t_lambda(const CylinderFunctional& F, double lambda, const GridFunction& h) {
  if (!(lambda > 0.0)) throw std::domain_error("t_lambda: lambda must be positive");
  return smooth_closed_form(F, cplx{lambda, 0.0}, h);
}

CylinderFunctional gfft(const CylinderFunctional& F, double q, const GridFunction& h) {
  if (q == 0.0 || !std::isfinite(q)) throw std::domain_error("gfft: q must be finite and nonzero");
  return smooth_closed_form(F, cplx{0.0, -q}, h);
}

CylinderFunctional apply(const TransformTag& tag, const CylinderFunctional& F) {
  if (tag.kind == TransformTag::Kind::identity) return F;
  return gfft(F, tag.q, tag.h);
}

CylinderFunctional q_act(QElem q, const CylinderFunctional& F, const GridFunction& h) {
  if (q.is_identity()) return F;
  return gfft(F, q.q(), h);
}

std::vector<ComplexEstimate> t_lambda_mc_batch(std::span<const CylinderFunctional> Fs, double lambda,
                                               const GridFunction& h, const WienerPath& y, std::size_t n,
                                               const RngStream& rng, const McOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("t_lambda_mc: lambda must be positive");
  if (Fs.empty()) return {};
  const TimeGrid& grid = h.grid();
  require_same_grid(grid, y.grid(), "t_lambda_mc");

  // Row j of functional i: alpha_j * h at the left endpoints.
  std::vector<GridFunction> weights;
  std::vector<std::vector<double>> base;
  for (const auto& F : Fs) {
    require_same_grid(grid, F.family.grid(), "t_lambda_mc");
    for (const auto& a : F.family.atoms()) weights.push_back(a * h);
    base.push_back(pwz_coordinates(F.family, y));
  }
  std::vector<const double*> rows;
  for (const auto& w : weights) rows.push_back(w.values().data());
  const double scale = 1.0 / std::sqrt(lambda);
  const simd::Kernels& k = simd::active();

  auto per_sample = [&](std::span<const std::span<const double>> dx, std::span<double> out) {
    std::vector<double> dots(rows.size());
    k.dot_many(rows.data(), rows.size(), dx[0].data(), grid.intervals(), dots.data());
    std::size_t row = 0;
    std::vector<double> r;
    for (std::size_t i = 0; i < Fs.size(); ++i) {
      r.assign(base[i].begin(), base[i].end());
      for (double& v : r) v += scale * dots[row++];
      const cplx v = Fs[i].eval_f(r);
      out[2 * i] = v.real();
      out[2 * i + 1] = v.imag();
    }
  };
  const auto est = run_monte_carlo(grid, n, 1, 2 * Fs.size(), rng, per_sample, opts);
  std::vector<ComplexEstimate> result;
  for (std::size_t i = 0; i < Fs.size(); ++i) result.push_back(ComplexEstimate{est[2 * i], est[2 * i + 1]});
  return result;
}

ComplexEstimate t_lambda_mc(const CylinderFunctional& F, double lambda, const GridFunction& h, const WienerPath& y,
                            std::size_t n, const RngStream& rng, const McOptions& opts) {
  return t_lambda_mc_batch(std::span<const CylinderFunctional>(&F, 1), lambda, h, y, n, rng, opts).front();
}

double SampledTransform::l2_norm() const {
  if (axis.size() < 2) return 0.0;
  const double dr = axis[1] - axis[0];
  double s = 0.0;
  for (const cplx& v : values) s += std::norm(v);
  return std::sqrt(s * std::pow(dr, static_cast<double>(arity)));
}

cplx SampledTransform::at(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t j = 0; j < arity; ++j) flat = flat * axis.size() + index[j];
  return values.at(flat);
}

namespace {

// Contract axis `which` of a tensor with extents `dims` against matrix K
// (rows x dims[which]).
std::vector<cplx> contract_axis(const std::vector<cplx>& in, std::vector<std::size_t>& dims, std::size_t which,
                                const std::vector<cplx>& K, std::size_t rows) {
  std::size_t outer = 1, inner = 1;
  for (std::size_t j = 0; j < which; ++j) outer *= dims[j];
  for (std::size_t j = which + 1; j < dims.size(); ++j) inner *= dims[j];
  const std::size_t cols = dims[which];
  std::vector<cplx> out(outer * rows * inner, cplx{0.0, 0.0});
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t p = 0; p < rows; ++p) {
      const cplx* krow = &K[p * cols];
      for (std::size_t c = 0; c < cols; ++c) {
        const cplx kv = krow[c];
        const cplx* src = &in[(o * cols + c) * inner];
        cplx* dst = &out[(o * rows + p) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += kv * src[i];
      }
    }
  }
  dims[which] = rows;
  return out;
}

double weighted_l2(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<double>& axis,
                   std::size_t arity, const std::vector<double>& variances) {
  const double dr = axis[1] - axis[0];
  const std::size_t m = axis.size();
  std::vector<std::size_t> idx(arity, 0);
  double s = 0.0;
  for (std::size_t flat = 0; flat < a.size(); ++flat) {
    double w = 1.0;
    for (std::size_t j = 0; j < arity; ++j) {
      if (!variances.empty()) {
        const double r = axis[idx[j]];
        w *= std::exp(-0.5 * r * r / variances[j]) / std::sqrt(2.0 * std::numbers::pi * variances[j]);
      }
    }
    s += w * std::norm(a[flat] - b[flat]);
    std::size_t j = arity;
    while (j-- > 0) {
      if (++idx[j] < m) break;
      idx[j] = 0;
    }
  }
  return std::sqrt(s * std::pow(dr, static_cast<double>(arity)));
}

}  // namespace

SampledTransform gfft_general(const CylinderFunctional& F, double q, const GridFunction& h,
                              const GeneralOptions& opts) {
  if (q == 0.0 || !std::isfinite(q)) throw std::domain_error("gfft_general: q must be finite and nonzero");
  if (opts.eps.empty()) throw std::invalid_argument("gfft_general: empty eps sequence");
  for (std::size_t k = 0; k < opts.eps.size(); ++k) {
    if (!(opts.eps[k] > 0.0) || (k > 0 && !(opts.eps[k] < opts.eps[k - 1]))) {
      throw std::invalid_argument("gfft_general: eps sequence must be positive and strictly decreasing");
    }
  }
  if (opts.r_points < 2 || !(opts.r_half_width > 0.0)) throw std::invalid_argument("gfft_general: bad sample box");
  if (is_identity_weight(h)) throw std::invalid_argument("gfft_general: h must be nonzero");
  require_member(F, h, "gfft_general");

  double half_width = 8.0;
  std::size_t panels = 64;
  if (const auto* bb = std::get_if<BlackBoxF>(&F.f)) {
    half_width = bb->half_width;
    panels = bb->panels;
  } else {
    for (const auto& fac : F.pgp().factors) {
      const auto [lo, hi] = support_interval(fac);
      half_width = std::max({half_width, std::fabs(lo), std::fabs(hi)});
    }
    panels = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(half_width * 4.0)));
  }
  const LineRule rule = box_rule(half_width, panels);
  const std::size_t n = F.arity();
  const std::size_t nq = rule.nodes.size();

  // f on the tensor quadrature grid, weights folded in.
  std::vector<cplx> f_vals;
  {
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= nq;
    f_vals.resize(total);
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> u(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        u[j] = rule.nodes[idx[j]];
        w *= rule.weights[idx[j]];
      }
      f_vals[flat] = w * F.eval_f(u);
      std::size_t j = n;
      while (j-- > 0) {
        if (++idx[j] < nq) break;
        idx[j] = 0;
      }
    }
  }

  SampledTransform out;
  out.arity = n;
  out.eps = opts.eps;
  out.axis.resize(opts.r_points);
  for (std::size_t i = 0; i < opts.r_points; ++i) {
    out.axis[i] = -opts.r_half_width + 2.0 * opts.r_half_width * static_cast<double>(i) /
                                           static_cast<double>(opts.r_points - 1);
  }
  out.rho_steps.assign(opts.rho.size(), {});

  const std::vector<double> var = scaled_variances(F.family, h);
  std::vector<double> atom_var;
  for (const auto& a : F.family.atoms()) atom_var.push_back(inner_product(a, a));

  std::vector<cplx> previous;
  for (double eps : opts.eps) {
    const cplx lambda{eps, -q};
    std::vector<cplx> cur = f_vals;
    std::vector<std::size_t> dims(n, nq);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx c = lambda / var[j];
      const cplx pre = std::sqrt(c / (2.0 * std::numbers::pi));
      std::vector<cplx> K(opts.r_points * nq);
      for (std::size_t p = 0; p < opts.r_points; ++p) {
        for (std::size_t u = 0; u < nq; ++u) {
          const double d = rule.nodes[u] - out.axis[p];
          K[p * nq + u] = pre * std::exp(-0.5 * c * d * d);
        }
      }
      cur = contract_axis(cur, dims, j, K, opts.r_points);
    }
    if (!previous.empty()) {
      out.l2_steps.push_back(weighted_l2(cur, previous, out.axis, n, {}));
      for (std::size_t k = 0; k < opts.rho.size(); ++k) {
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = opts.rho[k] * opts.rho[k] * atom_var[j];
        out.rho_steps[k].push_back(weighted_l2(cur, previous, out.axis, n, v));
      }
    }
    previous = std::move(cur);
  }
  out.values = std::move(previous);

  if (out.l2_steps.empty()) {
    out.converged = false;
  } else {
    out.converged = out.l2_steps.back() <= opts.tol;
    for (const auto& steps : out.rho_steps) out.converged = out.converged && steps.back() <= opts.tol;
  }
  if (!out.converged && opts.throw_on_failure) {
    std::ostringstream msg;
    msg << "gfft_general: no convergence within the eps sequence (last L2 step "
        << (out.l2_steps.empty() ? -1.0 : out.l2_steps.back()) << ", tol " << opts.tol << ")";
    throw ConvergenceError(msg.str());
  }
  return out;
}

double compose_check(const CylinderFunctional& F, double q, const GridFunction& h1, const GridFunction& h2) {
  const CylinderFunctional twice = gfft(gfft(F, q, h1), q, h2);
  const CylinderFunctional once = gfft(F, q, s_combine(h1, h2));
  return a2_distance(twice, once);
}

double compose_check_seq(const CylinderFunctional& F, double q, const HSeq& H) {
  CylinderFunctional iterated = F;
  for (const auto& h : H.items) iterated = gfft(iterated, q, h);
  const CylinderFunctional once = gfft(F, q, s_combine_seq(H, F.family.grid()));
  return a2_distance(iterated, once);
}

double compose_check_wedge(const CylinderFunctional& F, double q, const HSeq& H1, const HSeq& H2) {
  const TimeGrid& grid = F.family.grid();
  const CylinderFunctional twice = gfft(gfft(F, q, s_combine_seq(H1, grid)), q, s_combine_seq(H2, grid));
  const CylinderFunctional once = gfft(F, q, s_combine_seq(wedge(H1, H2), grid));
  return a2_distance(twice, once);
}

std::pair<double, double> plancherel_check(const CylinderFunctional& F, double q, const GridFunction& h) {
  if (!in_O_inf_n(F.family, h, F.family.tol())) {
    throw MembershipError("plancherel_check: family scaled by h is not orthonormal");
  }
  return {a2_norm(F), a2_norm(gfft(F, q, h))};
}

}  // namespace gaussfft
