#include "gaussfft/algebra.hpp"

#include <cmath>
#include <stdexcept>

#include "gaussfft/errors.hpp"

namespace gaussfft {

MonoidElem MonoidElem::of(const GridFunction& h) {
  std::vector<double> v(h.values().begin(), h.values().end());
  for (double& x : v) x = std::fabs(x);
  return {GridFunction(h.grid(), std::move(v))};
}

MonoidElem monoid_op(const MonoidElem& a, const MonoidElem& b) { return {s_combine(a.rep, b.rep)}; }

double monoid_distance(const MonoidElem& a, const MonoidElem& b) { return max_abs_diff(a.rep, b.rep); }

SeqClass SeqClass::identity(const TimeGrid& grid) { return {GridFunction::zero(grid), HSeq{}}; }

SeqClass SeqClass::of(const HSeq& witness, const TimeGrid& grid) {
  return {s_combine_seq(witness, grid), witness};
}

SeqClass SeqClass::with_witness(const HSeq& other) const {
  SeqClass c = of(other, class_rep.grid());
  if (!class_equal(c, *this)) throw std::invalid_argument("with_witness: sequence is not s-equivalent");
  return c;
}

double class_distance(const SeqClass& a, const SeqClass& b) { return max_abs_diff(a.class_rep, b.class_rep); }

bool class_equal(const SeqClass& a, const SeqClass& b, double tol) { return class_distance(a, b) <= tol; }

SeqClass seq_wedge(const SeqClass& a, const SeqClass& b) {
  require_same_grid(a.class_rep.grid(), b.class_rep.grid(), "seq_wedge");
  return SeqClass::of(wedge(a.witness, b.witness), a.class_rep.grid());
}

bool class_equal(const TransformClass& a, const TransformClass& b, double tol) {
  return a.q == b.q && class_equal(a.cls, b.cls, tol);
}

TransformClass barwedge(const TransformClass& a, const TransformClass& b) {
  if (a.q != b.q) throw std::invalid_argument("barwedge: transform classes have different q");
  return {a.q, seq_wedge(a.cls, b.cls)};
}

SeqClass xi(const TransformClass& t) { return t.cls; }

TransformClass xi_inv(const SeqClass& c, double q) {
  if (q == 0.0 || !std::isfinite(q)) throw std::invalid_argument("xi_inv: q must be nonzero and finite");
  return {q, c};
}

CylinderFunctional apply_class(const TransformClass& t, const CylinderFunctional& F) {
  return gfft(F, t.q, t.cls.class_rep);
}

std::size_t ClassRegistry::intern(const SeqClass& c) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].class_rep.grid() == c.class_rep.grid() && class_equal(classes_[i], c)) return i;
  }
  classes_.push_back(c);
  return classes_.size() - 1;
}

GroupWord word_reduce(const GroupWord& w) {
  GroupWord out;
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back().cls == l.cls && out.letters.back().sign == -l.sign) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

bool is_reduced(const GroupWord& w) {
  for (std::size_t i = 1; i < w.letters.size(); ++i) {
    if (w.letters[i].cls == w.letters[i - 1].cls && w.letters[i].sign == -w.letters[i - 1].sign) return false;
  }
  return true;
}

GroupWord word_inverse(const GroupWord& w) {
  GroupWord out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back({-it->sign, it->cls});
  return out;
}

CylinderFunctional word_eval(const GroupWord& w, const ClassRegistry& reg, const CylinderFunctional& F, double q) {
  if (q == 0.0 || !std::isfinite(q)) throw std::invalid_argument("word_eval: q must be nonzero and finite");
  CylinderFunctional out = F;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    if (it->sign != 1 && it->sign != -1) throw std::invalid_argument("word_eval: letter sign must be +1 or -1");
    const GridFunction& rep = reg.at(it->cls).class_rep;
    if (rep.is_zero()) continue;
    if (!in_O_inf(F.family, rep)) throw MembershipError("word_eval: letter class is not in O_inf of the family");
    out = gfft(out, it->sign * q, rep);
  }
  return out;
}

std::vector<LawCheck> q_group_laws(std::span<const QElem> sample) {
  std::vector<LawCheck> rows;
  auto push = [&](const char* law, std::size_t id, double residual) {
    rows.push_back({law, id, residual, residual == 0.0});
  };
  const std::size_t n = sample.size();
  const QElem e = QElem::identity();
  for (std::size_t i = 0; i < n; ++i) {
    const QElem a = sample[i];
    const QElem b = sample[(i + 1) % n];
    const QElem c = sample[(i + 2) % n];
    const QElem ab = q_compose(a, b);
    push("closure", i, std::isfinite(ab.r) ? 0.0 : INFINITY);
    push("associativity", i, std::fabs(q_compose(ab, c).r - q_compose(a, q_compose(b, c)).r));
    push("commutativity", i, std::fabs(ab.r - q_compose(b, a).r));
    push("identity", i, std::fabs(q_compose(a, e).r - a.r) + std::fabs(q_compose(e, a).r - a.r));
    const QElem inv = q_inverse(a);
    push("inverse", i, std::fabs(q_compose(a, inv).r) + std::fabs(q_compose(inv, a).r));
  }
  return rows;
}

}  // namespace gaussfft
