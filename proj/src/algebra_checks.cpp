#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "gaussfft/algebra.hpp"

namespace gaussfft {
namespace {

std::size_t pick(CounterEngine& eng, std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(eng);
}

double relative(double d, double scale) { return d / std::max(scale, 1e-300); }

struct Rows {
  std::vector<LawCheck> rows;
  void add(const char* law, std::size_t id, double residual, double tol) {
    rows.push_back({law, id, residual, residual <= tol});
  }
};

SeqClass subset_class(const HSeq& gens, unsigned mask, const TimeGrid& grid) {
  HSeq w;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (mask & (1u << i)) w.items.push_back(gens.items[i]);
  }
  return SeqClass::of(w, grid);
}

Letter random_letter(CounterEngine& eng, std::size_t classes) {
  return {pick(eng, 2) == 0 ? 1 : -1, pick(eng, classes)};
}

// Random word with many adjacent inverse pairs, nested ones included.
GroupWord random_word(CounterEngine& eng, std::size_t classes, std::size_t max_length) {
  const std::size_t target = pick(eng, max_length + 1);
  GroupWord w;
  while (w.letters.size() < target) {
    const std::size_t action = pick(eng, 4);
    if (action <= 1 || w.letters.empty()) {
      w.letters.push_back(random_letter(eng, classes));
    } else if (action == 2) {
      const Letter& last = w.letters.back();
      w.letters.push_back({-last.sign, last.cls});
    } else {
      GroupWord u;
      const std::size_t len = 1 + pick(eng, 3);
      for (std::size_t k = 0; k < len; ++k) u.letters.push_back(random_letter(eng, classes));
      const GroupWord ui = word_inverse(u);
      w.letters.insert(w.letters.end(), u.letters.begin(), u.letters.end());
      w.letters.insert(w.letters.end(), ui.letters.begin(), ui.letters.end());
    }
  }
  w.letters.resize(std::min(w.letters.size(), target));
  return w;
}

}  // namespace

std::vector<QElem> random_q_sample(std::size_t n, const RngStream& rng) {
  CounterEngine eng = rng.engine(0);
  boost::random::uniform_int_distribution<long> k(1, 1L << 12);
  std::vector<QElem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long v = k(eng) * (pick(eng, 2) == 0 ? 1 : -1);
    out.push_back(QElem{std::ldexp(static_cast<double>(v), -10)});
  }
  return out;
}

std::vector<LawCheck> q_action_laws(std::span<const QElem> sample, const CylinderFunctional& F,
                                    const GridFunction& h, double tol) {
  Rows r;
  const double norm = a2_norm(F);
  const GridFunction zero = GridFunction::zero(h.grid());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const QElem a = sample[i];
    const QElem b = sample[(i + 1) % sample.size()];
    const CylinderFunctional lhs = q_act(b, q_act(a, F, h), h);
    const CylinderFunctional rhs = q_act(q_compose(a, b), F, h);
    r.add("action_composition", i, relative(a2_distance(lhs, rhs), norm), tol);
    r.add("trivial_group", i, coefficient_distance(q_act(a, F, zero).pgp(), F.pgp()), 0.0);
  }
  return r.rows;
}

HSeq random_equivalent(const HSeq& H, CounterEngine& eng) {
  HSeq out = H;
  boost::random::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
  const std::size_t ops = 1 + pick(eng, 3);
  for (std::size_t k = 0; k < ops && !out.empty(); ++k) {
    auto& v = out.items;
    switch (pick(eng, 4)) {
      case 0: {
        const std::size_t i = pick(eng, v.size());
        const double th = angle(eng);
        const GridFunction h = v[i];
        v[i] = std::cos(th) * h;
        v.insert(v.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::sin(th) * h);
        break;
      }
      case 1:
        if (v.size() >= 2) {
          const std::size_t i = pick(eng, v.size() - 1);
          v[i] = s_combine(v[i], v[i + 1]);
          v.erase(v.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
        break;
      case 2: {
        const std::size_t i = pick(eng, v.size());
        v[i] = -v[i];
        break;
      }
      default:
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(eng, i)]);
    }
  }
  return out;
}

std::vector<LawCheck> monoid_laws(const HSeq& gens, const RngStream& rng, const MonoidLawOptions& opts,
                                  const CylinderFunctional* F) {
  if (gens.empty()) throw std::invalid_argument("monoid_laws: no generators");
  if (gens.size() > 16) throw std::invalid_argument("monoid_laws: at most 16 generators");
  const TimeGrid grid = gens.items.front().grid();
  const std::size_t g = gens.size();
  Rows r;

  std::vector<MonoidElem> m;
  for (const auto& h : gens.items) m.push_back(MonoidElem::of(h));
  const MonoidElem e = MonoidElem::identity(grid);
  std::size_t id = 0;
  for (std::size_t i = 0; i < g; ++i) {
    r.add("monoid_identity", i,
          std::max(monoid_distance(monoid_op(e, m[i]), m[i]), monoid_distance(monoid_op(m[i], e), m[i])), opts.tol);
    for (std::size_t j = 0; j < g; ++j) {
      r.add("monoid_commutativity", i * g + j, monoid_distance(monoid_op(m[i], m[j]), monoid_op(m[j], m[i])),
            opts.tol);
      for (std::size_t k = 0; k < g; ++k, ++id) {
        r.add("monoid_associativity", id,
              monoid_distance(monoid_op(monoid_op(m[i], m[j]), m[k]), monoid_op(m[i], monoid_op(m[j], m[k]))),
              opts.tol);
      }
    }
  }
  if (F != nullptr) {
    const double norm = a2_norm(*F);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        if (!in_O_inf(F->family, m[i].rep) || !in_O_inf(F->family, m[j].rep)) continue;
        const auto lhs = gfft(*F, opts.q, monoid_op(m[i], m[j]).rep);
        const auto rhs = gfft(gfft(*F, opts.q, m[i].rep), opts.q, m[j].rep);
        r.add("monoid_matches_composition", i * g + j, relative(a2_distance(lhs, rhs), norm), opts.analytic_tol);
      }
    }
  }

  // Every element of the generated sub-monoid, one per subset.
  const unsigned subsets = 1u << g;
  std::vector<TransformClass> t;
  for (unsigned mask = 0; mask < subsets; ++mask) t.push_back(xi_inv(subset_class(gens, mask, grid), opts.q));
  const TransformClass te = xi_inv(SeqClass::identity(grid), opts.q);
  r.add("xi_identity", 0, class_distance(xi(te), SeqClass::identity(grid)), kClassTol);
  for (unsigned a = 0; a < subsets; ++a) {
    r.add("xi_roundtrip", a, class_distance(xi_inv(xi(t[a]), t[a].q).cls, t[a].cls), kClassTol);
    r.add("barwedge_identity", a, class_distance(barwedge(t[a], te).cls, t[a].cls), opts.tol);
    for (unsigned b = 0; b < subsets; ++b) {
      const std::size_t ab = static_cast<std::size_t>(a) * subsets + b;
      const TransformClass w = barwedge(t[a], t[b]);
      r.add("xi_homomorphism", ab, class_distance(xi(w), seq_wedge(xi(t[a]), xi(t[b]))), kClassTol);
      r.add("barwedge_commutativity", ab, class_distance(w.cls, barwedge(t[b], t[a]).cls), opts.tol);
      // xi is injective: equal images only for equal classes.
      const bool same_t = class_equal(t[a], t[b]);
      const bool same_xi = class_equal(xi(t[a]), xi(t[b]));
      r.add("xi_injective", ab, same_t == same_xi ? 0.0 : 1.0, 0.0);
    }
  }
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      for (std::size_t k = 0; k < g; ++k) {
        const TransformClass& a = t[1u << i];
        const TransformClass& b = t[1u << j];
        const TransformClass& c = t[1u << k];
        r.add("barwedge_associativity", (i * g + j) * g + k,
              class_distance(barwedge(barwedge(a, b), c).cls, barwedge(a, barwedge(b, c)).cls), opts.tol);
      }
    }
  }
  if (F != nullptr) {
    const double norm = a2_norm(*F);
    for (unsigned a = 1; a < subsets; ++a) {
      const unsigned b = subsets - 1 - a;
      if (b == 0) continue;
      if (!in_O_inf(F->family, t[a].cls.class_rep) || !in_O_inf(F->family, t[b].cls.class_rep)) continue;
      const auto lhs = apply_class(barwedge(t[a], t[b]), *F);
      const auto rhs = apply_class(t[a], apply_class(t[b], *F));
      r.add("barwedge_matches_composition", a, relative(a2_distance(lhs, rhs), norm), opts.analytic_tol);
    }
  }

  // Witnesses (3, 4) and (5) are s-equivalent constants.
  {
    const SeqClass c34 = SeqClass::of(HSeq{{GridFunction::constant(grid, 3.0), GridFunction::constant(grid, 4.0)}}, grid);
    const SeqClass c5 = SeqClass::of(HSeq{{GridFunction::constant(grid, 5.0)}}, grid);
    const TransformClass x = t[1];
    r.add("barwedge_witness_constants", 0,
          class_distance(barwedge(xi_inv(c34, opts.q), x).cls, barwedge(xi_inv(c5, opts.q), x).cls), kClassTol);
  }
  {
    double thrown = 1.0;
    try {
      barwedge(t[1], xi_inv(t[1].cls, -opts.q));
    } catch (const std::invalid_argument&) {
      thrown = 0.0;
    }
    r.add("barwedge_q_mismatch_rejected", 0, thrown, 0.0);
  }

  CounterEngine eng = rng.engine(0);
  for (std::size_t s = 0; s < opts.substitutions; ++s) {
    const TransformClass& a = t[pick(eng, subsets)];
    const TransformClass& b = t[pick(eng, subsets)];
    const TransformClass a2{a.q, SeqClass::of(random_equivalent(a.cls.witness, eng), grid)};
    const TransformClass b2{b.q, SeqClass::of(random_equivalent(b.cls.witness, eng), grid)};
    r.add("barwedge_well_defined", s, class_distance(barwedge(a, b).cls, barwedge(a2, b2).cls), kClassTol);
  }
  return r.rows;
}

GroupWord reduce_by_random_scan(const GroupWord& w, CounterEngine& eng) {
  GroupWord cur = w;
  for (;;) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i + 1 < cur.letters.size(); ++i) {
      const Letter& x = cur.letters[i];
      const Letter& y = cur.letters[i + 1];
      if (x.cls == y.cls && x.sign == -y.sign) spots.push_back(i);
    }
    if (spots.empty()) return cur;
    const auto at = cur.letters.begin() + static_cast<std::ptrdiff_t>(spots[pick(eng, spots.size())]);
    cur.letters.erase(at, at + 2);
  }
}

std::vector<LawCheck> free_group_laws(const HSeq& gens, const CylinderFunctional& F, const RngStream& rng,
                                      const FreeGroupOptions& opts) {
  if (gens.empty()) throw std::invalid_argument("free_group_laws: no generators");
  const TimeGrid& grid = gens.items.front().grid();
  ClassRegistry reg;
  for (const auto& h : gens.items) reg.intern(SeqClass::of(HSeq{{h}}, grid));
  Rows r;

  CounterEngine eng = rng.child(0).engine(0);
  for (std::size_t i = 0; i < opts.words; ++i) {
    const GroupWord w = random_word(eng, reg.size(), opts.max_length);
    const GroupWord red = word_reduce(w);
    double bad = 0.0;
    if (!(word_reduce(red) == red)) bad += 1.0;
    if (!is_reduced(red)) bad += 1.0;
    if (red.length() > w.length()) bad += 1.0;
    r.add("reduce_idempotent", i, bad, 0.0);
    r.add("reduce_confluent", i, reduce_by_random_scan(w, eng) == red ? 0.0 : 1.0, 0.0);
  }

  std::vector<std::size_t> unit;
  for (std::size_t c = 0; c < reg.size(); ++c) {
    if (in_O_inf_n(F.family, reg.at(c).class_rep)) unit.push_back(c);
  }
  if (unit.empty()) return r.rows;
  const double norm = a2_norm(F);
  for (std::size_t k = 0; k < unit.size(); ++k) {
    GroupWord pair{{{1, unit[k]}, {-1, unit[k]}}};
    r.add("word_eval_cancellation", k, a2_distance(word_eval(pair, reg, F, opts.q), F), opts.cancel_tol);
    for (int sign : {1, -1}) {
      GroupWord one{{{sign, unit[k]}}};
      const double n1 = a2_norm(word_eval(one, reg, F, opts.q));
      r.add("letter_norm_preserved", 2 * k + (sign > 0 ? 0 : 1), std::fabs(n1 / norm - 1.0), opts.tol);
    }
  }
  CounterEngine weng = rng.child(1).engine(0);
  for (std::size_t i = 0; i < opts.eval_words; ++i) {
    GroupWord w = random_word(weng, unit.size(), opts.eval_max_length);
    for (Letter& l : w.letters) l.cls = unit[l.cls];
    const auto full = word_eval(w, reg, F, opts.q);
    const auto reduced = word_eval(word_reduce(w), reg, F, opts.q);
    r.add("word_eval_factors_through_reduction", i, a2_distance(full, reduced), opts.tol);
    r.add("word_norm_preserved", i, std::fabs(a2_norm(full) / norm - 1.0), opts.tol);
  }
  return r.rows;
}

}  // namespace gaussfft
