#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "gaussfft/algebra.hpp"
#include "gaussfft/errors.hpp"

using namespace gaussfft;

namespace {

struct Setup {
  TimeGrid grid{1.0, 256};
  OrthogonalFamily unit1{{cosine_basis(1, grid, true)}};
  GridFunction c(double v) const { return GridFunction::constant(grid, v); }
};

CylinderFunctional sample_functional(const OrthogonalFamily& A) {
  return CylinderFunctional(A, ProductGaussPoly{{GaussPolyFactor{{1.0, {0.2, 0.4}}, {1.1, 0.2}, {0.1, -0.3}}}});
}

bool all_pass(const std::vector<LawCheck>& rows, std::map<std::string, std::size_t>* counts = nullptr) {
  bool ok = true;
  for (const auto& row : rows) {
    if (!row.pass) {
      MESSAGE(row.law << " #" << row.sample_id << " residual " << row.residual);
      ok = false;
    }
    if (counts) ++(*counts)[row.law];
  }
  return ok;
}

}  // namespace

TEST_CASE("q-group laws") {
  const auto sample = random_q_sample(300, RngStream{21, 0});
  REQUIRE(sample.size() == 300);
  for (const auto& q : sample) {
    CHECK_FALSE(q.is_identity());
    CHECK(std::fabs(q.r) <= 4.0);
    CHECK(std::ldexp(q.r, 10) == std::round(std::ldexp(q.r, 10)));
  }
  std::map<std::string, std::size_t> counts;
  CHECK(all_pass(q_group_laws(sample), &counts));
  for (const char* law : {"closure", "associativity", "commutativity", "identity", "inverse"}) CHECK(counts[law] > 0);
  CHECK(random_q_sample(50, RngStream{21, 0})[7] == sample[7]);
}

TEST_CASE("q-group action on a functional") {
  Setup s;
  const auto sample = random_q_sample(20, RngStream{22, 0});
  std::map<std::string, std::size_t> counts;
  CHECK(all_pass(q_action_laws(sample, sample_functional(s.unit1), s.c(1.0)), &counts));
  CHECK(counts["action_composition"] > 0);
  CHECK(counts["trivial_group"] > 0);
}

TEST_CASE("monoid and sequence classes") {
  Setup s;
  const auto a = MonoidElem::of(s.c(-3.0));
  CHECK(a.rep[5] == 3.0);
  const auto b = MonoidElem::of(s.c(4.0));
  CHECK(monoid_op(a, b).rep[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(monoid_distance(monoid_op(a, MonoidElem::identity(s.grid)), a) == 0.0);
  CHECK(MonoidElem::identity(s.grid).is_identity());

  const SeqClass x = SeqClass::of(HSeq{{s.c(3.0), s.c(4.0)}}, s.grid);
  const SeqClass y = SeqClass::of(HSeq{{s.c(5.0)}}, s.grid);
  CHECK(class_equal(x, y));
  CHECK_FALSE(class_equal(x, SeqClass::of(HSeq{{s.c(4.9)}}, s.grid)));
  CHECK(class_equal(SeqClass::of(HSeq{}, s.grid), SeqClass::identity(s.grid)));
  CHECK(class_equal(seq_wedge(x, SeqClass::identity(s.grid)), x));
  CHECK(class_equal(x.with_witness(HSeq{{s.c(-5.0)}}), x));
  CHECK_THROWS(x.with_witness(HSeq{{s.c(1.0)}}));

  CounterEngine eng = RngStream{23, 0}.engine();
  const HSeq H{{s.c(0.3), GridFunction::sample(s.grid, [](double t) { return std::sin(3 * t); }), s.c(-1.0)}};
  for (int i = 0; i < 50; ++i) {
    const HSeq E = random_equivalent(H, eng);
    CHECK(s_equivalent(E, H));
  }
}

TEST_CASE("Xi and the barwedge product") {
  Setup s;
  const TransformClass t1{2.0, SeqClass::of(HSeq{{s.c(3.0)}}, s.grid)};
  const TransformClass t2{2.0, SeqClass::of(HSeq{{s.c(4.0)}}, s.grid)};
  CHECK(class_equal(barwedge(t1, t2), TransformClass{2.0, SeqClass::of(HSeq{{s.c(5.0)}}, s.grid)}));
  CHECK_FALSE(class_equal(t1, TransformClass{-2.0, t1.cls}));
  CHECK_THROWS_AS(barwedge(t1, TransformClass{1.0, t2.cls}), std::invalid_argument);
  CHECK(class_equal(xi_inv(xi(t1), 2.0), t1));
  CHECK_THROWS(xi_inv(xi(t1), 0.0));

  const auto F = sample_functional(s.unit1);
  const auto lhs = apply_class(barwedge(t1, t2), F);
  const auto rhs = apply_class(t2, apply_class(t1, F));
  CHECK(a2_distance(lhs, rhs) <= 1e-9 * a2_norm(F));
}

TEST_CASE("monoid law battery") {
  Setup s;
  const HSeq gens{{s.c(1.0), s.c(0.5), GridFunction::sample(s.grid, [](double t) { return 1.0 + t; }),
                   GridFunction::zero(s.grid)}};
  MonoidLawOptions opts;
  opts.substitutions = 40;
  std::map<std::string, std::size_t> counts;
  const auto F = sample_functional(s.unit1);
  CHECK(all_pass(monoid_laws(gens, RngStream{24, 0}, opts, &F), &counts));
  for (const char* law : {"monoid_identity", "monoid_commutativity", "monoid_associativity",
                          "monoid_matches_composition", "xi_identity", "xi_roundtrip", "xi_homomorphism",
                          "xi_injective", "barwedge_identity", "barwedge_commutativity", "barwedge_associativity",
                          "barwedge_matches_composition", "barwedge_witness_constants",
                          "barwedge_q_mismatch_rejected", "barwedge_well_defined"})
    CHECK_MESSAGE(counts[law] > 0, law);
  CHECK(counts["barwedge_well_defined"] == 40);
}

TEST_CASE("word reduction") {
  const Letter a{1, 0}, A{-1, 0}, b{1, 1}, B{-1, 1};
  CHECK(word_reduce(GroupWord{{a, A}}).length() == 0);
  CHECK(word_reduce(GroupWord{{a, b, B, A}}).length() == 0);
  CHECK(word_reduce(GroupWord{{a, b, B, b}}) == GroupWord{{a, b}});
  CHECK(word_reduce(GroupWord{{A, a, a}}) == GroupWord{{a}});
  CHECK(is_reduced(GroupWord{{a, b, A, B}}));
  CHECK_FALSE(is_reduced(GroupWord{{a, b, B}}));
  const GroupWord w{{a, b, b, A, B}};
  CHECK(word_inverse(w) == GroupWord{{b, a, B, B, A}});
  CHECK(word_inverse(word_inverse(w)) == w);
  GroupWord ww = w;
  for (const auto& l : word_inverse(w).letters) ww.letters.push_back(l);
  CHECK(word_reduce(ww).length() == 0);
  CounterEngine eng = RngStream{25, 0}.engine();
  CHECK(reduce_by_random_scan(GroupWord{{a, b, B, b, A, a, a}}, eng) == word_reduce(GroupWord{{a, b, B, b, A, a, a}}));
}

TEST_CASE("word evaluation") {
  Setup s;
  ClassRegistry reg;
  const auto c0 = reg.intern(SeqClass::of(HSeq{{s.c(1.0)}}, s.grid));
  const auto c1 = reg.intern(SeqClass::of(HSeq{{s.c(0.6), s.c(0.8)}}, s.grid));
  CHECK(c0 == c1);
  const auto c2 = reg.intern(SeqClass::of(HSeq{{s.c(2.0)}}, s.grid));
  const auto cz = reg.intern(SeqClass::identity(s.grid));
  CHECK(reg.size() == 3);
  const auto F = sample_functional(s.unit1);
  const GroupWord w{{{1, c0}, {1, c2}, {-1, c2}, {1, cz}, {-1, c0}}};
  CHECK(a2_distance(word_eval(w, reg, F, 1.5), F) <= 1e-9);
  const GroupWord single{{{1, c2}}};
  CHECK(coefficient_distance(word_eval(single, reg, F, 1.5).pgp(), gfft(F, 1.5, s.c(2.0)).pgp()) == 0.0);
  const GroupWord inv{{{-1, c2}}};
  CHECK(coefficient_distance(word_eval(inv, reg, F, 1.5).pgp(), gfft(F, -1.5, s.c(2.0)).pgp()) == 0.0);

  const OrthogonalFamily A({cosine_basis(1, s.grid), cosine_basis(2, s.grid)});
  ClassRegistry bad;
  const auto cb = bad.intern(SeqClass::of(HSeq{{cosine_basis(1, s.grid)}}, s.grid));
  const CylinderFunctional G(A, ProductGaussPoly{{GaussPolyFactor::standard(), GaussPolyFactor::standard()}});
  CHECK_THROWS_AS(word_eval(GroupWord{{{1, cb}}}, bad, G, 1.0), MembershipError);
}

TEST_CASE("free group law battery") {
  Setup s;
  const HSeq gens{{s.c(1.0), s.c(-1.0), s.c(0.5), s.c(2.0)}};
  FreeGroupOptions opts;
  opts.words = 500;
  opts.eval_words = 5;
  std::map<std::string, std::size_t> counts;
  CHECK(all_pass(free_group_laws(gens, sample_functional(s.unit1), RngStream{26, 0}, opts), &counts));
  CHECK(counts["reduce_idempotent"] == 500);
  CHECK(counts["reduce_confluent"] == 500);
  CHECK(counts["word_eval_cancellation"] == 1);
  CHECK(counts["word_eval_factors_through_reduction"] == 5);
  CHECK_THROWS(free_group_laws(HSeq{}, sample_functional(s.unit1), RngStream{26, 0}, opts));
}
