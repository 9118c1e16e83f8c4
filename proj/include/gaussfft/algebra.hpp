#pragma once

// Transform algebra: the commutative monoid of s-combined weights, its
// quotient by s-equivalence, the isomorphism Xi onto sequence classes,
// free-group words over transform classes, and the q-parameter group.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gaussfft/cylinder.hpp"
#include "gaussfft/grid.hpp"
#include "gaussfft/rng.hpp"
#include "gaussfft/transform.hpp"

namespace gaussfft {

inline constexpr double kClassTol = 1e-9;

// Canonical nonnegative representative; the zero function is the identity.
struct MonoidElem {
  GridFunction rep;

  static MonoidElem identity(const TimeGrid& grid) { return {GridFunction::zero(grid)}; }
  static MonoidElem of(const GridFunction& h);
  bool is_identity() const { return rep.is_zero(); }
};

MonoidElem monoid_op(const MonoidElem& a, const MonoidElem& b);
double monoid_distance(const MonoidElem& a, const MonoidElem& b);

struct SeqClass {
  GridFunction class_rep;
  HSeq witness;

  static SeqClass identity(const TimeGrid& grid);
  static SeqClass of(const HSeq& witness, const TimeGrid& grid);
  // Same class, different member.
  SeqClass with_witness(const HSeq& other) const;
};

bool class_equal(const SeqClass& a, const SeqClass& b, double tol = kClassTol);
double class_distance(const SeqClass& a, const SeqClass& b);
// [H1]_s ^ [H2]_s := [H1 ^ H2]_s
SeqClass seq_wedge(const SeqClass& a, const SeqClass& b);

struct TransformClass {
  double q = 1.0;
  SeqClass cls;
};

bool class_equal(const TransformClass& a, const TransformClass& b, double tol = kClassTol);
// Throws std::invalid_argument on q mismatch.
TransformClass barwedge(const TransformClass& a, const TransformClass& b);
SeqClass xi(const TransformClass& t);
TransformClass xi_inv(const SeqClass& c, double q);
CylinderFunctional apply_class(const TransformClass& t, const CylinderFunctional& F);

// Interns classes so words can compare letters by id.
class ClassRegistry {
 public:
  std::size_t intern(const SeqClass& c);
  const SeqClass& at(std::size_t id) const { return classes_.at(id); }
  std::size_t size() const { return classes_.size(); }

 private:
  std::vector<SeqClass> classes_;
};

struct Letter {
  int sign = 1;  // +1 applies the transform with q, -1 with -q
  std::size_t cls = 0;
  friend bool operator==(const Letter&, const Letter&) = default;
};

struct GroupWord {
  std::vector<Letter> letters;
  std::size_t length() const { return letters.size(); }
  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

GroupWord word_reduce(const GroupWord& w);
bool is_reduced(const GroupWord& w);
GroupWord word_inverse(const GroupWord& w);

// Right-to-left composition; throws MembershipError if a nonzero class rep
// is not in O_inf of F's family.
CylinderFunctional word_eval(const GroupWord& w, const ClassRegistry& reg, const CylinderFunctional& F, double q);

struct LawCheck {
  std::string law;
  std::size_t sample_id = 0;
  double residual = 0.0;
  bool pass = false;
};

// Closure, associativity, commutativity, identity and inverse of q_compose,
// with residuals measured in r-coordinates.
std::vector<LawCheck> q_group_laws(std::span<const QElem> sample);

// Action of the q-group on F through h: composition matches the action of
// the composed element, and h == 0 gives the trivial group.
std::vector<LawCheck> q_action_laws(std::span<const QElem> sample, const CylinderFunctional& F,
                                    const GridFunction& h, double tol = 1e-8);

// Dyadic reciprocal parameters r = k / 2^10, 0 < |k| <= 2^12, so sums in
// r-coordinates are exact.
std::vector<QElem> random_q_sample(std::size_t n, const RngStream& rng);

struct MonoidLawOptions {
  double q = 1.0;
  std::size_t substitutions = 200;
  double tol = 1e-10;          // nodewise monoid laws
  double analytic_tol = 1e-8;  // relative A2 distance
};

// Exhaustive tables over the generators and every sub-monoid element they
// generate (all subsets), plus randomized witness substitutions. With F the
// algebra is also checked against composition of transforms on F.
std::vector<LawCheck> monoid_laws(const HSeq& generators, const RngStream& rng, const MonoidLawOptions& opts,
                                  const CylinderFunctional* F = nullptr);

// Random s-equivalent rewrite of H (splits, merges, sign flips, shuffles).
HSeq random_equivalent(const HSeq& H, CounterEngine& engine);

struct FreeGroupOptions {
  double q = 1.0;
  std::size_t words = 10000;
  std::size_t max_length = 30;
  std::size_t eval_words = 20;
  std::size_t eval_max_length = 6;
  double tol = 1e-7;
  double cancel_tol = 1e-9;
};

// Reduction laws on random words over the generator classes, and evaluation
// on F with letters whose class rep is in O_inf^n of F's family.
std::vector<LawCheck> free_group_laws(const HSeq& generators, const CylinderFunctional& F, const RngStream& rng,
                                      const FreeGroupOptions& opts);

// Oracle for word_reduce: deletes one randomly chosen adjacent inverse pair
// at a time until none is left.
GroupWord reduce_by_random_scan(const GroupWord& w, CounterEngine& engine);

}  // namespace gaussfft
