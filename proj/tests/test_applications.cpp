#include <doctest.h>

#include "oracle.hpp"
#include "padic/applications.hpp"
#include "padic/sampling.hpp"
#include "padic/tree.hpp"

using namespace padic;

namespace {

PadicNumber n(long v, Prime p = 5) { return PadicNumber::from_integer(v, p); }
AlgebraElement sc(long v, Prime p = 5) { return AlgebraElement::scalar(n(v, p)); }

AlgebraElement ones_seq(std::size_t t, Prime p = 5) {
  return AlgebraElement::filled(Shape{AlgebraKind::kSeq, t}, n(1, p));
}

}  // namespace

TEST_CASE("mobius") {
  auto one = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 1}, 5));
  DomainSampler s(5, 40, 1);
  for (int i = 0; i < 20; ++i) {
    CHECK(separation(one({AlgebraElement::scalar(s.in_ep()), AlgebraElement::scalar(s.in_ep())}), sc(1)) >= Valuation(40));
  }
  auto f = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 6}, 5));
  auto v = f({sc(1), sc(1)}).as_scalar();
  CHECK(v.residue(6) == oracle::reduce(oracle::Ring(5, 6), mpq_class(4, 9)));
  CHECK(v.residue(1) == 1);
  CHECK_THROWS_AS(make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 5, 1}, 5)), DomainError);
  CHECK_THROWS_AS(make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 2, 1}, 5)), DomainError);
  CHECK_THROWS_AS(make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 1}, 2)), DomainError);
  auto r = verify_contraction(f, 1000, 7);
  CHECK(r.pass);
  CHECK(r.closure_failures == 0);
}

TEST_CASE("rational polynomial maps") {
  RationalPolyParams empty{2, {}, {}, n(3), n(7)};
  auto c = make_rational_poly(empty);
  CHECK(c({sc(2), sc(4)}) == AlgebraElement::scalar(n(3) / n(7)));

  RationalPolyParams lin{1, {{{1}, n(5)}}, {{{1}, n(5)}}, n(1), n(1)};
  auto f1 = make_rational_poly(lin);
  DomainSampler s(5, 40, 2);
  for (int i = 0; i < 10; ++i) CHECK(separation(f1({AlgebraElement::scalar(s.unit())}), sc(1)) >= Valuation(40));

  auto rp = RationalPolyParams::random(5, 2, 2, n(1), n(2), 3);
  CHECK(rp.numerator.size() == 5);  // x, y, x^2, xy, y^2
  auto f2 = make_rational_poly(rp);
  auto rep = verify_contraction(f2, 1000, 4);
  CHECK(rep.pass);
  CHECK(rep.min_observed_gap >= Valuation(1));

  RationalPolyParams unit_coeff{1, {{{1}, n(2)}}, {}, n(1), n(1)};
  CHECK_THROWS_AS(make_rational_poly(unit_coeff), DomainError);
  RationalPolyParams small_c{1, {}, {}, n(5), n(1)};
  CHECK_THROWS_AS(make_rational_poly(small_c), DomainError);
}

TEST_CASE("linear fractional maps") {
  auto f1 = make_linear_fractional(LinearFractionalParams::filled(1, n(1)));
  CHECK(f1({AlgebraElement::vector({n(6)})}) == AlgebraElement::vector({n(1)}));
  auto f2 = make_linear_fractional(LinearFractionalParams::filled(2, n(1)));
  CHECK(f2({AlgebraElement::vector({n(6), n(11)})}) == AlgebraElement::vector({n(1), n(1)}));

  auto fr = make_linear_fractional(LinearFractionalParams::random(5, 2, 5));
  auto rep = verify_contraction(fr, 1000, 6);
  CHECK(rep.pass);
  CHECK(rep.closure_failures == 0);

  CHECK_THROWS_AS(make_linear_fractional(LinearFractionalParams::filled(2, n(1, 3))), DomainError);
  CHECK_THROWS_AS(make_linear_fractional(LinearFractionalParams::filled(2, n(2))), DomainError);
}

TEST_CASE("sequence maps") {
  // theta = 1: a = b = 0 to the working precision, so F(x) = lambda.
  auto lam = AlgebraElement::seq({n(1), n(5), n(2), PadicNumber::zero(5)});
  auto flat = make_seq_map(km2009_params(n(1), 4, lam));
  CHECK(flat.contraction_exponent >= Valuation(kDefaultDigits));
  DomainSampler s(5, 40, 3);
  auto x = s.element(DomainSpec::unit_ball(), Shape{AlgebraKind::kSeq, 4});
  CHECK(separation(flat({x}), lam) >= Valuation(40));

  auto zero = make_seq_map(km2009_params(n(6), 4, AlgebraElement::filled(Shape{AlgebraKind::kSeq, 4}, PadicNumber::zero(5))));
  CHECK(zero({x}).norm().is_zero());

  auto params = km2009_params(n(6), 8, ones_seq(8));
  CHECK(params.a.valuation() == Valuation(2));
  CHECK(params.b.valuation() == Valuation(1));
  auto f = make_seq_map(params);
  CHECK(f.contraction_exponent == Valuation(1));
  auto rep = verify_contraction(f, 1000, 8);
  CHECK(rep.pass);

  // Direct evaluation of one component against exact rationals.
  auto y = AlgebraElement::seq({n(1), n(2), n(3), n(4), n(5), n(6), n(7), n(8)});
  mpq_class fk = 5 * mpq_class(36) + 1;  // p * sum + 1
  mpq_class want = (mpq_class(25) * 3 + fk) / (mpq_class(5) + fk);
  CHECK(f({y})[2].residue(6) == oracle::reduce(oracle::Ring(5, 6), want));

  SeqMapParams bad = params;
  bad.a = n(2);
  CHECK_THROWS_AS(make_seq_map(bad), DomainError);
  bad = params;
  bad.lambda = AlgebraElement::filled(Shape{AlgebraKind::kSeq, 8}, PadicNumber::from_rational(1, 5, 5));
  CHECK_THROWS_AS(make_seq_map(bad), DomainError);

  // A custom family that breaks |f_k| = 1 is caught by sampling.
  SeqMapParams custom = params;
  custom.family = {"broken", [](const AlgebraElement& v, std::size_t k) { return v[k]; }, false};
  CHECK_THROWS_AS(make_seq_map(custom), DomainError);
  custom.family = {"sum", km2009_family(5).eval, false};
  CHECK_NOTHROW(make_seq_map(custom));
}

TEST_CASE("shift and shifted products") {
  auto z = AlgebraElement::filled(Shape{AlgebraKind::kSeq, 3}, PadicNumber::zero(5));
  CHECK(shift(z) == z);
  auto x = AlgebraElement::seq({n(1), n(2), n(3)});
  CHECK(shift(x) == AlgebraElement::seq({n(2), n(3), PadicNumber::zero(5)}));
  DomainSampler s(5, 30, 4);
  for (int i = 0; i < 200; ++i) {
    auto y = s.element(DomainSpec::unit_ball(), Shape{AlgebraKind::kSeq, 6});
    CHECK(shift(y).norm() <= y.norm());
  }
  CHECK_THROWS_AS(shift(sc(1)), DomainError);

  auto lam = AlgebraElement::seq({n(1), n(2), n(3), n(4)});
  auto c = shifted_product_map(km2009_params(n(1), 4, lam, 1));
  CHECK(c({ones_seq(4)}) == shift(lam));

  auto zero = shifted_product_map(km2009_params(n(6), 4, AlgebraElement::filled(Shape{AlgebraKind::kSeq, 4}, PadicNumber::zero(5)), 2));
  CHECK(zero({ones_seq(4)}).norm().is_zero());

  auto g = shifted_product_map(km2009_params(n(6), 8, ones_seq(8), 2));
  CHECK(verify_contraction(g, 1000, 9).pass);
}

TEST_CASE("triple product recurrence") {
  auto f = make_rational_poly(RationalPolyParams::random(5, 2, 2, n(1), n(2), 11));
  auto spec = triple_product_recurrence(f);
  CHECK(spec.window_length() == 4);
  CHECK(spec.factors_per_summand() == 3);
  std::vector<AlgebraElement> init(4, sc(1));
  auto cert = solve_recurrence(spec, init, {30, 512});
  AlgebraElement x = cert.limit;
  AlgebraElement rhs = f({x, x}).pow(3);
  CHECK(separation(x, rhs) >= Valuation(30));
  CHECK_THROWS_AS(triple_product_recurrence(diagonal(f)), DomainError);
}

TEST_CASE("Cayley tree of order three with the mobius map") {
  auto f = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 6}, 5));
  const int depth = 8;
  auto shape = TreeShape::uniform(2, depth);
  DomainSampler s(5, kDefaultDigits, 13);
  std::vector<AlgebraElement> b1, b2;
  for (std::size_t i = 0; i < shape.leaf_count(); ++i) {
    b1.push_back(AlgebraElement::scalar(s.in_ep()));
    b2.push_back(AlgebraElement::scalar(s.in_ep()));
  }
  auto p = TreeProblem::uniform(shape, VertexFamily::single(f, 2), b1);
  auto inv = invariant_solution(p, {40, 512});
  auto diag = solve_recurrence(RecurrenceSpec({Term{{Factor{diagonal(f), 0}}}}), std::vector<AlgebraElement>{sc(1)}, {40, 512});
  CHECK(separation(inv.value, diag.limit) >= Valuation(40));
  CHECK(uniqueness_gap(p, b2).root_gap_valuation >= Valuation(depth));
}

TEST_CASE("c0 tree equations") {
  auto params = km2009_params(n(6), 5, AlgebraElement::seq({n(1), n(2), n(1), n(3), n(1)}), 2);
  auto fmap = make_seq_map(params);
  auto shape = TreeShape::uniform(2, 3);
  std::vector<AlgebraElement> bnd(shape.leaf_count(), ones_seq(5));
  auto p = TreeProblem::uniform(shape, VertexFamily::per_edge(fmap, 2), bnd);
  auto inv = invariant_solution(p, {30, 512});
  CHECK(separation(fmap({inv.value}).pow(2), inv.value) >= Valuation(30));

  auto g = shifted_product_map(params);
  auto p2 = TreeProblem::uniform(shape, VertexFamily::per_edge(g, 2), bnd);
  auto inv2 = invariant_solution(p2, {30, 512});
  CHECK(separation(g({inv2.value}).pow(2), inv2.value) >= Valuation(30));
}
