#include <doctest.h>

#include "oracle.hpp"
#include "padic/applications.hpp"
#include "padic/sampling.hpp"

using namespace padic;

namespace {

const std::array<std::int64_t, 6> kParams{1, 1, 1, 1, 1, 6};
const std::array<long, 6> kParamsQ{1, 1, 1, 1, 1, 6};

ContractiveMap mobius5() { return make_mobius(MobiusParams::from_integers(kParams, 5)); }

AlgebraElement sc(long v, Prime p = 5) { return AlgebraElement::scalar(PadicNumber::from_integer(v, p)); }

// x_{n+1} = f(x_n, x_n)
RecurrenceSpec diagonal_spec(const ContractiveMap& f) { return RecurrenceSpec({Term{{Factor{diagonal(f), 0}}}}); }

}  // namespace

TEST_CASE("step") {
  auto one = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 1}, 5));
  RecurrenceSpec two_step({Term{{Factor{one, 0}}}});
  CHECK(two_step.window_length() == 2);
  DomainSampler s(5, 40, 1);
  std::vector<AlgebraElement> w{AlgebraElement::scalar(s.in_ep()), AlgebraElement::scalar(s.in_ep())};
  CHECK(separation(step(two_step, w), sc(1)) >= Valuation(40));

  RecurrenceSpec spec({Term{{Factor{mobius5(), 0}}}});
  std::vector<AlgebraElement> ones{sc(1), sc(1)};
  AlgebraElement v = step(spec, ones);
  oracle::Ring r(5, 8);
  CHECK(v.valuation() == Valuation(0));
  CHECK(v.as_scalar().residue(8) == oracle::reduce(r, oracle::mobius_q(kParamsQ, 1, 1)));
  CHECK(oracle::mobius_q(kParamsQ, 1, 1) == mpq_class(4, 9));

  std::vector<AlgebraElement> bad{sc(1), sc(2)};
  CHECK_THROWS_AS(step(spec, bad), DomainError);

  auto c = constant_map(sc(6), 1, DomainSpec::ep());
  RecurrenceSpec cs({Term{{Factor{c, 0}}}});
  std::vector<AlgebraElement> w1{sc(11)};
  CHECK(step(cs, w1) == sc(6));
}

TEST_CASE("offset rules") {
  auto f = make_mobius(MobiusParams::from_integers(kParams, 5));
  Term adjacent{{Factor{f, 0}, Factor{f, 1}}};
  CHECK_THROWS_AS(RecurrenceSpec({adjacent}), DomainError);
  CHECK_NOTHROW(RecurrenceSpec({adjacent}, OffsetPolicy::kRelaxed));
  CHECK(RecurrenceSpec({adjacent}, OffsetPolicy::kRelaxed).window_length() == 3);
  Term not_zero{{Factor{f, 1}}};
  CHECK_THROWS_AS(RecurrenceSpec({not_zero}), DomainError);
  auto id = identity_map(Shape{}, DomainSpec::ep(), 5, 0);
  CHECK_THROWS_AS(RecurrenceSpec({Term{{Factor{id, 0}}}}), DomainError);
}

TEST_CASE("diagonal mobius recurrence matches the residue scan") {
  oracle::Ring r2(5, 2), r3(5, 3);
  auto roots2 = oracle::scan(r2.ep(), [&](oracle::i64 x) { return oracle::mobius(r2, kParams, x, x); });
  REQUIRE(roots2 == std::vector<oracle::i64>{6});
  auto roots3 = oracle::scan(r3.ep(), [&](oracle::i64 x) { return oracle::mobius(r3, kParams, x, x); });
  REQUIRE(roots3.size() == 1);
  // The same root solves the cubic x^3 + x^2 + 4x - 1 = 0 mod 25.
  CHECK(r2.red(6 * 6 * 6 + 6 * 6 + 4 * 6 - 1) == 0);

  auto spec = diagonal_spec(mobius5());
  std::vector<AlgebraElement> init{sc(1)};
  auto cert = solve_recurrence(spec, init, {40, 512});
  CHECK(cert.limit.as_scalar().residue(2) == roots2[0]);
  CHECK(cert.limit.as_scalar().residue(3) == roots3[0]);
  CHECK(cert.residual_valuation >= Valuation(40));
  CHECK(cert.iterations <= iteration_bound(1, 1, 40));
  CHECK(rate_certificate_holds(cert));
  for (const auto& t : cert.limit_distance) CHECK(t.valuation >= std::min(Valuation(t.n), Valuation(40)));
}

TEST_CASE("all-ones mobius converges at once") {
  auto one = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 1}, 5));
  std::vector<AlgebraElement> init{sc(11), sc(21)};
  auto cert = solve_recurrence(RecurrenceSpec({Term{{Factor{one, 0}}}}), init, {20, 64});
  CHECK(cert.limit == sc(1));
  // x_2 = x_3 = 1; the last two gaps vanish once x_4 is known.
  CHECK(cert.iterations <= 3);
}

TEST_CASE("two-step window: limit and the ceil(n/L) rate") {
  RecurrenceSpec spec({Term{{Factor{mobius5(), 0}}}});
  REQUIRE(spec.window_length() == 2);
  DomainSampler s(5, kDefaultDigits, 9);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<AlgebraElement> init{AlgebraElement::scalar(s.in_ep()), AlgebraElement::scalar(s.in_ep())};
    auto cert = solve_recurrence(spec, init, {30, 512});
    CHECK(cert.limit.as_scalar().residue(2) == 6);
    CHECK(rate_certificate_holds(cert));
    CHECK(cert.iterations <= iteration_bound(1, 2, 30));
  }
}

TEST_CASE("initial windows are forgotten") {
  auto spec = diagonal_spec(mobius5());
  DomainSampler s(5, kDefaultDigits, 4);
  for (int trial = 0; trial < 10; ++trial) {
    AlgebraElement x = AlgebraElement::scalar(s.in_ep());
    AlgebraElement y = AlgebraElement::scalar(s.in_ep());
    for (std::int64_t n = 1; n <= 40; ++n) {
      CHECK(separation(x, y) >= Valuation(n - 1));
      x = step(spec, std::span(&x, 1), n);
      y = step(spec, std::span(&y, 1), n);
    }
  }
}

TEST_CASE("power fixed point x = f(x, x)^2") {
  oracle::Ring r(5, 3);
  auto roots = oracle::scan(r.ep(), [&](oracle::i64 x) { return r.pow(oracle::mobius(r, kParams, x, x), 2); });
  REQUIRE(roots.size() == 1);
  auto cert = solve_power_fixed_point(mobius5(), 2, {40, 512});
  CHECK(cert.limit.as_scalar().residue(3) == roots[0]);
  CHECK(cert.residual_valuation >= Valuation(40));

  auto c = constant_map(sc(6), 1, DomainSpec::ep());
  CHECK(solve_power_fixed_point(c, 1, {10, 8}).limit == sc(6));
  auto one = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 1}, 5));
  CHECK(solve_power_fixed_point(one, 3, {10, 8}).limit == sc(1));
}

TEST_CASE("solver errors") {
  auto spec = diagonal_spec(mobius5());
  std::vector<AlgebraElement> init{sc(1)};
  CHECK_THROWS_AS(solve_recurrence(spec, init, {40, 5}), IterationLimitError);
  std::vector<AlgebraElement> coarse{AlgebraElement::scalar(PadicNumber::from_integer(1, 5, 10))};
  CHECK_THROWS_AS(solve_recurrence(spec, coarse, {40, 512}), PrecisionError);
  std::vector<AlgebraElement> outside{sc(2)};
  CHECK_THROWS_AS(solve_recurrence(spec, outside, {40, 512}), DomainError);
}

TEST_CASE("coupled system") {
  auto c = constant_map(sc(6), 2, DomainSpec::ep());
  CoupledSpec constant{{{c, c}}, {{c, c}}, {{c, c}}};
  auto cert = solve_coupled(constant, {sc(1), sc(1), sc(1)}, {20, 16});
  for (const auto& comp : cert.components) CHECK(comp.limit == sc(36));
  CHECK(cert.envelope.size() == 2);
  CHECK(cert.envelope.back().valuation.is_infinite());

  auto one = make_mobius(MobiusParams::from_integers({1, 1, 1, 1, 1, 1}, 5));
  CoupledSpec ones{{{one, one}}, {{one, one}}, {{one, one}}};
  auto c1 = solve_coupled(ones, {sc(11), sc(16), sc(21)}, {20, 16});
  for (const auto& comp : c1.components) CHECK(comp.limit == sc(1));

  oracle::Ring r(5, 3);
  auto roots = oracle::scan(r.ep(), [&](oracle::i64 x) { return r.pow(oracle::mobius(r, kParams, x, x), 2); });
  REQUIRE(roots.size() == 1);
  auto f = mobius5();
  CoupledSpec sym{{{f, f}}, {{f, f}}, {{f, f}}};
  auto c2 = solve_coupled(sym, {sc(1), sc(6), sc(11)}, {40, 512});
  for (const auto& comp : c2.components) {
    CHECK(comp.limit.as_scalar().residue(3) == roots[0]);
    CHECK(comp.residual_valuation >= Valuation(40));
  }
  for (std::size_t i = 1; i < c2.envelope.size(); ++i) {
    CHECK(c2.envelope[i].valuation >= c2.envelope[i - 1].valuation + 1);
  }
}

TEST_CASE("verify_contraction") {
  auto c = constant_map(sc(6), 2, DomainSpec::ep());
  auto rc = verify_contraction(c, 50, 1);
  CHECK(rc.pass);
  CHECK(rc.min_observed_gap.is_infinite());

  auto rm = verify_contraction(mobius5(), 500, 2);
  CHECK(rm.pass);
  CHECK(rm.min_observed_gap >= Valuation(1));
  CHECK(rm.closure_failures == 0);

  auto id = identity_map(Shape{}, DomainSpec::unit_ball(), 5, 1);
  auto ri = verify_contraction(id, 50, 3);
  CHECK_FALSE(ri.pass);
  CHECK(ri.min_observed_gap == Valuation(0));

  // A map ignoring its second argument, declared through the mask.
  ContractiveMap first = mobius5();
  first.eval = [f = mobius5()](std::span<const AlgebraElement> xs) { return f({xs[0], xs[0]}); };
  first.depends_on = {true, false};
  CHECK(verify_contraction(first, 200, 4).pass);
}
