#include <doctest.h>

#include "oracle.hpp"
#include "padic/algebra.hpp"
#include "padic/sampling.hpp"

using namespace padic;

namespace {

PadicNumber n5(long v) { return PadicNumber::from_integer(v, 5, 12); }

}  // namespace

TEST_CASE("sup norms") {
  auto v = AlgebraElement::vector({n5(1), n5(5), n5(25)});
  CHECK(v.norm().exponent == Valuation(0));
  CHECK(AlgebraElement::scalar(PadicNumber::zero(5)).norm().is_zero());
  auto s = AlgebraElement::seq({n5(5), n5(25), PadicNumber::zero(5), PadicNumber::zero(5)});
  CHECK(s.norm().exponent == Valuation(1));
  CHECK(s.norm().to_string() == "5^-1");

  // Scaling the dominant component by p lowers the norm by one step.
  auto w = AlgebraElement::vector({n5(5), n5(50), n5(250)});
  auto scaled = AlgebraElement::vector({n5(25), n5(50), n5(250)});
  CHECK(w.valuation() == Valuation(1));
  CHECK(scaled.valuation() == Valuation(2));
  CHECK(scaled.norm() < w.norm());
}

TEST_CASE("shapes must agree") {
  auto v = AlgebraElement::vector({n5(1), n5(2)});
  auto s = AlgebraElement::seq({n5(1), n5(2)});
  CHECK_THROWS_AS(v + s, DomainError);
  CHECK_THROWS_AS(v.as_scalar(), DomainError);
  CHECK((v * v)[1] == n5(4));
}

TEST_CASE("domain membership") {
  auto ep = DomainSpec::ep();
  CHECK(ep.contains(AlgebraElement::scalar(n5(1))));
  CHECK(ep.contains(AlgebraElement::scalar(n5(6))));
  CHECK_FALSE(ep.contains(AlgebraElement::scalar(n5(2))));
  CHECK_FALSE(ep.contains(AlgebraElement::scalar(n5(5))));
  auto sphere = DomainSpec::unit_sphere();
  CHECK(sphere.contains(AlgebraElement::vector({n5(5), n5(3)})));
  CHECK_FALSE(sphere.contains(AlgebraElement::vector({n5(5), n5(10)})));
  auto ball = DomainSpec::unit_ball();
  CHECK(ball.contains(AlgebraElement::vector({n5(5), n5(10)})));
  CHECK_FALSE(ball.contains(AlgebraElement::scalar(PadicNumber::from_rational(1, 5, 5, 12))));
  auto prod = DomainSpec::product({DomainKind::kEp, DomainKind::kUnitBall});
  CHECK(prod.contains(AlgebraElement::vector({n5(11), n5(10)})));
  CHECK_FALSE(prod.contains(AlgebraElement::vector({n5(10), n5(11)})));
  // A cancelled value known only mod 5^0 cannot be placed.
  auto fuzzy = AlgebraElement::scalar(PadicNumber::zero(5, -1));
  CHECK_THROWS_AS(ball.contains(fuzzy), PrecisionError);
}

TEST_CASE("product difference bound") {
  std::vector<AlgebraElement> a{AlgebraElement::scalar(n5(3))};
  CHECK(product_difference_bound(a, a));
  std::vector<AlgebraElement> b{AlgebraElement::scalar(n5(8))};
  CHECK(product_difference_bound(a, b));
  std::vector<AlgebraElement> big{AlgebraElement::scalar(PadicNumber::from_rational(1, 5, 5, 12))};
  CHECK_THROWS_AS(product_difference_bound(big, a), DomainError);

  // Randomized: both sides evaluated directly.
  DomainSampler s(5, 30, 5);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t len = 1 + s.uniform(6);
    const Shape shape = t % 2 ? Shape{AlgebraKind::kVector, 3} : Shape{};
    std::vector<AlgebraElement> xs, ys;
    for (std::size_t i = 0; i < len; ++i) {
      xs.push_back(s.element(DomainSpec::unit_ball(), shape));
      ys.push_back(s.uniform(2) ? s.perturb(xs.back()) : s.element(DomainSpec::unit_ball(), shape));
    }
    REQUIRE(product_difference_bound(xs, ys));
  }
}

TEST_CASE("Cauchy gap") {
  std::vector<AlgebraElement> constant(3, AlgebraElement::scalar(n5(7)));
  CHECK(is_cauchy_gap(constant, 100));
  std::vector<AlgebraElement> tr{AlgebraElement::scalar(n5(0 + 1)), AlgebraElement::scalar(n5(1 + 5)),
                                 AlgebraElement::scalar(n5(1 + 5 + 25)),
                                 AlgebraElement::scalar(n5(1 + 5 + 25 + 125))};
  CHECK(is_cauchy_gap(tr, 3));
  CHECK_FALSE(is_cauchy_gap(tr, 4));
  CHECK_THROWS_AS(is_cauchy_gap(std::span(tr).first(1), 1), DomainError);
}

TEST_CASE("separation of equal values at mixed precision") {
  auto x = AlgebraElement::scalar(PadicNumber::from_unit(5, 0, 6, 5));
  auto y = AlgebraElement::scalar(PadicNumber::from_unit(5, 0, 6, 10));
  CHECK(separation(x, x).is_infinite());
  CHECK(separation(x, y) == Valuation(5));
}
