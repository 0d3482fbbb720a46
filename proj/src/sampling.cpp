#include "padic/sampling.hpp"

namespace padic {

mpz_class DomainSampler::random_digits(int n) {
  mpz_class r = 0;
  mpz_class p = static_cast<unsigned long>(prime_);
  for (int i = 0; i < n; ++i) r = r * p + static_cast<unsigned long>(uniform(prime_));
  return r;
}

PadicNumber DomainSampler::unit() {
  mpz_class lead = static_cast<unsigned long>(1 + uniform(prime_ - 1));
  mpz_class u = lead + prime_power(prime_, 1) * random_digits(digits_ - 1);
  return PadicNumber::from_unit(prime_, 0, u, digits_);
}

PadicNumber DomainSampler::in_ep() {
  mpz_class u = 1 + prime_power(prime_, 1) * random_digits(digits_ - 1);
  return PadicNumber::from_unit(prime_, 0, u, digits_);
}

PadicNumber DomainSampler::in_unit_sphere() { return unit(); }

PadicNumber DomainSampler::with_valuation_at_least(int min_valuation) {
  // Valuation is min_valuation + geometric-ish offset in [0, 3].
  int v = min_valuation + static_cast<int>(uniform(4));
  PadicNumber u = unit();
  return PadicNumber::from_unit(prime_, v, u.unit(), digits_ - v > 0 ? digits_ - v : 1);
}

PadicNumber DomainSampler::in_unit_ball() {
  // Mostly units so that norms of 1 are exercised, with some deeper points.
  if (uniform(2) == 0) return unit();
  return with_valuation_at_least(1);
}

PadicNumber DomainSampler::scalar_in(DomainKind kind) {
  switch (kind) {
    case DomainKind::kUnitBall: return in_unit_ball();
    case DomainKind::kUnitSphere: return in_unit_sphere();
    case DomainKind::kEp: return in_ep();
    case DomainKind::kProduct: break;
  }
  throw DomainError("cannot sample a nested product domain");
}

AlgebraElement DomainSampler::element(const DomainSpec& domain, const Shape& shape) {
  std::vector<PadicNumber> xs;
  xs.reserve(shape.size);
  for (std::size_t i = 0; i < shape.size; ++i) {
    DomainKind k = domain.kind;
    if (k == DomainKind::kProduct) k = domain.factors.at(i);
    // Unit sphere in the sup norm: one unit component suffices; the rest are ball points.
    if (k == DomainKind::kUnitSphere && shape.size > 1 && i > 0) k = DomainKind::kUnitBall;
    xs.push_back(scalar_in(k));
  }
  return AlgebraElement::of_shape(shape, std::move(xs));
}

AlgebraElement DomainSampler::perturb(const AlgebraElement& x) {
  std::vector<PadicNumber> xs;
  xs.reserve(x.size());
  for (const auto& c : x.components()) {
    if (uniform(3) == 0) {
      xs.push_back(c);
      continue;
    }
    int j = 1 + static_cast<int>(uniform(6));
    PadicNumber shift = PadicNumber::from_unit(prime_, j, random_digits(digits_) + 1, digits_);
    xs.push_back((c + shift).truncated(digits_));
  }
  return AlgebraElement::of_shape(x.shape(), std::move(xs));
}

}  // namespace padic
