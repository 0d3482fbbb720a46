#pragma once

#include <cstdint>
#include <random>

#include "padic/algebra.hpp"

namespace padic {

/// Deterministic sampler for points of the iteration domains.
///
/// Points are built so that membership holds by construction: E_p elements are
/// 1 + p * (random digits), unit-sphere elements have a nonzero leading digit.
class DomainSampler {
 public:
  DomainSampler(Prime prime, int digits, std::uint64_t seed)
      : prime_(prime), digits_(digits), rng_(seed) {}

  Prime prime() const { return prime_; }
  int digits() const { return digits_; }

  /// Uniform integer in [0, p^n).
  mpz_class random_digits(int n);
  /// Uniform in [0, bound).
  std::uint64_t uniform(std::uint64_t bound) { return rng_() % bound; }

  PadicNumber unit();
  PadicNumber in_ep();
  PadicNumber in_unit_ball();
  PadicNumber in_unit_sphere();
  /// Random element of valuation >= min_valuation (p^v * unit, v drawn above the floor).
  PadicNumber with_valuation_at_least(int min_valuation);

  PadicNumber scalar_in(DomainKind kind);
  AlgebraElement element(const DomainSpec& domain, const Shape& shape);
  /// x + p^j * r with j in [1, 6]: stays in every domain the sampler supports.
  AlgebraElement perturb(const AlgebraElement& x);

 private:
  Prime prime_;
  int digits_;
  std::mt19937_64 rng_;
};

}  // namespace padic
