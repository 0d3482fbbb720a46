#include "padic/special_fn.hpp"

#include <algorithm>

#include "padic/algebra.hpp"

namespace padic {

namespace {

std::int64_t ord_small(std::int64_t n, Prime p) {
  std::int64_t k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

std::int64_t floor_log(std::int64_t n, Prime p) {
  std::int64_t k = 0;
  while (n >= p) {
    n /= p;
    ++k;
  }
  return k;
}

PadicNumber one_with(Prime p, int digits) { return PadicNumber::from_unit(p, 0, 1, digits); }

void check_budget(const SeriesBudget& budget) {
  if (budget.max_terms < 1 || budget.target_digits < 1) {
    throw DomainError("series budget needs positive max_terms and target_digits");
  }
}

}  // namespace

std::int64_t factorial_valuation(std::int64_t n, Prime prime) {
  std::int64_t digit_sum = 0;
  for (std::int64_t m = n; m > 0; m /= prime) digit_sum += m % prime;
  return (n - digit_sum) / (prime - 1);
}

bool in_Ep(const PadicNumber& x) { return in_scalar_domain(DomainKind::kEp, x); }

PadicNumber padic_log(const PadicNumber& x, const SeriesBudget& budget) {
  check_budget(budget);
  const Prime p = x.prime();
  const int target = budget.target_digits;
  PadicNumber y = x - one_with(p, std::max(target, 1));
  if (!y.is_zero_mod(1)) {
    if (y.is_zero()) throw PrecisionError("log: cannot decide |x - 1| < 1 at this precision");
    throw DomainError("log: x = " + x.to_string() + " outside B(1, 1)");
  }
  if (y.is_zero()) return PadicNumber::zero(p, std::min<std::int64_t>(y.absolute_precision().value(), target));

  const std::int64_t v = y.valuation().value();
  // n*v - ord_p(n) >= n*v - floor(log_p n), which grows in n; stop once it reaches target.
  PadicNumber sum = PadicNumber::zero(p);
  PadicNumber power = y;
  int used = 0;
  for (std::int64_t n = 1; n * v - floor_log(n, p) < target; ++n) {
    if (n > 1) power = power * y;
    if (n * v - ord_small(n, p) >= target) continue;
    if (++used > budget.max_terms) throw PrecisionError("log: series budget exhausted");
    PadicNumber term = power / PadicNumber::from_integer(n, p, std::max(power.digits(), 1));
    sum = (n % 2 == 1) ? sum + term : sum - term;
  }
  return (sum + PadicNumber::zero(p, target)).truncated(target);
}

PadicNumber padic_exp(const PadicNumber& x, const SeriesBudget& budget) {
  check_budget(budget);
  const Prime p = x.prime();
  const int target = budget.target_digits;
  // Convergence needs ord_p(x) > 1/(p-1): ord >= 1 for odd p, ord >= 2 for p = 2.
  const std::int64_t min_val = (p == 2) ? 2 : 1;
  if (!x.is_zero_mod(min_val)) {
    if (x.is_zero()) throw PrecisionError("exp: cannot decide convergence at this precision");
    throw DomainError("exp: x = " + x.to_string() + " outside the convergence ball");
  }
  PadicNumber one = one_with(p, target);
  if (x.is_zero()) {
    return (one + PadicNumber::zero(p, std::min<std::int64_t>(x.absolute_precision().value(), target)));
  }

  const std::int64_t v = x.valuation().value();
  PadicNumber sum = one;
  PadicNumber term = one;  // x^n / n!
  int used = 0;
  // ord(x^n/n!) >= n*v - (n-1)/(p-1), increasing in n since v > 1/(p-1).
  for (std::int64_t n = 1; n * v * (p - 1) - (n - 1) < static_cast<std::int64_t>(target) * (p - 1); ++n) {
    term = term * x / PadicNumber::from_integer(n, p, std::max(term.digits(), std::max(x.digits(), 1)));
    if (n * v - factorial_valuation(n, p) >= target) continue;
    if (++used > budget.max_terms) throw PrecisionError("exp: series budget exhausted");
    sum = sum + term;
  }
  return (sum + PadicNumber::zero(p, target)).truncated(target);
}

}  // namespace padic
