#pragma once

#include "padic/padic_number.hpp"

namespace padic {

/// Truncation control for the exp/log power series.
struct SeriesBudget {
  int max_terms = 4096;
  /// Terms of valuation >= target_digits are dropped; the result is known mod p^target_digits.
  int target_digits = kDefaultDigits;
};

/// log_p(x) = sum_{n>=1} (-1)^(n+1) (x-1)^n / n for |x - 1|_p < 1.
PadicNumber padic_log(const PadicNumber& x, const SeriesBudget& budget = {});

/// exp_p(x) = sum_{n>=0} x^n / n! for |x|_p < p^(-1/(p-1)).
PadicNumber padic_exp(const PadicNumber& x, const SeriesBudget& budget = {});

/// x in E_p, i.e. |x|_p = 1 and |x - 1|_p <= 1/p.
bool in_Ep(const PadicNumber& x);

/// ord_p(n!) by Legendre's formula (n - s_p(n)) / (p - 1).
std::int64_t factorial_valuation(std::int64_t n, Prime prime);

}  // namespace padic
