#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "padic/errors.hpp"
#include "padic/valuation.hpp"

namespace padic {

using Prime = std::int64_t;

/// Default number of significant base-p digits carried by new numbers.
inline constexpr int kDefaultDigits = 60;

/// Element of Q_p known to a finite absolute precision.
///
/// A nonzero value is stored as p^valuation * unit with 0 < unit < p^digits and
/// p not dividing unit; it is known modulo p^(valuation + digits).
///
/// Zero comes in two flavours. An exact zero (from_rational(0, ...), the tail
/// of a truncated sequence) has infinite absolute precision. A zero produced by
/// cancellation is only known modulo p^A; it still reports valuation infinity
/// and norm 0, but valuation_lower_bound() returns A and any operation that
/// needs its unit part (division, inversion) raises PrecisionError.
class PadicNumber {
 public:
  /// Exact zero over `prime`.
  static PadicNumber zero(Prime prime);
  /// Zero known only modulo p^absolute_precision.
  static PadicNumber zero(Prime prime, std::int64_t absolute_precision);

  /// num/den as a p-adic number with `digits` significant digits.
  static PadicNumber from_rational(const mpz_class& num, const mpz_class& den, Prime prime,
                                   int digits = kDefaultDigits);
  static PadicNumber from_rational(std::int64_t num, std::int64_t den, Prime prime,
                                   int digits = kDefaultDigits);
  static PadicNumber from_integer(const mpz_class& n, Prime prime, int digits = kDefaultDigits);

  /// p^valuation * (unit mod p^digits). A unit divisible by p is normalized.
  static PadicNumber from_unit(Prime prime, std::int64_t valuation, const mpz_class& unit,
                               int digits);

  Prime prime() const { return prime_; }
  bool is_zero() const { return kind_ != Kind::kNonzero; }
  bool is_exact_zero() const { return kind_ == Kind::kExactZero; }

  /// ord_p(x); infinity for both kinds of zero.
  Valuation valuation() const;
  /// Largest t for which x is known to lie in p^t Z_p.
  Valuation valuation_lower_bound() const;
  /// valuation + digits; infinity for an exact zero.
  Valuation absolute_precision() const;
  /// Significant digits of the unit part (0 for zeros).
  int digits() const { return kind_ == Kind::kNonzero ? digits_ : 0; }
  const mpz_class& unit() const { return unit_; }

  /// True iff x is provably divisible by p^t.
  bool is_zero_mod(std::int64_t t) const { return valuation_lower_bound() >= Valuation(t); }

  /// x mod p^t as an integer in [0, p^t). Requires valuation >= 0 and enough precision.
  mpz_class residue(int t) const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);

  PadicNumber inverse() const;
  PadicNumber pow(unsigned n) const;

  /// Drops precision to at most p^absolute_precision.
  PadicNumber truncated(std::int64_t absolute_precision) const;

  /// Bit-identical representation (same prime, kind, valuation, unit, digits).
  bool operator==(const PadicNumber& other) const;

  /// "p^v * u (mod p^(v+d))", "0", or "0 (mod p^A)".
  std::string to_string() const;
  /// Little-endian base-p digits of the unit, exactly `digits()` entries.
  std::vector<int> unit_digits() const;

 private:
  enum class Kind { kExactZero, kApproxZero, kNonzero };

  PadicNumber() = default;
  void require_same_prime(const PadicNumber& other) const;

  Prime prime_ = 2;
  Kind kind_ = Kind::kExactZero;
  // kNonzero: ord_p; kApproxZero: absolute precision.
  std::int64_t valuation_ = 0;
  mpz_class unit_ = 0;
  int digits_ = 0;
};

/// p^e as a big integer.
mpz_class prime_power(Prime prime, std::int64_t e);

/// Inverse of a p-adic unit modulo p^digits by Newton lifting of the reciprocal.
mpz_class inverse_unit_mod(const mpz_class& unit, Prime prime, int digits);

/// ord_p(n) for nonzero n.
std::int64_t ord_p(const mpz_class& n, Prime prime);

/// Trial-division primality test for the small primes this library works over.
bool is_prime(Prime n);

}  // namespace padic
