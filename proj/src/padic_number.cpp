#include "padic/padic_number.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>
#include <utility>

namespace padic {

mpz_class prime_power(Prime prime, std::int64_t e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(prime), static_cast<unsigned long>(e));
  return r;
}

std::int64_t ord_p(const mpz_class& n, Prime prime) {
  if (n == 0) throw DomainError("ord_p of zero");
  mpz_class rest;
  mpz_class p = static_cast<unsigned long>(prime);
  return static_cast<std::int64_t>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

bool is_prime(Prime n) {
  if (n < 2) return false;
  for (Prime d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace {

void check_prime(Prime prime) {
  if (!is_prime(prime)) throw DomainError("not a prime: " + std::to_string(prime));
}

mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Inverse of a modulo a small prime p via extended Euclid; a must be a unit.
std::int64_t inverse_mod_prime(std::int64_t a, std::int64_t p) {
  std::int64_t r0 = p, r1 = ((a % p) + p) % p;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
  }
  if (r0 != 1) throw DomainError("not invertible modulo p");
  return ((t0 % p) + p) % p;
}

}  // namespace

mpz_class inverse_unit_mod(const mpz_class& unit, Prime prime, int digits) {
  mpz_class p = static_cast<unsigned long>(prime);
  mpz_class low = mod_floor(unit, p);
  if (low == 0) throw DomainError("inverse of a non-unit");
  mpz_class y = inverse_mod_prime(low.get_si(), prime);
  // y <- y (2 - u y) doubles the number of correct digits each round.
  int known = 1;
  while (known < digits) {
    known = std::min(2 * known, digits);
    mpz_class m = prime_power(prime, known);
    mpz_class uy = mod_floor(unit * y, m);
    y = mod_floor(y * (2 - uy), m);
  }
  return y;
}

PadicNumber PadicNumber::zero(Prime prime) {
  PadicNumber z;
  z.prime_ = prime;
  z.kind_ = Kind::kExactZero;
  return z;
}

PadicNumber PadicNumber::zero(Prime prime, std::int64_t absolute_precision) {
  PadicNumber z;
  z.prime_ = prime;
  z.kind_ = Kind::kApproxZero;
  z.valuation_ = absolute_precision;
  return z;
}

PadicNumber PadicNumber::from_unit(Prime prime, std::int64_t valuation, const mpz_class& unit,
                                   int digits) {
  if (digits < 1) throw DomainError("digits must be positive");
  mpz_class u = mod_floor(unit, prime_power(prime, digits));
  if (u == 0) return zero(prime, valuation + digits);
  std::int64_t w = ord_p(u, prime);
  if (w > 0) u /= prime_power(prime, w);
  PadicNumber x;
  x.prime_ = prime;
  x.kind_ = Kind::kNonzero;
  x.valuation_ = valuation + w;
  x.digits_ = digits - static_cast<int>(w);
  x.unit_ = std::move(u);
  return x;
}

PadicNumber PadicNumber::from_rational(const mpz_class& num, const mpz_class& den, Prime prime,
                                       int digits) {
  check_prime(prime);
  if (den == 0) throw DomainError("zero denominator");
  if (digits < 1) throw DomainError("digits must be positive");
  if (num == 0) return zero(prime);
  std::int64_t a = ord_p(num, prime);
  std::int64_t b = ord_p(den, prime);
  mpz_class m = num / prime_power(prime, a);
  mpz_class n = den / prime_power(prime, b);
  mpz_class mod = prime_power(prime, digits);
  PadicNumber x;
  x.prime_ = prime;
  x.kind_ = Kind::kNonzero;
  x.valuation_ = a - b;
  x.digits_ = digits;
  x.unit_ = mod_floor(mod_floor(m, mod) * inverse_unit_mod(mod_floor(n, mod), prime, digits), mod);
  return x;
}

PadicNumber PadicNumber::from_rational(std::int64_t num, std::int64_t den, Prime prime,
                                       int digits) {
  return from_rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)),
                       prime, digits);
}

PadicNumber PadicNumber::from_integer(const mpz_class& n, Prime prime, int digits) {
  return from_rational(n, mpz_class(1), prime, digits);
}

Valuation PadicNumber::valuation() const {
  return kind_ == Kind::kNonzero ? Valuation(valuation_) : Valuation::infinity();
}

Valuation PadicNumber::valuation_lower_bound() const {
  switch (kind_) {
    case Kind::kExactZero: return Valuation::infinity();
    case Kind::kApproxZero:
    case Kind::kNonzero: return Valuation(valuation_);
  }
  return Valuation::infinity();
}

Valuation PadicNumber::absolute_precision() const {
  switch (kind_) {
    case Kind::kExactZero: return Valuation::infinity();
    case Kind::kApproxZero: return Valuation(valuation_);
    case Kind::kNonzero: return Valuation(valuation_ + digits_);
  }
  return Valuation::infinity();
}

mpz_class PadicNumber::residue(int t) const {
  if (t < 0) throw DomainError("negative residue exponent");
  if (absolute_precision() < Valuation(t)) {
    throw PrecisionError("residue mod p^" + std::to_string(t) + " needs more precision than " +
                         absolute_precision().to_string());
  }
  if (kind_ != Kind::kNonzero) return 0;
  if (valuation_ < 0) throw DomainError("residue of a non-integral p-adic number");
  if (valuation_ >= t) return 0;
  mpz_class m = prime_power(prime_, t);
  return mod_floor(unit_ * prime_power(prime_, valuation_), m);
}

void PadicNumber::require_same_prime(const PadicNumber& other) const {
  if (prime_ != other.prime_) {
    throw DomainError("prime mismatch: " + std::to_string(prime_) + " vs " +
                      std::to_string(other.prime_));
  }
}

PadicNumber PadicNumber::operator-() const {
  if (kind_ != Kind::kNonzero) return *this;
  PadicNumber r = *this;
  r.unit_ = prime_power(prime_, digits_) - unit_;
  return r;
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  x.require_same_prime(y);
  using Kind = PadicNumber::Kind;
  if (x.kind_ == Kind::kExactZero) return y;
  if (y.kind_ == Kind::kExactZero) return x;
  const Prime p = x.prime_;
  const std::int64_t abs = std::min(x.absolute_precision().value(), y.absolute_precision().value());
  if (x.kind_ == Kind::kApproxZero) return y.truncated(abs);
  if (y.kind_ == Kind::kApproxZero) return x.truncated(abs);

  const std::int64_t vmin = std::min(x.valuation_, y.valuation_);
  if (abs <= vmin) return PadicNumber::zero(p, abs);
  // Both operands shifted to a common valuation vmin; the sum is known mod p^(abs - vmin).
  mpz_class s = x.unit_ * prime_power(p, x.valuation_ - vmin) +
                y.unit_ * prime_power(p, y.valuation_ - vmin);
  return PadicNumber::from_unit(p, vmin, s, static_cast<int>(abs - vmin));
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  x.require_same_prime(y);
  using Kind = PadicNumber::Kind;
  const Prime p = x.prime_;
  if (x.kind_ == Kind::kExactZero || y.kind_ == Kind::kExactZero) return PadicNumber::zero(p);
  if (x.kind_ == Kind::kApproxZero || y.kind_ == Kind::kApproxZero) {
    // (p^A O(1)) * y is known modulo p^(A + v(y)).
    Valuation bound = x.valuation_lower_bound() + y.valuation_lower_bound();
    return PadicNumber::zero(p, bound.value());
  }
  PadicNumber r;
  r.prime_ = p;
  r.kind_ = Kind::kNonzero;
  r.valuation_ = x.valuation_ + y.valuation_;
  r.digits_ = std::min(x.digits_, y.digits_);
  r.unit_ = mod_floor(x.unit_ * y.unit_, prime_power(p, r.digits_));
  return r;
}

PadicNumber PadicNumber::inverse() const {
  if (kind_ == Kind::kExactZero) throw DomainError("division by zero");
  if (kind_ == Kind::kApproxZero) {
    throw PrecisionError("inverse of a value indistinguishable from 0 mod p^" +
                         std::to_string(valuation_));
  }
  PadicNumber r = *this;
  r.valuation_ = -valuation_;
  r.unit_ = inverse_unit_mod(unit_, prime_, digits_);
  return r;
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
  x.require_same_prime(y);
  if (y.is_exact_zero()) throw DomainError("division by zero");
  PadicNumber inv = y.inverse();
  if (x.is_exact_zero()) return x;
  return x * inv;
}

PadicNumber PadicNumber::pow(unsigned n) const {
  if (n == 0) return from_unit(prime_, 0, 1, kind_ == Kind::kNonzero ? digits_ : kDefaultDigits);
  PadicNumber result = *this;
  PadicNumber base = *this;
  for (unsigned e = n - 1; e > 0;) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

PadicNumber PadicNumber::truncated(std::int64_t absolute_precision) const {
  if (Valuation(absolute_precision) >= this->absolute_precision()) return *this;
  if (kind_ != Kind::kNonzero) return zero(prime_, absolute_precision);
  if (absolute_precision <= valuation_) return zero(prime_, absolute_precision);
  return from_unit(prime_, valuation_, unit_, static_cast<int>(absolute_precision - valuation_));
}

bool PadicNumber::operator==(const PadicNumber& other) const {
  return prime_ == other.prime_ && kind_ == other.kind_ && valuation_ == other.valuation_ &&
         digits_ == other.digits_ && unit_ == other.unit_;
}

std::string PadicNumber::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kExactZero: return "0";
    case Kind::kApproxZero: os << "0 (mod " << prime_ << "^" << valuation_ << ")"; break;
    case Kind::kNonzero:
      os << prime_ << "^" << valuation_ << " * " << unit_.get_str() << " (mod " << prime_ << "^"
         << valuation_ + digits_ << ")";
      break;
  }
  return os.str();
}

std::vector<int> PadicNumber::unit_digits() const {
  std::vector<int> out;
  if (kind_ != Kind::kNonzero) return out;
  out.reserve(static_cast<std::size_t>(digits_));
  mpz_class u = unit_;
  mpz_class p = static_cast<unsigned long>(prime_);
  mpz_class r;
  for (int i = 0; i < digits_; ++i) {
    mpz_fdiv_qr(u.get_mpz_t(), r.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
    out.push_back(static_cast<int>(r.get_si()));
  }
  return out;
}

}  // namespace padic
