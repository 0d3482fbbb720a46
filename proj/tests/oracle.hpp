#pragma once

// Reference computations that share no code with the library: plain integer
// arithmetic modulo p^k and exact rationals. Used to mint expected values.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Z / p^k Z with p^k small enough that products fit in 64 bits.
struct Ring {
  i64 p;
  int k;
  i64 modulus;

  Ring(i64 prime, int exponent) : p(prime), k(exponent), modulus(ipow(prime, exponent)) {}

  i64 red(i64 a) const {
    a %= modulus;
    return a < 0 ? a + modulus : a;
  }
  i64 add(i64 a, i64 b) const { return red(a + b); }
  i64 mul(i64 a, i64 b) const { return red(red(a) * red(b)); }
  i64 pow(i64 a, int e) const {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  bool is_unit(i64 a) const { return red(a) % p != 0; }
  /// Extended Euclid; throws when a is not a unit.
  i64 inv(i64 a) const {
    i64 r0 = modulus, r1 = red(a), s0 = 0, s1 = 1;
    while (r1 != 0) {
      i64 q = r0 / r1;
      i64 t = r0 - q * r1;
      r0 = r1;
      r1 = t;
      t = s0 - q * s1;
      s0 = s1;
      s1 = t;
    }
    if (r0 != 1) throw std::domain_error("oracle: not a unit");
    return red(s0);
  }
  i64 div(i64 a, i64 b) const { return mul(a, inv(b)); }

  /// Residues x with x = 1 mod p.
  std::vector<i64> ep() const {
    std::vector<i64> out;
    for (i64 x = 1; x < modulus; x += p) out.push_back(x);
    return out;
  }
  std::vector<i64> units() const {
    std::vector<i64> out;
    for (i64 x = 0; x < modulus; ++x)
      if (x % p != 0) out.push_back(x);
    return out;
  }
  std::vector<i64> all() const {
    std::vector<i64> out;
    for (i64 x = 0; x < modulus; ++x) out.push_back(x);
    return out;
  }
};

/// Every candidate x with g(x) = x in the ring.
inline std::vector<i64> scan(const std::vector<i64>& candidates, const std::function<i64(i64)>& g) {
  std::vector<i64> roots;
  for (i64 x : candidates)
    if (g(x) == x) roots.push_back(x);
  return roots;
}

/// Every tuple in candidates^n with g(x) = x componentwise.
template <std::size_t N>
std::vector<std::array<i64, N>> scan_tuples(const std::vector<i64>& candidates,
                                            const std::function<std::array<i64, N>(const std::array<i64, N>&)>& g) {
  std::vector<std::array<i64, N>> roots;
  std::array<std::size_t, N> idx{};
  std::array<i64, N> x{};
  while (true) {
    for (std::size_t i = 0; i < N; ++i) x[i] = candidates[idx[i]];
    if (g(x) == x) roots.push_back(x);
    std::size_t i = 0;
    while (i < N && ++idx[i] == candidates.size()) idx[i++] = 0;
    if (i == N) break;
  }
  return roots;
}

/// (a xy + b(x+y) + c) / (a1 xy + b1(x+y) + c1) in the ring.
inline i64 mobius(const Ring& r, const std::array<i64, 6>& c, i64 x, i64 y) {
  i64 xy = r.mul(x, y), s = r.add(x, y);
  i64 num = r.add(r.add(r.mul(c[0], xy), r.mul(c[1], s)), c[2]);
  i64 den = r.add(r.add(r.mul(c[3], xy), r.mul(c[4], s)), c[5]);
  return r.div(num, den);
}

/// Same map over exact rationals.
inline mpq_class mobius_q(const std::array<long, 6>& c, const mpq_class& x, const mpq_class& y) {
  mpq_class num = c[0] * x * y + c[1] * (x + y) + c[2];
  mpq_class den = c[3] * x * y + c[4] * (x + y) + c[5];
  mpq_class r = num / den;
  r.canonicalize();
  return r;
}

/// Image of a rational with p-free denominator in Z / p^k Z.
inline i64 reduce(const Ring& r, const mpq_class& q) {
  mpz_class m = r.modulus;
  mpz_class num = q.get_num() % m;
  mpz_class den = q.get_den() % m;
  return r.div(num.get_si(), den.get_si());
}

/// ord_p of a nonzero rational.
inline i64 ord(const mpq_class& q, i64 p) {
  i64 v = 0;
  mpz_class n = q.get_num(), d = q.get_den();
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

}  // namespace oracle
