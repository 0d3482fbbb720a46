#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "padic/recurrence.hpp"

namespace padic {

/// Sampling check the constructors run before handing out a map.
struct SelfCheck {
  int samples = 64;
  std::uint64_t seed = 0;
};

/// f(x, y) = (a xy + b(x + y) + c) / (a1 xy + b1(x + y) + c1), all parameters in E_p.
struct MobiusParams {
  PadicNumber a, b, c, a1, b1, c1;

  /// Parameters given as integers; each must lie in E_p.
  static MobiusParams from_integers(const std::array<std::int64_t, 6>& v, Prime prime,
                                    int digits = kDefaultDigits);
};

/// Arity 2 on E_p x E_p, contraction exponent 1.
ContractiveMap make_mobius(const MobiusParams& params, const SelfCheck& check = {});

/// coefficient * x_1^e_1 ... x_m^e_m.
struct Monomial {
  std::vector<int> exponents;
  PadicNumber coefficient;
};

/// F(x) = (P(x) + C) / (Q(x) + C1) with P, Q free of constant terms and
/// coefficients in p Z_p; |C| = |C1| = 1.
struct RationalPolyParams {
  int arity = 1;
  std::vector<Monomial> numerator;
  std::vector<Monomial> denominator;
  PadicNumber c;
  PadicNumber c1;

  /// Every multi-index of total degree 1..max_degree, coefficients p * (random unit or zero).
  static RationalPolyParams random(Prime prime, int arity, int max_degree, const PadicNumber& c,
                                   const PadicNumber& c1, std::uint64_t seed,
                                   int digits = kDefaultDigits);
};

/// Arity m on S(0,1)^m, contraction exponent 1.
ContractiveMap make_rational_poly(const RationalPolyParams& params, const SelfCheck& check = {});

/// f(x)_k = (sum_j a[k][j] x_j + a0[k]) / (sum_j b[k][j] x_j + b0[k]) on E_p^m.
struct LinearFractionalParams {
  int dimension = 1;
  std::vector<std::vector<PadicNumber>> a;
  std::vector<std::vector<PadicNumber>> b;
  std::vector<PadicNumber> a0;
  std::vector<PadicNumber> b0;

  /// All entries drawn from E_p.
  static LinearFractionalParams random(Prime prime, int dimension, std::uint64_t seed,
                                       int digits = kDefaultDigits);
  /// All entries equal to `value`.
  static LinearFractionalParams filled(int dimension, const PadicNumber& value);
};

/// Vector-valued, arity 1 on E_p^m, contraction exponent 1. Needs p not dividing m + 1.
ContractiveMap make_linear_fractional(const LinearFractionalParams& params,
                                      const SelfCheck& check = {});

/// Inner family f_k of the sequence map: |f_k(x)| = 1 on the unit ball and
/// |f_k(x) - f_k(y)| <= ||x - y||.
struct SeqFamily {
  std::string label;
  /// f_k(x) for 0-based k.
  std::function<PadicNumber(const AlgebraElement& x, std::size_t k)> eval;
  /// Skip the sampling check of the two hypotheses above.
  bool trusted = false;
};

/// f_k(x) = p * sum_j x_j + 1 over the truncated sequence.
SeqFamily km2009_family(Prime prime);

/// (F(x))_k = lambda_k (a x_k + f_k(x)) / (b + f_k(x)) on the unit ball of truncated c_0.
struct SeqMapParams {
  std::size_t length = 1;
  AlgebraElement lambda;
  PadicNumber a;
  PadicNumber b;
  SeqFamily family;
  /// Number of shifted factors in the product map.
  int shifts = 1;
};

/// km2009 family with a = p(theta - 1), b = theta - 1, theta in E_p.
SeqMapParams km2009_params(const PadicNumber& theta, std::size_t length,
                           const AlgebraElement& lambda, int shifts = 1);

/// Arity 1 on the unit ball of Seq(T); contraction exponent min(ord a, ord b).
ContractiveMap make_seq_map(const SeqMapParams& params, const SelfCheck& check = {});

/// (sigma x)_k = x_{k+1}; the last slot becomes an exact zero.
AlgebraElement shift(const AlgebraElement& x);

/// x -> prod_{j=1..N} sigma^j(F(x)) with N = params.shifts.
ContractiveMap shifted_product_map(const SeqMapParams& params, const SelfCheck& check = {});

/// X_{n+2m} = F(X_n..X_{n+m-1}) F(X_{n+1}..X_{n+m}) F(X_{n+m}..X_{n+2m-1});
/// its fixed point solves X = F(X, ..., X)^3. Needs arity m >= 2.
RecurrenceSpec triple_product_recurrence(const ContractiveMap& f);

}  // namespace padic
