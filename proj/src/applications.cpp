#include "padic/applications.hpp"

#include <algorithm>

#include "padic/sampling.hpp"
#include "padic/special_fn.hpp"

namespace padic {

namespace {

void require_odd_prime(Prime p, const std::string& what) {
  if (p < 3) throw DomainError(what + " needs p >= 3");
}

void require_ep(const PadicNumber& x, const std::string& name) {
  if (!in_Ep(x)) throw DomainError(name + " = " + x.to_string() + " is not in E_p");
}

void self_check(const ContractiveMap& f, const SelfCheck& check) {
  if (check.samples <= 0) return;
  ContractionReport r = verify_contraction(f, check.samples, check.seed);
  if (r.closure_failures > 0) {
    throw DomainError(f.label + ": image left " + f.domain.to_string() + " on " +
                      std::to_string(r.closure_failures) + " samples");
  }
  if (!r.pass) {
    throw DomainError(f.label + ": observed contraction gap " + r.min_observed_gap.to_string() +
                      " below declared " + f.contraction_exponent.to_string());
  }
}

PadicNumber eval_monomials(const std::vector<Monomial>& terms, std::span<const AlgebraElement> xs,
                           const PadicNumber& constant) {
  PadicNumber sum = constant;
  for (const auto& t : terms) {
    PadicNumber v = t.coefficient;
    for (std::size_t i = 0; i < t.exponents.size(); ++i) {
      if (t.exponents[i] > 0) v = v * xs[i].as_scalar().pow(static_cast<unsigned>(t.exponents[i]));
    }
    sum = sum + v;
  }
  return sum;
}

void validate_monomials(const std::vector<Monomial>& terms, int arity, const std::string& name) {
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != arity) {
      throw DomainError(name + ": monomial has " + std::to_string(t.exponents.size()) +
                        " exponents for arity " + std::to_string(arity));
    }
    int degree = 0;
    for (int e : t.exponents) {
      if (e < 0) throw DomainError(name + ": negative exponent");
      degree += e;
    }
    if (degree < 1) throw DomainError(name + ": constant monomial; use the constant term");
    if (t.coefficient.valuation_lower_bound() < Valuation(1)) {
      throw DomainError(name + ": coefficient " + t.coefficient.to_string() +
                        " is not in p Z_p");
    }
  }
}

}  // namespace

MobiusParams MobiusParams::from_integers(const std::array<std::int64_t, 6>& v, Prime prime,
                                         int digits) {
  auto n = [&](std::int64_t x) { return PadicNumber::from_integer(x, prime, digits); };
  return {n(v[0]), n(v[1]), n(v[2]), n(v[3]), n(v[4]), n(v[5])};
}

ContractiveMap make_mobius(const MobiusParams& params, const SelfCheck& check) {
  const Prime p = params.a.prime();
  require_odd_prime(p, "mobius");
  require_ep(params.a, "a");
  require_ep(params.b, "b");
  require_ep(params.c, "c");
  require_ep(params.a1, "a1");
  require_ep(params.b1, "b1");
  require_ep(params.c1, "c1");

  ContractiveMap f;
  f.label = "mobius";
  f.arity = 2;
  f.shape = Shape{};
  f.domain = DomainSpec::ep();
  f.prime = p;
  f.digits = std::min({params.a.digits(), params.b.digits(), params.c.digits(), params.a1.digits(),
                       params.b1.digits(), params.c1.digits()});
  f.contraction_exponent = 1;
  f.eval = [params](std::span<const AlgebraElement> xs) {
    const PadicNumber& x = xs[0].as_scalar();
    const PadicNumber& y = xs[1].as_scalar();
    PadicNumber xy = x * y;
    PadicNumber s = x + y;
    PadicNumber num = params.a * xy + params.b * s + params.c;
    PadicNumber den = params.a1 * xy + params.b1 * s + params.c1;
    return AlgebraElement::scalar(num / den);
  };
  self_check(f, check);
  return f;
}

RationalPolyParams RationalPolyParams::random(Prime prime, int arity, int max_degree,
                                              const PadicNumber& c, const PadicNumber& c1,
                                              std::uint64_t seed, int digits) {
  if (arity < 1 || max_degree < 1) throw DomainError("ratpoly needs arity >= 1 and degree >= 1");
  DomainSampler sampler(prime, digits, seed);
  RationalPolyParams params{arity, {}, {}, c, c1};
  // Enumerate exponent vectors in lexicographic order, keeping degrees 1..max_degree.
  std::vector<int> e(static_cast<std::size_t>(arity), 0);
  while (true) {
    std::size_t i = 0;
    while (i < e.size() && e[i] == max_degree) e[i++] = 0;
    if (i == e.size()) break;
    ++e[i];
    int degree = 0;
    for (int x : e) degree += x;
    if (degree > max_degree) continue;
    params.numerator.push_back({e, sampler.with_valuation_at_least(1)});
    params.denominator.push_back({e, sampler.with_valuation_at_least(1)});
  }
  return params;
}

ContractiveMap make_rational_poly(const RationalPolyParams& params, const SelfCheck& check) {
  const Prime p = params.c.prime();
  require_odd_prime(p, "ratpoly");
  if (params.arity < 1) throw DomainError("ratpoly: arity must be >= 1");
  validate_monomials(params.numerator, params.arity, "ratpoly numerator");
  validate_monomials(params.denominator, params.arity, "ratpoly denominator");
  if (params.c.valuation() != Valuation(0)) throw DomainError("ratpoly: |C| must be 1");
  if (params.c1.valuation() != Valuation(0)) throw DomainError("ratpoly: |C1| must be 1");

  ContractiveMap f;
  f.label = "ratpoly";
  f.arity = params.arity;
  f.shape = Shape{};
  f.domain = DomainSpec::unit_sphere();
  f.prime = p;
  f.digits = std::min(params.c.digits(), params.c1.digits());
  f.contraction_exponent = 1;
  f.eval = [params](std::span<const AlgebraElement> xs) {
    PadicNumber num = eval_monomials(params.numerator, xs, params.c);
    PadicNumber den = eval_monomials(params.denominator, xs, params.c1);
    return AlgebraElement::scalar(num / den);
  };
  self_check(f, check);
  return f;
}

LinearFractionalParams LinearFractionalParams::random(Prime prime, int dimension,
                                                      std::uint64_t seed, int digits) {
  DomainSampler sampler(prime, digits, seed);
  LinearFractionalParams params;
  params.dimension = dimension;
  const auto m = static_cast<std::size_t>(dimension);
  params.a.assign(m, {});
  params.b.assign(m, {});
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) params.a[k].push_back(sampler.in_ep());
    for (std::size_t j = 0; j < m; ++j) params.b[k].push_back(sampler.in_ep());
    params.a0.push_back(sampler.in_ep());
    params.b0.push_back(sampler.in_ep());
  }
  return params;
}

LinearFractionalParams LinearFractionalParams::filled(int dimension, const PadicNumber& value) {
  const auto m = static_cast<std::size_t>(dimension);
  LinearFractionalParams params;
  params.dimension = dimension;
  params.a.assign(m, std::vector<PadicNumber>(m, value));
  params.b.assign(m, std::vector<PadicNumber>(m, value));
  params.a0.assign(m, value);
  params.b0.assign(m, value);
  return params;
}

ContractiveMap make_linear_fractional(const LinearFractionalParams& params,
                                      const SelfCheck& check) {
  const int m = params.dimension;
  if (m < 1) throw DomainError("linfrac: dimension must be >= 1");
  const auto mm = static_cast<std::size_t>(m);
  if (params.a.size() != mm || params.b.size() != mm || params.a0.size() != mm ||
      params.b0.size() != mm) {
    throw DomainError("linfrac: coefficient arrays must have " + std::to_string(m) + " rows");
  }
  const Prime p = params.a0.front().prime();
  require_odd_prime(p, "linfrac");
  if ((m + 1) % p == 0) {
    throw DomainError("linfrac: p = " + std::to_string(p) + " divides m + 1 = " +
                      std::to_string(m + 1));
  }
  int digits = kDefaultDigits;
  for (std::size_t k = 0; k < mm; ++k) {
    if (params.a[k].size() != mm || params.b[k].size() != mm) {
      throw DomainError("linfrac: row " + std::to_string(k) + " must have " + std::to_string(m) +
                        " entries");
    }
    for (std::size_t j = 0; j < mm; ++j) {
      require_ep(params.a[k][j], "a[" + std::to_string(k) + "][" + std::to_string(j) + "]");
      require_ep(params.b[k][j], "b[" + std::to_string(k) + "][" + std::to_string(j) + "]");
      digits = std::min({digits, params.a[k][j].digits(), params.b[k][j].digits()});
    }
    require_ep(params.a0[k], "a0[" + std::to_string(k) + "]");
    require_ep(params.b0[k], "b0[" + std::to_string(k) + "]");
    digits = std::min({digits, params.a0[k].digits(), params.b0[k].digits()});
  }

  ContractiveMap f;
  f.label = "linfrac";
  f.arity = 1;
  f.shape = Shape{AlgebraKind::kVector, mm};
  f.domain = DomainSpec::ep();
  f.prime = p;
  f.digits = digits;
  f.contraction_exponent = 1;
  f.eval = [params, mm](std::span<const AlgebraElement> xs) {
    const AlgebraElement& x = xs[0];
    std::vector<PadicNumber> out;
    out.reserve(mm);
    for (std::size_t k = 0; k < mm; ++k) {
      PadicNumber num = params.a0[k];
      PadicNumber den = params.b0[k];
      for (std::size_t j = 0; j < mm; ++j) {
        num = num + params.a[k][j] * x[j];
        den = den + params.b[k][j] * x[j];
      }
      out.push_back(num / den);
    }
    return AlgebraElement::vector(std::move(out));
  };
  self_check(f, check);
  return f;
}

SeqFamily km2009_family(Prime prime) {
  SeqFamily fam;
  fam.label = "km2009";
  fam.trusted = true;
  fam.eval = [prime](const AlgebraElement& x, std::size_t) {
    PadicNumber sum = PadicNumber::zero(prime);
    for (const auto& c : x.components()) sum = sum + c;
    PadicNumber p = PadicNumber::from_integer(prime, prime, kDefaultDigits);
    return p * sum + PadicNumber::from_integer(1, prime, kDefaultDigits);
  };
  return fam;
}

SeqMapParams km2009_params(const PadicNumber& theta, std::size_t length,
                           const AlgebraElement& lambda, int shifts) {
  require_ep(theta, "theta");
  const Prime p = theta.prime();
  PadicNumber one = PadicNumber::from_integer(1, p, theta.digits());
  PadicNumber b = theta - one;
  PadicNumber a = PadicNumber::from_integer(p, p, theta.digits()) * b;
  return {length, lambda, a, b, km2009_family(p), shifts};
}

namespace {

void check_family(const SeqMapParams& params, Prime p, int digits, const SelfCheck& check) {
  if (params.family.trusted || check.samples <= 0) return;
  DomainSampler sampler(p, digits, check.seed);
  const Shape shape{AlgebraKind::kSeq, params.length};
  const DomainSpec ball = DomainSpec::unit_ball();
  for (int s = 0; s < check.samples; ++s) {
    AlgebraElement x = sampler.element(ball, shape);
    AlgebraElement y = s % 2 == 0 ? sampler.element(ball, shape) : sampler.perturb(x);
    Valuation d = separation(x, y);
    for (std::size_t k = 0; k < params.length; ++k) {
      PadicNumber fx = params.family.eval(x, k);
      PadicNumber fy = params.family.eval(y, k);
      if (fx.valuation() != Valuation(0)) {
        throw DomainError(params.family.label + ": |f_k(x)| != 1 at k = " + std::to_string(k));
      }
      Valuation g = fx == fy ? Valuation::infinity() : (fx - fy).valuation_lower_bound();
      if (g < d) {
        throw DomainError(params.family.label + ": f_k is not 1-Lipschitz at k = " +
                          std::to_string(k));
      }
    }
  }
}

ContractiveMap seq_map_unchecked(const SeqMapParams& params, const SelfCheck& check) {
  const Prime p = params.a.prime();
  require_odd_prime(p, "seqmap");
  if (params.length < 1) throw DomainError("seqmap: truncation length must be >= 1");
  if (!params.family.eval) throw DomainError("seqmap: missing f_k family");
  if (params.lambda.kind() != AlgebraKind::kSeq || params.lambda.size() != params.length) {
    throw DomainError("seqmap: lambda must be a sequence of length " +
                      std::to_string(params.length));
  }
  if (params.lambda.valuation_lower_bound() < Valuation(0)) {
    throw DomainError("seqmap: ||lambda|| must be <= 1");
  }
  const Valuation va = params.a.valuation_lower_bound();
  const Valuation vb = params.b.valuation_lower_bound();
  if (va < Valuation(1)) throw DomainError("seqmap: |a| must be < 1");
  if (vb < Valuation(1)) throw DomainError("seqmap: |b| must be < 1");
  // Sampling precision: the finest absolute precision among the parameters.
  Valuation prec = std::min(params.a.absolute_precision(), params.b.absolute_precision());
  for (const auto& l : params.lambda.components()) prec = std::min(prec, l.absolute_precision());
  const int digits = prec.is_finite() ? static_cast<int>(prec.value()) : kDefaultDigits;
  check_family(params, p, digits, check);

  ContractiveMap f;
  f.label = "seqmap-" + params.family.label;
  f.arity = 1;
  f.shape = Shape{AlgebraKind::kSeq, params.length};
  f.domain = DomainSpec::unit_ball();
  f.prime = p;
  f.digits = digits;
  f.contraction_exponent = std::min(va, vb);
  f.eval = [params](std::span<const AlgebraElement> xs) {
    const AlgebraElement& x = xs[0];
    std::vector<PadicNumber> out;
    out.reserve(params.length);
    for (std::size_t k = 0; k < params.length; ++k) {
      if (params.lambda[k].is_exact_zero()) {
        out.push_back(params.lambda[k]);
        continue;
      }
      PadicNumber fk = params.family.eval(x, k);
      out.push_back(params.lambda[k] * ((params.a * x[k] + fk) / (params.b + fk)));
    }
    return AlgebraElement::seq(std::move(out));
  };
  return f;
}

}  // namespace

ContractiveMap make_seq_map(const SeqMapParams& params, const SelfCheck& check) {
  ContractiveMap f = seq_map_unchecked(params, check);
  self_check(f, check);
  return f;
}

AlgebraElement shift(const AlgebraElement& x) {
  if (x.kind() != AlgebraKind::kSeq) throw DomainError("shift acts on sequences only");
  std::vector<PadicNumber> out(x.components().begin() + 1, x.components().end());
  out.push_back(PadicNumber::zero(x.prime()));
  return AlgebraElement::seq(std::move(out));
}

ContractiveMap shifted_product_map(const SeqMapParams& params, const SelfCheck& check) {
  if (params.shifts < 1) throw DomainError("shiftprod: number of shifts must be >= 1");
  ContractiveMap inner = seq_map_unchecked(params, check);
  ContractiveMap f = inner;
  f.label = "shiftprod-" + params.family.label;
  const int n = params.shifts;
  f.eval = [inner, n](std::span<const AlgebraElement> xs) {
    AlgebraElement s = shift(inner(xs));
    AlgebraElement prod = s;
    for (int j = 2; j <= n; ++j) {
      s = shift(s);
      prod = prod * s;
    }
    return prod;
  };
  self_check(f, check);
  return f;
}

RecurrenceSpec triple_product_recurrence(const ContractiveMap& f) {
  if (f.arity < 2) throw DomainError("triple product recurrence needs arity m >= 2");
  Term t{{Factor{f, 0}, Factor{f, 1}, Factor{f, f.arity}}};
  return RecurrenceSpec({t}, OffsetPolicy::kRelaxed);
}

}  // namespace padic
