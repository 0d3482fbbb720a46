#include "padic/recurrence.hpp"

#include <optional>
#include <algorithm>
#include <deque>

namespace padic {

namespace {

void check_offsets(const Term& term, int m, OffsetPolicy policy, std::size_t k) {
  const auto& fs = term.factors;
  const std::string where = "summand " + std::to_string(k + 1);
  if (fs.front().offset != 0) throw DomainError(where + ": first offset must be 0");
  const int lo = policy == OffsetPolicy::kStrict ? 2 : policy == OffsetPolicy::kRelaxed ? 1 : 0;
  for (std::size_t i = 1; i < fs.size(); ++i) {
    const int d = fs[i].offset - fs[i - 1].offset;
    const bool upper_ok = policy == OffsetPolicy::kStacked || d <= m - 1;
    if (d < lo || !upper_ok) {
      throw DomainError(where + ": offset gap " + std::to_string(d) + " between factors " +
                        std::to_string(i) + " and " + std::to_string(i + 1) +
                        " violates the spacing rule for window width " + std::to_string(m));
    }
  }
}

AlgebraElement evaluate_terms(const std::vector<Term>& terms,
                              std::span<const AlgebraElement> window) {
  std::optional<AlgebraElement> sum;
  for (const auto& term : terms) {
    std::optional<AlgebraElement> prod;
    for (const auto& factor : term.factors) {
      auto args = window.subspan(static_cast<std::size_t>(factor.offset),
                                 static_cast<std::size_t>(factor.map.arity));
      AlgebraElement v = factor.map(args);
      prod = prod ? *prod * v : v;
    }
    sum = sum ? *sum + *prod : *prod;
  }
  return *sum;
}

void require_in_domain(const DomainSpec& domain, const AlgebraElement& x, std::int64_t index) {
  if (!domain.contains(x)) {
    throw DomainError("x_" + std::to_string(index) + " = " + x.to_string() + " outside " +
                      domain.to_string());
  }
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

RecurrenceSpec::RecurrenceSpec(std::vector<Term> terms, OffsetPolicy policy)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("recurrence needs at least one summand");
  const std::size_t n = terms_.front().factors.size();
  if (n == 0) throw DomainError("summand 1 has no factors");
  const ContractiveMap& first = terms_.front().factors.front().map;
  arity_ = first.arity;
  domain_ = first.domain;
  shape_ = first.shape;
  prime_ = first.prime;
  int last = 0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& fs = terms_[k].factors;
    if (fs.size() != n) {
      throw DomainError("summand " + std::to_string(k + 1) + " has " + std::to_string(fs.size()) +
                        " factors, expected " + std::to_string(n));
    }
    for (const auto& f : fs) {
      if (f.map.arity != arity_) throw DomainError(f.map.label + ": all maps need one arity");
      if (!(f.map.domain == domain_)) throw DomainError(f.map.label + ": all maps need one domain");
      if (!(f.map.shape == shape_)) throw DomainError(f.map.label + ": all maps need one shape");
      if (f.map.prime != prime_) throw DomainError(f.map.label + ": all maps need one prime");
      if (f.map.contraction_exponent < Valuation(1)) {
        throw DomainError(f.map.label + ": contraction exponent must be >= 1");
      }
      exponent_ = std::min(exponent_, f.map.contraction_exponent);
    }
    check_offsets(terms_[k], arity_, policy, k);
    last = std::max(last, fs.back().offset);
  }
  window_length_ = last + arity_;
}

AlgebraElement RecurrenceSpec::fixed_point_rhs(const AlgebraElement& x) const {
  std::vector<AlgebraElement> window(static_cast<std::size_t>(window_length_), x);
  return evaluate_terms(terms_, window);
}

AlgebraElement step(const RecurrenceSpec& spec, std::span<const AlgebraElement> window,
                    std::int64_t n) {
  const auto l = static_cast<std::size_t>(spec.window_length());
  if (window.size() < l) {
    throw DomainError("window holds " + std::to_string(window.size()) + " values, need " +
                      std::to_string(l));
  }
  window = window.first(l);
  for (std::size_t i = 0; i < l; ++i) {
    require_in_domain(spec.domain(), window[i], n + static_cast<std::int64_t>(i));
  }
  return evaluate_terms(spec.terms(), window);
}

Valuation rate_bound(Valuation k, int window_length, std::int64_t n) {
  return ceil_div(n, window_length) * k;
}

std::int64_t iteration_bound(Valuation k, int window_length, Valuation target) {
  if (k.is_infinite()) return window_length;
  const std::int64_t t = std::max<std::int64_t>(target.value(), 0);
  return window_length * ceil_div(t, k.value()) + window_length;
}

bool rate_certificate_holds(const ConvergenceCertificate& cert) {
  return std::all_of(cert.limit_distance.begin(), cert.limit_distance.end(), [&](const TracePoint& t) {
    Valuation bound = rate_bound(cert.contraction_exponent, cert.window_length, t.n);
    return t.valuation >= std::min(bound, cert.target);
  });
}

namespace {

void check_target(const SolveOptions& options) {
  if (options.target.is_infinite() || options.target < Valuation(1)) {
    throw DomainError("target valuation must be a positive integer");
  }
  if (options.max_iter < 1) throw DomainError("max_iter must be positive");
}

void require_precision(const AlgebraElement& x, Valuation target, std::int64_t index) {
  if (x.absolute_precision() < target) {
    throw PrecisionError("x_" + std::to_string(index) + " is known only mod p^" +
                         x.absolute_precision().to_string() + ", below the target " +
                         target.to_string());
  }
}

}  // namespace

ConvergenceCertificate solve_recurrence(const RecurrenceSpec& spec,
                                        std::span<const AlgebraElement> initial,
                                        const SolveOptions& options) {
  check_target(options);
  const int l = spec.window_length();
  if (initial.size() < static_cast<std::size_t>(l)) {
    throw DomainError("recurrence needs " + std::to_string(l) + " initial values, got " +
                      std::to_string(initial.size()));
  }
  std::deque<AlgebraElement> window(initial.begin(), initial.begin() + l);
  for (int i = 0; i < l; ++i) {
    require_in_domain(spec.domain(), window[static_cast<std::size_t>(i)], i + 1);
    if (!(window[static_cast<std::size_t>(i)].shape() == spec.shape())) {
      throw DomainError("x_" + std::to_string(i + 1) + " has shape " +
                        window[static_cast<std::size_t>(i)].shape().to_string() + ", maps expect " +
                        spec.shape().to_string());
    }
  }

  ConvergenceCertificate cert;
  cert.target = options.target;
  cert.window_length = l;
  cert.contraction_exponent = spec.contraction_exponent();

  std::vector<AlgebraElement> iterates;
  int consecutive = 0;
  for (std::int64_t n = 1;; ++n) {
    if (n > options.max_iter) {
      throw IterationLimitError("no convergence to valuation " + options.target.to_string() +
                                " within " + std::to_string(options.max_iter) + " iterations");
    }
    std::vector<AlgebraElement> w(window.begin(), window.end());
    AlgebraElement next = evaluate_terms(spec.terms(), w);
    require_in_domain(spec.domain(), next, n + l);
    require_precision(next, options.target, n + l);
    Valuation gap = separation(next, window.back());
    cert.trace.push_back({n, gap});
    iterates.push_back(next);
    window.pop_front();
    window.push_back(std::move(next));
    consecutive = gap >= options.target ? consecutive + 1 : 0;
    if (consecutive >= l) {
      cert.iterations = n;
      break;
    }
  }

  cert.limit = window.back();
  cert.residual_valuation = separation(cert.limit, spec.fixed_point_rhs(cert.limit));
  cert.guaranteed_valuation = rate_bound(cert.contraction_exponent, l, cert.iterations);
  for (std::size_t i = 0; i < iterates.size(); ++i) {
    cert.limit_distance.push_back(
        {static_cast<std::int64_t>(i) + 1, separation(iterates[i], cert.limit)});
  }
  if (cert.residual_valuation < options.target) {
    throw PrecisionError("fixed-point residual " + cert.residual_valuation.to_string() +
                         " below target " + options.target.to_string());
  }
  return cert;
}

ConvergenceCertificate solve_power_fixed_point(const ContractiveMap& f, unsigned power,
                                               const SolveOptions& options,
                                               std::span<const AlgebraElement> initial) {
  if (power < 1) throw DomainError("power must be >= 1");
  Term term;
  for (unsigned i = 0; i < power; ++i) term.factors.push_back({f, 0});
  RecurrenceSpec spec({term}, OffsetPolicy::kStacked);
  if (!initial.empty()) return solve_recurrence(spec, initial, options);
  PadicNumber one = PadicNumber::from_unit(f.prime, 0, 1, f.digits);
  std::vector<AlgebraElement> start(static_cast<std::size_t>(spec.window_length()),
                                    AlgebraElement::filled(f.shape, one));
  return solve_recurrence(spec, start, options);
}

void CoupledSpec::validate() const {
  if (x_terms.empty() || y_terms.empty() || z_terms.empty()) {
    throw DomainError("coupled system needs at least one pair per equation");
  }
  const ContractiveMap& ref = any_map();
  for (const auto* family : {&x_terms, &y_terms, &z_terms}) {
    for (const auto& pair : *family) {
      for (const auto* m : {&pair.first, &pair.second}) {
        if (m->arity != 2) throw DomainError(m->label + ": coupled maps must have arity 2");
        if (!(m->domain == ref.domain) || !(m->shape == ref.shape) || m->prime != ref.prime) {
          throw DomainError(m->label + ": coupled maps need one domain, shape and prime");
        }
        if (m->contraction_exponent < Valuation(1)) {
          throw DomainError(m->label + ": contraction exponent must be >= 1");
        }
      }
    }
  }
}

Valuation CoupledSpec::contraction_exponent() const {
  Valuation k = Valuation::infinity();
  for (const auto* family : {&x_terms, &y_terms, &z_terms}) {
    for (const auto& pair : *family) {
      k = std::min({k, pair.first.contraction_exponent, pair.second.contraction_exponent});
    }
  }
  return k;
}

AlgebraElement coupled_sum(std::span<const MapPair> terms, const AlgebraElement& u,
                           const AlgebraElement& v, const AlgebraElement& w) {
  std::optional<AlgebraElement> sum;
  for (const auto& pair : terms) {
    AlgebraElement t = pair.first({u, v}) * pair.second({v, w});
    sum = sum ? *sum + t : t;
  }
  return *sum;
}

CoupledCertificate solve_coupled(const CoupledSpec& spec,
                                 const std::array<AlgebraElement, 3>& initial,
                                 const SolveOptions& options) {
  check_target(options);
  spec.validate();
  const DomainSpec& domain = spec.any_map().domain;
  static constexpr const char* kNames[] = {"x", "y", "z"};
  for (int c = 0; c < 3; ++c) {
    if (!domain.contains(initial[static_cast<std::size_t>(c)])) {
      throw DomainError(std::string(kNames[c]) + "_1 outside " + domain.to_string());
    }
  }

  CoupledCertificate out;
  const Valuation k = spec.contraction_exponent();
  auto [x, y, z] = initial;
  std::array<std::vector<AlgebraElement>, 3> history;
  std::int64_t n = 0;
  for (;;) {
    ++n;
    if (n > options.max_iter) {
      throw IterationLimitError("coupled system did not reach valuation " +
                                options.target.to_string() + " within " +
                                std::to_string(options.max_iter) + " iterations");
    }
    AlgebraElement x1 = coupled_sum(spec.x_terms, x, y, z);
    AlgebraElement y1 = coupled_sum(spec.y_terms, x1, y, z);
    AlgebraElement z1 = coupled_sum(spec.z_terms, x1, y1, z);
    const std::array<const AlgebraElement*, 3> next{&x1, &y1, &z1};
    const std::array<const AlgebraElement*, 3> prev{&x, &y, &z};
    Valuation d = Valuation::infinity();
    for (int c = 0; c < 3; ++c) {
      const auto& v = *next[static_cast<std::size_t>(c)];
      if (!domain.contains(v)) {
        throw DomainError(std::string(kNames[c]) + "_" + std::to_string(n + 1) + " = " +
                          v.to_string() + " outside " + domain.to_string());
      }
      if (v.absolute_precision() < options.target) {
        throw PrecisionError(std::string(kNames[c]) + "_" + std::to_string(n + 1) +
                             " lost precision below the target");
      }
      Valuation gap = separation(v, *prev[static_cast<std::size_t>(c)]);
      out.components[static_cast<std::size_t>(c)].trace.push_back({n, gap});
      history[static_cast<std::size_t>(c)].push_back(v);
      d = std::min(d, gap);
    }
    out.envelope.push_back({n, d});
    x = std::move(x1);
    y = std::move(y1);
    z = std::move(z1);
    if (d >= options.target) break;
  }

  const std::array<const std::vector<MapPair>*, 3> families{&spec.x_terms, &spec.y_terms,
                                                            &spec.z_terms};
  const std::array<AlgebraElement, 3> limit{x, y, z};
  for (std::size_t c = 0; c < 3; ++c) {
    auto& cert = out.components[c];
    cert.iterations = n;
    cert.limit = limit[c];
    cert.target = options.target;
    cert.window_length = 1;
    cert.contraction_exponent = k;
    cert.guaranteed_valuation = rate_bound(k, 1, n);
    cert.residual_valuation = separation(limit[c], coupled_sum(*families[c], x, y, z));
    for (std::size_t i = 0; i < history[c].size(); ++i) {
      cert.limit_distance.push_back(
          {static_cast<std::int64_t>(i) + 1, separation(history[c][i], limit[c])});
    }
    if (cert.residual_valuation < options.target) {
      throw PrecisionError(std::string(kNames[c]) + " equation residual " +
                           cert.residual_valuation.to_string() + " below target");
    }
  }
  return out;
}

}  // namespace padic
