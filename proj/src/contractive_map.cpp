#include "padic/contractive_map.hpp"

#include <algorithm>

#include "padic/sampling.hpp"

namespace padic {

AlgebraElement ContractiveMap::operator()(std::span<const AlgebraElement> args) const {
  if (static_cast<int>(args.size()) != arity) {
    throw DomainError(label + ": expected " + std::to_string(arity) + " arguments, got " +
                      std::to_string(args.size()));
  }
  return eval(args);
}

ContractiveMap constant_map(const AlgebraElement& c, int arity, const DomainSpec& domain,
                            int digits) {
  ContractiveMap f;
  f.label = "constant";
  f.arity = arity;
  f.shape = c.shape();
  f.domain = domain;
  f.prime = c.prime();
  f.digits = digits;
  f.contraction_exponent = Valuation::infinity();
  f.eval = [c](std::span<const AlgebraElement>) { return c; };
  f.depends_on.assign(static_cast<std::size_t>(arity), false);
  return f;
}

ContractiveMap identity_map(const Shape& shape, const DomainSpec& domain, Prime prime,
                            Valuation declared_exponent, int digits) {
  ContractiveMap f;
  f.label = "identity";
  f.arity = 1;
  f.shape = shape;
  f.domain = domain;
  f.prime = prime;
  f.digits = digits;
  f.contraction_exponent = declared_exponent;
  f.eval = [](std::span<const AlgebraElement> xs) { return xs[0]; };
  return f;
}

ContractiveMap diagonal(const ContractiveMap& f) {
  if (f.arity == 1) return f;
  ContractiveMap g = f;
  g.label = f.label + "-diag";
  g.arity = 1;
  g.depends_on.clear();
  if (!f.depends_on.empty() &&
      std::none_of(f.depends_on.begin(), f.depends_on.end(), [](bool b) { return b; })) {
    g.depends_on = {false};
  }
  g.eval = [f](std::span<const AlgebraElement> xs) {
    std::vector<AlgebraElement> args(static_cast<std::size_t>(f.arity), xs[0]);
    return f(args);
  };
  return g;
}

ContractionReport verify_contraction(const ContractiveMap& f, int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("verify_contraction needs at least one sample");
  DomainSampler sampler(f.prime, f.digits, seed);
  ContractionReport report;
  report.samples = samples;
  for (int s = 0; s < samples; ++s) {
    std::vector<AlgebraElement> x, y;
    x.reserve(static_cast<std::size_t>(f.arity));
    y.reserve(static_cast<std::size_t>(f.arity));
    for (int i = 0; i < f.arity; ++i) {
      x.push_back(sampler.element(f.domain, f.shape));
      // Half the pairs are independent draws, half are nearby points so that
      // the bound is probed at small distances too.
      y.push_back(s % 2 == 0 ? sampler.element(f.domain, f.shape) : sampler.perturb(x.back()));
    }
    Valuation input_gap = Valuation::infinity();
    for (int i = 0; i < f.arity; ++i) {
      if (f.depends(i)) input_gap = std::min(input_gap, separation(x[static_cast<std::size_t>(i)],
                                                                  y[static_cast<std::size_t>(i)]));
    }
    AlgebraElement fx = f(x);
    AlgebraElement fy = f(y);
    if (!f.domain.contains(fx) || !f.domain.contains(fy)) ++report.closure_failures;

    Valuation output_gap = separation(fx, fy);
    Valuation gap;
    if (output_gap.is_infinite()) {
      gap = Valuation::infinity();
    } else if (input_gap.is_infinite()) {
      // Identical relevant inputs but different outputs: no contraction bound can hold.
      gap = Valuation(0) - 1;
    } else {
      gap = Valuation(output_gap.value() - input_gap.value());
    }
    report.min_observed_gap = std::min(report.min_observed_gap, gap);
  }
  report.pass = report.closure_failures == 0 && report.min_observed_gap >= f.contraction_exponent;
  return report;
}

}  // namespace padic
