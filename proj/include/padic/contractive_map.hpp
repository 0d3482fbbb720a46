#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "padic/algebra.hpp"

namespace padic {

/// A map f: C^m -> C together with its declared contraction bound
/// ||f(x) - f(y)|| <= p^(-k) max_i ||x_i - y_i||.
///
/// Every argument and the result share `shape`; `domain` is the set C. The
/// exponent is an integer k >= 1, or infinity for maps that ignore their
/// arguments.
struct ContractiveMap {
  using Eval = std::function<AlgebraElement(std::span<const AlgebraElement>)>;

  std::string label;
  int arity = 1;
  Shape shape;
  DomainSpec domain;
  Prime prime = 3;
  int digits = kDefaultDigits;
  Valuation contraction_exponent = 1;
  Eval eval;
  /// Arguments the map actually depends on; empty means all of them.
  std::vector<bool> depends_on;

  AlgebraElement operator()(std::span<const AlgebraElement> args) const;
  AlgebraElement operator()(std::initializer_list<AlgebraElement> args) const {
    return (*this)(std::span<const AlgebraElement>(args.begin(), args.size()));
  }

  bool depends(int i) const { return depends_on.empty() || depends_on[static_cast<std::size_t>(i)]; }
};

/// x -> c on C^arity; contraction exponent infinity.
ContractiveMap constant_map(const AlgebraElement& c, int arity, const DomainSpec& domain,
                            int digits = kDefaultDigits);
/// x -> x (arity 1). Not a contraction; used to exercise the verifier.
ContractiveMap identity_map(const Shape& shape, const DomainSpec& domain, Prime prime,
                            Valuation declared_exponent, int digits = kDefaultDigits);
/// x -> f(x, ..., x), the arity-1 restriction of f to the diagonal.
ContractiveMap diagonal(const ContractiveMap& f);

struct ContractionReport {
  int samples = 0;
  /// min over samples of ord(f(x) - f(y)) - min_i ord(x_i - y_i).
  Valuation min_observed_gap = Valuation::infinity();
  int closure_failures = 0;
  bool pass = false;
};

/// Samples pairs of points of C^m and checks the declared contraction
/// exponent and closure f(C^m) in C. Only arguments in `depends_on` enter
/// the right-hand side.
ContractionReport verify_contraction(const ContractiveMap& f, int samples, std::uint64_t seed);

}  // namespace padic
