#pragma once

#include <span>
#include <string>
#include <vector>

#include "padic/padic_number.hpp"

namespace padic {

/// ||x|| = p^(-exponent); an infinite exponent is the norm 0.
///
/// Norms in these algebras are always powers of p, so they are kept as exact
/// exponents. Ordering follows the real value: a larger exponent is smaller.
struct Norm {
  Prime prime = 2;
  Valuation exponent = Valuation::infinity();

  bool is_zero() const { return exponent.is_infinite(); }
  bool operator==(const Norm& o) const { return exponent == o.exponent; }
  bool operator<(const Norm& o) const { return exponent > o.exponent; }
  bool operator<=(const Norm& o) const { return exponent >= o.exponent; }
  /// "0" or "p^-e".
  std::string to_string() const;
};

/// Which of the three concrete algebras an element lives in.
enum class AlgebraKind {
  kScalar,  // Q_p
  kVector,  // Q_p^m with the sup norm
  kSeq,     // c_0 truncated after T terms; the tail is exactly zero
};

/// Shape of an algebra element: kind plus component count (1 for scalars).
struct Shape {
  AlgebraKind kind = AlgebraKind::kScalar;
  std::size_t size = 1;

  bool operator==(const Shape&) const = default;
  std::string to_string() const;
};

/// Value in Q_p, Q_p^m or truncated c_0 with pointwise ring operations.
class AlgebraElement {
 public:
  /// Exact scalar zero over p = 2; a placeholder until assigned.
  AlgebraElement() : AlgebraElement(Shape{}, {PadicNumber::zero(2)}) {}
  static AlgebraElement scalar(PadicNumber x);
  static AlgebraElement vector(std::vector<PadicNumber> xs);
  static AlgebraElement seq(std::vector<PadicNumber> xs);
  static AlgebraElement of_shape(const Shape& shape, std::vector<PadicNumber> xs);
  /// Every component equal to `x`.
  static AlgebraElement filled(const Shape& shape, const PadicNumber& x);

  AlgebraKind kind() const { return shape_.kind; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return components_.size(); }
  Prime prime() const { return components_.front().prime(); }

  const PadicNumber& operator[](std::size_t i) const { return components_[i]; }
  std::span<const PadicNumber> components() const { return components_; }
  /// The single component of a scalar.
  const PadicNumber& as_scalar() const;

  /// Sup of component norms, exact.
  Norm norm() const;
  /// min_i ord_p(x_i); the valuation matching norm().
  Valuation valuation() const;
  /// min_i of the component lower bounds; what is provably known about ||x||.
  Valuation valuation_lower_bound() const;
  /// min over components of absolute precision.
  Valuation absolute_precision() const;

  AlgebraElement operator-() const;
  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  /// Pointwise product.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  AlgebraElement pow(unsigned n) const;

  bool operator==(const AlgebraElement& o) const;

  std::string to_string() const;

 private:
  AlgebraElement(Shape shape, std::vector<PadicNumber> xs);
  void require_compatible(const AlgebraElement& o) const;

  Shape shape_;
  std::vector<PadicNumber> components_;
};

/// Ultrametric distance of a and b as a lower bound on ord_p(a - b);
/// infinity when the two are bit-identical.
Valuation separation(const AlgebraElement& a, const AlgebraElement& b);

/// Subsets C of the unit ball used as iteration domains.
enum class DomainKind {
  kUnitBall,    // ||x|| <= 1
  kUnitSphere,  // ||x|| = 1
  kEp,          // componentwise |x|_p = 1 and |x - 1|_p <= 1/p
  kProduct,     // component i drawn from factors[i]
};

struct DomainSpec {
  DomainKind kind = DomainKind::kUnitBall;
  /// Only for kProduct; each entry is one of the scalar kinds.
  std::vector<DomainKind> factors;

  static DomainSpec unit_ball() { return {DomainKind::kUnitBall, {}}; }
  static DomainSpec unit_sphere() { return {DomainKind::kUnitSphere, {}}; }
  static DomainSpec ep() { return {DomainKind::kEp, {}}; }
  static DomainSpec product(std::vector<DomainKind> factors) {
    return {DomainKind::kProduct, std::move(factors)};
  }

  bool operator==(const DomainSpec&) const = default;

  /// Exact membership test; PrecisionError when the tracked digits cannot decide.
  bool contains(const AlgebraElement& x) const;
  std::string to_string() const;
};

bool in_scalar_domain(DomainKind kind, const PadicNumber& x);

/// Checks ||prod a_i - prod b_i|| <= max_i ||a_i - b_i|| for unit-ball entries.
/// Always true for valid input; used as an oracle on the ring operations.
bool product_difference_bound(std::span<const AlgebraElement> a,
                              std::span<const AlgebraElement> b);

/// Stopping criterion on a trace: ord_p(x_last - x_prev) >= target_valuation.
/// A difference that vanished at the tracked precision counts only as far as
/// that precision reaches.
bool is_cauchy_gap(std::span<const AlgebraElement> trace, Valuation target_valuation);

std::string to_string(DomainKind kind);

}  // namespace padic
