#include "padic/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

std::string Norm::to_string() const {
  if (is_zero()) return "0";
  if (exponent.value() == 0) return "1";
  return std::to_string(prime) + "^" + std::to_string(-exponent.value());
}

std::string Shape::to_string() const {
  switch (kind) {
    case AlgebraKind::kScalar: return "scalar";
    case AlgebraKind::kVector: return "vector[" + std::to_string(size) + "]";
    case AlgebraKind::kSeq: return "seq[" + std::to_string(size) + "]";
  }
  return "?";
}

AlgebraElement::AlgebraElement(Shape shape, std::vector<PadicNumber> xs)
    : shape_(shape), components_(std::move(xs)) {
  if (components_.empty()) throw DomainError("algebra element needs at least one component");
  if (shape_.kind == AlgebraKind::kScalar && components_.size() != 1) {
    throw DomainError("scalar must have exactly one component");
  }
  shape_.size = components_.size();
  const Prime p = components_.front().prime();
  for (const auto& c : components_) {
    if (c.prime() != p) throw DomainError("algebra element mixes primes");
  }
}

AlgebraElement AlgebraElement::scalar(PadicNumber x) {
  return AlgebraElement({AlgebraKind::kScalar, 1}, {std::move(x)});
}

AlgebraElement AlgebraElement::vector(std::vector<PadicNumber> xs) {
  return AlgebraElement({AlgebraKind::kVector, xs.size()}, std::move(xs));
}

AlgebraElement AlgebraElement::seq(std::vector<PadicNumber> xs) {
  return AlgebraElement({AlgebraKind::kSeq, xs.size()}, std::move(xs));
}

AlgebraElement AlgebraElement::of_shape(const Shape& shape, std::vector<PadicNumber> xs) {
  if (xs.size() != shape.size) {
    throw DomainError("expected " + std::to_string(shape.size) + " components, got " +
                      std::to_string(xs.size()));
  }
  return AlgebraElement(shape, std::move(xs));
}

AlgebraElement AlgebraElement::filled(const Shape& shape, const PadicNumber& x) {
  return AlgebraElement(shape, std::vector<PadicNumber>(shape.size, x));
}

const PadicNumber& AlgebraElement::as_scalar() const {
  if (shape_.kind != AlgebraKind::kScalar) throw DomainError("not a scalar: " + shape_.to_string());
  return components_.front();
}

Norm AlgebraElement::norm() const { return Norm{prime(), valuation()}; }

Valuation AlgebraElement::valuation() const {
  Valuation v = Valuation::infinity();
  for (const auto& c : components_) v = std::min(v, c.valuation());
  return v;
}

Valuation AlgebraElement::valuation_lower_bound() const {
  Valuation v = Valuation::infinity();
  for (const auto& c : components_) v = std::min(v, c.valuation_lower_bound());
  return v;
}

Valuation AlgebraElement::absolute_precision() const {
  Valuation v = Valuation::infinity();
  for (const auto& c : components_) v = std::min(v, c.absolute_precision());
  return v;
}

void AlgebraElement::require_compatible(const AlgebraElement& o) const {
  if (!(shape_ == o.shape_)) {
    throw DomainError("shape mismatch: " + shape_.to_string() + " vs " + o.shape_.to_string());
  }
}

AlgebraElement AlgebraElement::operator-() const {
  std::vector<PadicNumber> out;
  out.reserve(size());
  for (const auto& c : components_) out.push_back(-c);
  return AlgebraElement(shape_, std::move(out));
}

namespace {

template <typename Op>
AlgebraElement pointwise(const AlgebraElement& a, const AlgebraElement& b, Op op) {
  std::vector<PadicNumber> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(op(a[i], b[i]));
  return AlgebraElement::of_shape(a.shape(), std::move(out));
}

}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_compatible(b);
  return pointwise(a, b, [](const PadicNumber& x, const PadicNumber& y) { return x + y; });
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_compatible(b);
  return pointwise(a, b, [](const PadicNumber& x, const PadicNumber& y) { return x - y; });
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_compatible(b);
  return pointwise(a, b, [](const PadicNumber& x, const PadicNumber& y) { return x * y; });
}

AlgebraElement AlgebraElement::pow(unsigned n) const {
  std::vector<PadicNumber> out;
  out.reserve(size());
  for (const auto& c : components_) out.push_back(c.pow(n));
  return AlgebraElement(shape_, std::move(out));
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
  return shape_ == o.shape_ && components_ == o.components_;
}

std::string AlgebraElement::to_string() const {
  if (shape_.kind == AlgebraKind::kScalar) return components_.front().to_string();
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) os << ", ";
    os << components_[i].to_string();
  }
  os << "]";
  return os.str();
}

Valuation separation(const AlgebraElement& a, const AlgebraElement& b) {
  if (a == b) return Valuation::infinity();
  return (a - b).valuation_lower_bound();
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kUnitBall: return "unit_ball";
    case DomainKind::kUnitSphere: return "unit_sphere";
    case DomainKind::kEp: return "ep";
    case DomainKind::kProduct: return "product";
  }
  return "?";
}

namespace {

// Decides ord_p(x) >= t, or throws when the stored digits cannot tell.
bool surely_at_least(const PadicNumber& x, std::int64_t t) {
  if (x.valuation_lower_bound() >= Valuation(t)) return true;
  if (!x.is_zero()) return false;
  throw PrecisionError("cannot decide membership: value known only mod p^" +
                       x.absolute_precision().to_string());
}

}  // namespace

bool in_scalar_domain(DomainKind kind, const PadicNumber& x) {
  switch (kind) {
    case DomainKind::kUnitBall: return surely_at_least(x, 0);
    case DomainKind::kUnitSphere: return !surely_at_least(x, 1) && surely_at_least(x, 0);
    case DomainKind::kEp: {
      if (surely_at_least(x, 1) || !surely_at_least(x, 0)) return false;
      PadicNumber one = PadicNumber::from_unit(x.prime(), 0, 1, std::max(x.digits(), 1));
      return surely_at_least(x - one, 1);
    }
    case DomainKind::kProduct: throw DomainError("product domain needs per-component kinds");
  }
  return false;
}

bool DomainSpec::contains(const AlgebraElement& x) const {
  switch (kind) {
    case DomainKind::kUnitBall:
    case DomainKind::kEp:
      return std::all_of(x.components().begin(), x.components().end(),
                         [&](const PadicNumber& c) { return in_scalar_domain(kind, c); });
    case DomainKind::kUnitSphere: {
      // sup norm exactly 1: all components integral, at least one a unit.
      bool any_unit = false;
      for (const auto& c : x.components()) {
        if (!surely_at_least(c, 0)) return false;
        if (!surely_at_least(c, 1)) any_unit = true;
      }
      return any_unit;
    }
    case DomainKind::kProduct: {
      if (factors.size() != x.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!in_scalar_domain(factors[i], x[i])) return false;
      }
      return true;
    }
  }
  return false;
}

std::string DomainSpec::to_string() const {
  if (kind != DomainKind::kProduct) return padic::to_string(kind);
  std::string s = "product(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) s += ",";
    s += padic::to_string(factors[i]);
  }
  return s + ")";
}

bool product_difference_bound(std::span<const AlgebraElement> a,
                              std::span<const AlgebraElement> b) {
  if (a.size() != b.size() || a.empty()) {
    throw DomainError("product_difference_bound needs two nonempty lists of equal length");
  }
  const DomainSpec ball = DomainSpec::unit_ball();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ball.contains(a[i]) || !ball.contains(b[i])) {
      throw DomainError("product_difference_bound entry " + std::to_string(i) +
                        " outside the unit ball");
    }
  }
  AlgebraElement pa = a[0];
  AlgebraElement pb = b[0];
  Valuation rhs = separation(a[0], b[0]);
  for (std::size_t i = 1; i < a.size(); ++i) {
    pa = pa * a[i];
    pb = pb * b[i];
    rhs = std::min(rhs, separation(a[i], b[i]));
  }
  // ||lhs|| <= ||rhs|| in valuations: ord(lhs) >= ord(rhs). Values equal to
  // the working precision are capped so that vanishing differences compare.
  Valuation lhs = separation(pa, pb);
  Valuation cap = std::min(pa.absolute_precision(), pb.absolute_precision());
  return lhs >= std::min(rhs, cap);
}

bool is_cauchy_gap(std::span<const AlgebraElement> trace, Valuation target_valuation) {
  if (trace.size() < 2) throw DomainError("is_cauchy_gap needs at least two trace entries");
  return separation(trace[trace.size() - 1], trace[trace.size() - 2]) >= target_valuation;
}

}  // namespace padic
