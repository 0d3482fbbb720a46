#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace padic {

/// An integer p-adic valuation, or +infinity (the valuation of zero).
///
/// Arithmetic saturates at infinity, so bounds such as `depth * k` stay
/// meaningful when `k` is infinite (constant maps contract "infinitely").
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr Valuation(std::int64_t v) : value_(v) {}  // NOLINT: implicit by intent

  static constexpr Valuation infinity() {
    Valuation v;
    v.value_ = kInf;
    return v;
  }

  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr bool is_finite() const { return value_ != kInf; }

  /// Finite value; infinity maps to the sentinel, so check is_finite() first.
  constexpr std::int64_t value() const { return value_; }

  constexpr auto operator<=>(const Valuation&) const = default;

  friend constexpr Valuation operator+(Valuation a, Valuation b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return Valuation(a.value_ + b.value_);
  }
  friend constexpr Valuation operator-(Valuation a, std::int64_t b) {
    if (a.is_infinite()) return a;
    return Valuation(a.value_ - b);
  }
  friend constexpr Valuation operator*(std::int64_t n, Valuation a) {
    if (a.is_infinite()) return n == 0 ? Valuation(0) : infinity();
    return Valuation(n * a.value_);
  }

  std::string to_string() const {
    return is_infinite() ? std::string("inf") : std::to_string(value_);
  }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::int64_t value_ = 0;
};

}  // namespace padic
