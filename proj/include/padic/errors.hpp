#pragma once

#include <stdexcept>
#include <string>

namespace padic {

/// An argument lies outside the set an operation is defined on
/// (zero divisor, prime mismatch, point outside E_p, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The tracked precision is too small to decide or produce the result.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration cap before certifying the target.
class IterationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text or JSON that does not have the expected form.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace padic
