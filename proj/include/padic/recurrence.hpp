#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "padic/contractive_map.hpp"

namespace padic {

/// How the offsets l_1 = 0 < l_2 < ... of one summand may be spaced.
enum class OffsetPolicy {
  kStrict,   // 2 <= l_i - l_{i-1} <= m - 1
  kRelaxed,  // 1 <= l_i - l_{i-1} <= m - 1
  kStacked,  // 0 <= l_i - l_{i-1}; used for x = f(x, ..., x)^N style equations
};

struct Factor {
  ContractiveMap map;
  int offset = 0;
};

struct Term {
  std::vector<Factor> factors;
};

/// x_{n+L} = sum_k prod_i f_i^(k)(x_{n+l_i^(k)}, ..., x_{n+l_i^(k)+m-1}).
///
/// All maps share one arity m, one domain and one prime. The window length is
/// L = max_k l_N^(k) + m, the smallest window that contains every argument.
class RecurrenceSpec {
 public:
  explicit RecurrenceSpec(std::vector<Term> terms, OffsetPolicy policy = OffsetPolicy::kStrict);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t summands() const { return terms_.size(); }
  std::size_t factors_per_summand() const { return terms_.front().factors.size(); }
  int arity() const { return arity_; }
  int window_length() const { return window_length_; }
  const DomainSpec& domain() const { return domain_; }
  const Shape& shape() const { return shape_; }
  Prime prime() const { return prime_; }
  /// min over all maps of k, i.e. alpha = p^(-k) is the largest contraction bound.
  Valuation contraction_exponent() const { return exponent_; }

  /// Right-hand side of the fixed-point equation, all arguments equal to x.
  AlgebraElement fixed_point_rhs(const AlgebraElement& x) const;

 private:
  std::vector<Term> terms_;
  int arity_ = 1;
  int window_length_ = 1;
  DomainSpec domain_;
  Shape shape_;
  Prime prime_ = 3;
  Valuation exponent_ = Valuation::infinity();
};

/// One application of the recurrence to the window (x_n, ..., x_{n+L-1}).
AlgebraElement step(const RecurrenceSpec& spec, std::span<const AlgebraElement> window,
                    std::int64_t n = 1);

struct TracePoint {
  std::int64_t n = 0;
  Valuation valuation;
};

struct ConvergenceCertificate {
  std::int64_t iterations = 0;
  AlgebraElement limit;
  /// Lower bound on ord(x - RHS(x)) at the limit.
  Valuation residual_valuation;
  /// k * ceil(n / L) for the final n: the certified ord(x_{n+L} - x*).
  Valuation guaranteed_valuation;
  Valuation target;
  int window_length = 1;
  Valuation contraction_exponent = 1;
  /// (n, ord(x_{n+L} - x_{n+L-1})) for every computed term.
  std::vector<TracePoint> trace;
  /// (n, ord(x_{n+L} - limit)) for every computed term.
  std::vector<TracePoint> limit_distance;
};

/// Certified lower bound on ord(x_{n+L} - x*): k * ceil(n / L).
Valuation rate_bound(Valuation k, int window_length, std::int64_t n);

/// Iterations after which the last L gaps are guaranteed to reach the target.
std::int64_t iteration_bound(Valuation k, int window_length, Valuation target);

/// True iff every recorded distance to the limit meets min(rate_bound, target).
bool rate_certificate_holds(const ConvergenceCertificate& cert);

struct SolveOptions {
  Valuation target = 40;
  int max_iter = 512;
};

/// Iterates the recurrence until the last L successive differences have
/// valuation >= target, then checks the fixed-point residual at the limit.
ConvergenceCertificate solve_recurrence(const RecurrenceSpec& spec,
                                        std::span<const AlgebraElement> initial,
                                        const SolveOptions& options);

/// Solves x = f(x, ..., x)^N as the recurrence x_{n+m} = f(x_n..x_{n+m-1})^N.
/// Initial window: the constant 1 of the map's shape unless given.
ConvergenceCertificate solve_power_fixed_point(const ContractiveMap& f, unsigned power,
                                               const SolveOptions& options,
                                               std::span<const AlgebraElement> initial = {});

/// A pair (F_1, F_2) of arity-2 maps contributing F_1(., .) F_2(., .).
struct MapPair {
  ContractiveMap first;
  ContractiveMap second;
};

/// The staggered three-sequence system
///   x' = sum F1(x, y) F2(y, z),  y' = sum G1(x', y) G2(y, z),  z' = sum H1(x', y') H2(y', z).
struct CoupledSpec {
  std::vector<MapPair> x_terms;
  std::vector<MapPair> y_terms;
  std::vector<MapPair> z_terms;

  void validate() const;
  const ContractiveMap& any_map() const { return x_terms.front().first; }
  Valuation contraction_exponent() const;
};

struct CoupledCertificate {
  std::array<ConvergenceCertificate, 3> components;
  /// (n, ord d_n) with d_n = max of the three successive differences.
  std::vector<TracePoint> envelope;
};

/// Evaluates sum_k P.first(u, v) * P.second(v, w).
AlgebraElement coupled_sum(std::span<const MapPair> terms, const AlgebraElement& u,
                           const AlgebraElement& v, const AlgebraElement& w);

CoupledCertificate solve_coupled(const CoupledSpec& spec,
                                 const std::array<AlgebraElement, 3>& initial,
                                 const SolveOptions& options);

}  // namespace padic
