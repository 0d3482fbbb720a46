#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "padic/recurrence.hpp"

namespace padic {

/// Vertex address (i_1, ..., i_n) with 1 <= i_j <= k; the root is ().
using Coordinates = std::vector<int>;

/// Default cap on the number of depth-D vertices (2^12, depth 12 for k = 2).
inline constexpr std::size_t kDefaultMaxLeaves = std::size_t{1} << 12;

/// Finite rooted k-ary tree truncated at depth D, stored level by level.
///
/// Level n holds the vertices at distance n from the root in lexicographic
/// coordinate order; the direct successors S(x) of a vertex are a contiguous
/// run of level n+1.
class TreeShape {
 public:
  struct Vertex {
    Coordinates coords;
    std::size_t first_child = 0;
    int child_count = 0;
  };

  using BranchingRule = std::function<int(const Coordinates&)>;

  /// Cayley tree: every vertex above depth D has exactly `branching` successors.
  static TreeShape uniform(int branching, int depth, std::size_t max_leaves = kDefaultMaxLeaves);
  /// k_x given per vertex; every vertex above depth D needs k_x >= 1.
  static TreeShape from_rule(const BranchingRule& rule, int depth,
                             std::size_t max_leaves = kDefaultMaxLeaves);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  /// Uniform branching k, if the tree is a Cayley tree.
  std::optional<int> uniform_branching() const { return uniform_branching_; }
  std::size_t level_size(int level) const { return levels_.at(static_cast<std::size_t>(level)).size(); }
  const Vertex& vertex(int level, std::size_t index) const {
    return levels_.at(static_cast<std::size_t>(level)).at(index);
  }
  std::size_t vertex_count() const;
  std::size_t leaf_count() const { return levels_.back().size(); }
  /// (level, index) of a vertex, if it exists.
  std::optional<std::pair<int, std::size_t>> find(const Coordinates& coords) const;

 private:
  std::vector<std::vector<Vertex>> levels_;
  std::optional<int> uniform_branching_;
};

/// How a factor f_xy^(i) receives its arguments.
enum class FactorForm {
  kLiteral,  // f_xy(u_(x,1), ..., u_(x,k_x)) for every y in S(x)
  kPerEdge,  // f_xy(u_y)
};

/// The maps attached to one vertex: terms[i][j] is f_{x,(x,j+1)}^(i+1).
struct VertexFamily {
  FactorForm form = FactorForm::kLiteral;
  std::vector<std::vector<ContractiveMap>> terms;
  /// One term whose factors are all the same map (set by literal() and per_edge()).
  bool identical_factors = false;

  /// u_x = prod_{y in S(x)} f(u_(x,1), ..., u_(x,k)), i.e. f(...)^k.
  static VertexFamily literal(const ContractiveMap& f, int k);
  /// u_x = f(u_(x,1), ..., u_(x,k)): the first edge carries f, the rest the constant 1.
  static VertexFamily single(const ContractiveMap& f, int k);
  /// u_x = prod_{y in S(x)} g(u_y).
  static VertexFamily per_edge(const ContractiveMap& g, int k);

  Valuation contraction_exponent() const;
  /// Right-hand side at one vertex given the successor values.
  AlgebraElement evaluate(std::span<const AlgebraElement> successors) const;
};

/// u_x = sum_i prod_{y in S(x)} f_xy^(i)(...) on a finite tree with boundary values at depth D.
class TreeProblem {
 public:
  using FamilyRule = std::function<VertexFamily(const Coordinates&, int branching)>;

  /// The same family at every interior vertex (translation invariant).
  static TreeProblem uniform(TreeShape shape, VertexFamily family,
                             std::vector<AlgebraElement> boundary);
  /// Family chosen per vertex.
  static TreeProblem per_vertex(TreeShape shape, FamilyRule rule,
                                std::vector<AlgebraElement> boundary);

  const TreeShape& shape() const { return shape_; }
  const std::vector<AlgebraElement>& boundary() const { return boundary_; }
  const DomainSpec& domain() const { return domain_; }
  bool is_uniform() const { return uniform_.has_value(); }
  const VertexFamily& uniform_family() const;
  VertexFamily family_at(const Coordinates& x, int branching) const;
  /// beta = p^(-k_beta), the largest contraction bound over the family.
  Valuation beta_exponent() const { return beta_exponent_; }

  /// Same maps, different boundary.
  TreeProblem with_boundary(std::vector<AlgebraElement> boundary) const;

 private:
  TreeProblem() = default;
  void validate();

  TreeShape shape_;
  std::optional<VertexFamily> uniform_;
  FamilyRule rule_;
  std::vector<AlgebraElement> boundary_;
  DomainSpec domain_;
  Valuation beta_exponent_ = Valuation::infinity();
};

struct TreeSolution {
  /// values[n][i]: u at vertex i of level n.
  std::vector<std::vector<AlgebraElement>> values;
  /// residuals[n][i]: ord(u_x - RHS(x)) for interior vertices (levels 0..D-1).
  std::vector<std::vector<Valuation>> residuals;

  const AlgebraElement& root() const { return values.front().front(); }
  const AlgebraElement& at(const TreeShape& shape, const Coordinates& x) const;
};

/// Evaluates the equation from depth D-1 up to the root.
TreeSolution backward_sweep(const TreeProblem& problem);

/// Residuals of an arbitrary assignment, level by level (interior vertices only).
std::vector<std::vector<Valuation>> tree_residuals(const TreeProblem& problem,
                                                   const std::vector<std::vector<AlgebraElement>>& values);

struct GapReport {
  Valuation root_gap_valuation;
  /// D * k_beta.
  Valuation bound;
  /// min over level n of ord(u_x - v_x), n = 0..D.
  std::vector<Valuation> level_gaps;
  /// (D - n) * k_beta.
  std::vector<Valuation> level_bounds;
  bool pass = false;
};

/// Solves with the problem's boundary and with `boundary2` and compares.
GapReport uniqueness_gap(const TreeProblem& problem, std::vector<AlgebraElement> boundary2);

struct InvariantSolution {
  AlgebraElement value;
  ConvergenceCertificate certificate;
  /// ord(u* - RHS) with u_x = u* at every vertex.
  Valuation residual_valuation;
};

/// Fixed point u* of x -> sum_i prod_y f^(i)(x, ..., x) for a translation-invariant
/// problem on a Cayley tree; u_x = u* then solves the tree equation.
InvariantSolution invariant_solution(const TreeProblem& problem, const SolveOptions& options);

}  // namespace padic
