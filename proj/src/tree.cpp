#include "padic/tree.hpp"

#include <algorithm>
#include <optional>

namespace padic {

TreeShape TreeShape::uniform(int branching, int depth, std::size_t max_leaves) {
  if (branching < 1) throw DomainError("branching must be >= 1");
  TreeShape t = from_rule([branching](const Coordinates&) { return branching; }, depth, max_leaves);
  t.uniform_branching_ = branching;
  return t;
}

TreeShape TreeShape::from_rule(const BranchingRule& rule, int depth, std::size_t max_leaves) {
  if (depth < 1) throw DomainError("tree depth must be >= 1");
  TreeShape t;
  t.levels_.push_back({Vertex{{}, 0, 0}});
  for (int level = 0; level < depth; ++level) {
    auto& parents = t.levels_.back();
    std::vector<Vertex> children;
    for (auto& v : parents) {
      const int k = rule(v.coords);
      if (k < 1) throw DomainError("vertex above depth D needs at least one successor");
      v.first_child = children.size();
      v.child_count = k;
      if (children.size() + static_cast<std::size_t>(k) > max_leaves) {
        throw DomainError("tree level " + std::to_string(level + 1) + " exceeds the cap of " +
                          std::to_string(max_leaves) + " vertices");
      }
      for (int i = 1; i <= k; ++i) {
        Coordinates c = v.coords;
        c.push_back(i);
        children.push_back(Vertex{std::move(c), 0, 0});
      }
    }
    t.levels_.push_back(std::move(children));
  }
  return t;
}

std::size_t TreeShape::vertex_count() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

std::optional<std::pair<int, std::size_t>> TreeShape::find(const Coordinates& coords) const {
  if (coords.size() > static_cast<std::size_t>(depth())) return std::nullopt;
  std::size_t index = 0;
  for (std::size_t level = 0; level < coords.size(); ++level) {
    const Vertex& v = levels_[level][index];
    const int i = coords[level];
    if (i < 1 || i > v.child_count) return std::nullopt;
    index = v.first_child + static_cast<std::size_t>(i - 1);
  }
  return std::pair{static_cast<int>(coords.size()), index};
}

VertexFamily VertexFamily::literal(const ContractiveMap& f, int k) {
  if (f.arity != k) throw DomainError(f.label + ": literal form needs arity k = " + std::to_string(k));
  return {FactorForm::kLiteral, {std::vector<ContractiveMap>(static_cast<std::size_t>(k), f)}, true};
}

VertexFamily VertexFamily::single(const ContractiveMap& f, int k) {
  if (f.arity != k) throw DomainError(f.label + ": single form needs arity k = " + std::to_string(k));
  std::vector<ContractiveMap> row{f};
  if (k > 1) {
    PadicNumber one = PadicNumber::from_unit(f.prime, 0, 1, f.digits);
    ContractiveMap unit = constant_map(AlgebraElement::filled(f.shape, one), k, f.domain, f.digits);
    row.insert(row.end(), static_cast<std::size_t>(k - 1), unit);
  }
  return {FactorForm::kLiteral, {std::move(row)}};
}

VertexFamily VertexFamily::per_edge(const ContractiveMap& g, int k) {
  if (g.arity != 1) throw DomainError(g.label + ": per-edge maps take one argument");
  return {FactorForm::kPerEdge, {std::vector<ContractiveMap>(static_cast<std::size_t>(k), g)}, true};
}

Valuation VertexFamily::contraction_exponent() const {
  Valuation k = Valuation::infinity();
  for (const auto& row : terms) {
    for (const auto& f : row) k = std::min(k, f.contraction_exponent);
  }
  return k;
}

AlgebraElement VertexFamily::evaluate(std::span<const AlgebraElement> successors) const {
  std::optional<AlgebraElement> sum;
  for (const auto& row : terms) {
    if (row.size() != successors.size()) {
      throw DomainError("vertex family has " + std::to_string(row.size()) + " edge maps for " +
                        std::to_string(successors.size()) + " successors");
    }
    std::optional<AlgebraElement> prod;
    for (std::size_t j = 0; j < row.size(); ++j) {
      AlgebraElement v = form == FactorForm::kLiteral ? row[j](successors) : row[j]({successors[j]});
      prod = prod ? *prod * v : v;
    }
    sum = sum ? *sum + *prod : *prod;
  }
  return *sum;
}

TreeProblem TreeProblem::uniform(TreeShape shape, VertexFamily family,
                                 std::vector<AlgebraElement> boundary) {
  TreeProblem p;
  p.shape_ = std::move(shape);
  p.uniform_ = std::move(family);
  p.boundary_ = std::move(boundary);
  p.validate();
  return p;
}

TreeProblem TreeProblem::per_vertex(TreeShape shape, FamilyRule rule,
                                    std::vector<AlgebraElement> boundary) {
  TreeProblem p;
  p.shape_ = std::move(shape);
  p.rule_ = std::move(rule);
  p.boundary_ = std::move(boundary);
  p.validate();
  return p;
}

const VertexFamily& TreeProblem::uniform_family() const {
  if (!uniform_) throw DomainError("tree problem has a per-vertex family");
  return *uniform_;
}

VertexFamily TreeProblem::family_at(const Coordinates& x, int branching) const {
  return uniform_ ? *uniform_ : rule_(x, branching);
}

TreeProblem TreeProblem::with_boundary(std::vector<AlgebraElement> boundary) const {
  TreeProblem p = *this;
  p.boundary_ = std::move(boundary);
  p.validate();
  return p;
}

void TreeProblem::validate() {
  const int depth = shape_.depth();
  beta_exponent_ = Valuation::infinity();
  std::optional<DomainSpec> domain;
  for (int level = 0; level < depth; ++level) {
    for (std::size_t i = 0; i < shape_.level_size(level); ++i) {
      const auto& v = shape_.vertex(level, i);
      VertexFamily fam = family_at(v.coords, v.child_count);
      if (fam.terms.empty()) throw DomainError("vertex family needs at least one term");
      for (const auto& row : fam.terms) {
        if (row.size() != static_cast<std::size_t>(v.child_count)) {
          throw DomainError("vertex family needs one map per successor");
        }
        for (const auto& f : row) {
          const int want = fam.form == FactorForm::kLiteral ? v.child_count : 1;
          if (f.arity != want) {
            throw DomainError(f.label + ": arity " + std::to_string(f.arity) + ", expected " +
                              std::to_string(want));
          }
          if (!domain) domain = f.domain;
          if (!(f.domain == *domain)) throw DomainError(f.label + ": maps need one domain");
        }
      }
      beta_exponent_ = std::min(beta_exponent_, fam.contraction_exponent());
      // A uniform family is the same everywhere; one vertex is enough.
      if (uniform_) break;
    }
  }
  if (beta_exponent_ < Valuation(1)) throw DomainError("tree family needs beta < 1");
  domain_ = *domain;
  if (boundary_.size() != shape_.leaf_count()) {
    throw DomainError("boundary has " + std::to_string(boundary_.size()) + " values for " +
                      std::to_string(shape_.leaf_count()) + " leaves");
  }
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    if (!domain_.contains(boundary_[i])) {
      std::string coords;
      for (int c : shape_.vertex(depth, i).coords) coords += std::to_string(c) + ",";
      if (!coords.empty()) coords.pop_back();
      throw DomainError("boundary value at leaf (" + coords + ") outside " + domain_.to_string());
    }
  }
}

const AlgebraElement& TreeSolution::at(const TreeShape& shape, const Coordinates& x) const {
  auto pos = shape.find(x);
  if (!pos) throw DomainError("no such vertex");
  return values[static_cast<std::size_t>(pos->first)][pos->second];
}

namespace {

template <typename Visit>
void for_interior(const TreeProblem& problem, Visit visit) {
  const auto& shape = problem.shape();
  std::optional<VertexFamily> fam;
  if (problem.is_uniform()) fam = problem.uniform_family();
  for (int level = shape.depth() - 1; level >= 0; --level) {
    for (std::size_t i = 0; i < shape.level_size(level); ++i) {
      const auto& v = shape.vertex(level, i);
      if (problem.is_uniform()) {
        visit(level, i, v, *fam);
      } else {
        visit(level, i, v, problem.family_at(v.coords, v.child_count));
      }
    }
  }
}

}  // namespace

TreeSolution backward_sweep(const TreeProblem& problem) {
  const auto& shape = problem.shape();
  TreeSolution sol;
  sol.values.resize(static_cast<std::size_t>(shape.depth()) + 1);
  sol.values.back() = problem.boundary();
  for (int level = 0; level < shape.depth(); ++level) {
    sol.values[static_cast<std::size_t>(level)].resize(shape.level_size(level));
  }
  for_interior(problem, [&](int level, std::size_t i, const TreeShape::Vertex& v,
                            const VertexFamily& fam) {
    const auto& next = sol.values[static_cast<std::size_t>(level) + 1];
    std::span<const AlgebraElement> succ(next.data() + v.first_child,
                                         static_cast<std::size_t>(v.child_count));
    sol.values[static_cast<std::size_t>(level)][i] = fam.evaluate(succ);
  });
  sol.residuals = tree_residuals(problem, sol.values);
  return sol;
}

std::vector<std::vector<Valuation>> tree_residuals(
    const TreeProblem& problem, const std::vector<std::vector<AlgebraElement>>& values) {
  const auto& shape = problem.shape();
  std::vector<std::vector<Valuation>> res(static_cast<std::size_t>(shape.depth()));
  for (int level = 0; level < shape.depth(); ++level) {
    res[static_cast<std::size_t>(level)].resize(shape.level_size(level));
  }
  for_interior(problem, [&](int level, std::size_t i, const TreeShape::Vertex& v,
                            const VertexFamily& fam) {
    const auto& next = values[static_cast<std::size_t>(level) + 1];
    std::span<const AlgebraElement> succ(next.data() + v.first_child,
                                         static_cast<std::size_t>(v.child_count));
    res[static_cast<std::size_t>(level)][i] =
        separation(values[static_cast<std::size_t>(level)][i], fam.evaluate(succ));
  });
  return res;
}

GapReport uniqueness_gap(const TreeProblem& problem, std::vector<AlgebraElement> boundary2) {
  TreeProblem other = problem.with_boundary(std::move(boundary2));
  TreeSolution u = backward_sweep(problem);
  TreeSolution v = backward_sweep(other);
  const int depth = problem.shape().depth();
  const Valuation k = problem.beta_exponent();
  GapReport r;
  r.pass = true;
  for (int level = 0; level <= depth; ++level) {
    Valuation g = Valuation::infinity();
    const auto& a = u.values[static_cast<std::size_t>(level)];
    const auto& b = v.values[static_cast<std::size_t>(level)];
    for (std::size_t i = 0; i < a.size(); ++i) g = std::min(g, separation(a[i], b[i]));
    Valuation bound = (depth - level) * k;
    r.level_gaps.push_back(g);
    r.level_bounds.push_back(bound);
    if (g < bound) r.pass = false;
  }
  r.root_gap_valuation = r.level_gaps.front();
  r.bound = r.level_bounds.front();
  return r;
}

InvariantSolution invariant_solution(const TreeProblem& problem, const SolveOptions& options) {
  if (!problem.is_uniform()) {
    throw DomainError("invariant solution needs the same map family at every vertex");
  }
  const auto k = problem.shape().uniform_branching();
  if (!k) throw DomainError("invariant solution needs uniform branching");
  const VertexFamily& fam = problem.uniform_family();

  // x -> sum_i prod_y g_iy(x) with g = f restricted to the diagonal (literal form)
  // or f itself (per-edge form): one summand of k stacked arity-1 factors each.
  std::vector<Term> terms;
  for (const auto& row : fam.terms) {
    Term t;
    for (const auto& f : row) {
      t.factors.push_back({fam.form == FactorForm::kLiteral ? diagonal(f) : f, 0});
    }
    terms.push_back(std::move(t));
  }
  const ContractiveMap& ref = terms.front().factors.front().map;
  PadicNumber one = PadicNumber::from_unit(ref.prime, 0, 1, ref.digits);
  AlgebraElement start = AlgebraElement::filled(ref.shape, one);

  InvariantSolution out;
  if (fam.identical_factors) {
    out.certificate = solve_power_fixed_point(terms.front().factors.front().map,
                                              static_cast<unsigned>(*k), options);
  } else {
    RecurrenceSpec spec(std::move(terms), OffsetPolicy::kStacked);
    std::vector<AlgebraElement> init{start};
    out.certificate = solve_recurrence(spec, init, options);
  }
  out.value = out.certificate.limit;
  std::vector<AlgebraElement> succ(static_cast<std::size_t>(*k), out.value);
  out.residual_valuation = separation(out.value, fam.evaluate(succ));
  if (out.residual_valuation < options.target) {
    throw PrecisionError("invariant assignment residual " + out.residual_valuation.to_string() +
                         " below target");
  }
  return out;
}

}  // namespace padic
