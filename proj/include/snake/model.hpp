#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "snake/grid.hpp"

namespace snake {

using Var = int;

/// A signed boolean variable, encoded as 2 * var + (negative ? 1 : 0).
struct Lit {
  int code = -1;

  static constexpr Lit make(Var v, bool positive = true) { return Lit{2 * v + (positive ? 0 : 1)}; }
  constexpr Var var() const { return code >> 1; }
  constexpr bool negative() const { return code & 1; }
  constexpr Lit operator~() const { return Lit{code ^ 1}; }
  constexpr bool valid() const { return code >= 0; }

  friend constexpr bool operator==(Lit, Lit) = default;
};

/// next(from, to): the cycle steps from `from` to the grid-adjacent `to`.
struct EdgeLit {
  Coord from;
  Coord to;

  friend constexpr bool operator==(const EdgeLit&, const EdgeLit&) = default;
};

struct SignedEdge {
  EdgeLit edge;
  bool value = true;
};

class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnknownAtom : public ModelError {
 public:
  using ModelError::ModelError;
};

class UnknownEdge : public ModelError {
 public:
  using ModelError::ModelError;
};

class NonAdjacent : public ModelError {
 public:
  using ModelError::ModelError;
};

class NotOnCycle : public ModelError {
 public:
  using ModelError::ModelError;
};

class ModelContractViolation : public ModelError {
 public:
  using ModelError::ModelError;
};

/// head(c) or apple(c) external atom.
struct Atom {
  enum class Kind { head, apple };
  Kind kind;
  Coord cell;

  static Atom head(Coord c) { return {Kind::head, c}; }
  static Atom apple(Coord c) { return {Kind::apple, c}; }
};

/// The edge-variable model of one snake iteration.
///
/// Variable layout:
///   [0, E)        next/2: one variable per directed grid edge, ordered by
///                 (from.x, from.y, direction) with directions +x, -x, +y, -y
///   E             the dummy atom used by the warm-start heuristic
///   [E+1, 2E+1)   prenext/2 activation literals, one per directed edge
///
/// Static clauses enforce exactly one successor and exactly one predecessor
/// per cell, and prenext(e) -> next(e). Coverage (a single cycle) is not a
/// clause set; the solver enforces it lazily.
class ModelProgram {
 public:
  explicit ModelProgram(GridGraph grid);

  const GridGraph& grid() const { return grid_; }

  int edge_count() const { return static_cast<int>(edge_from_.size()); }
  int variable_count() const { return 2 * edge_count() + 1; }
  Var dummy_var() const { return edge_count(); }
  Var activation_var(Var edge) const { return edge_count() + 1 + edge; }

  /// Throws UnknownEdge if either cell is outside the grid or the cells are
  /// not adjacent.
  Var edge_var(EdgeLit e) const;
  std::optional<Var> find_edge(int from_cell, int to_cell) const;
  EdgeLit edge(Var v) const;
  int edge_from(Var v) const { return edge_from_[static_cast<std::size_t>(v)]; }
  int edge_to(Var v) const { return edge_to_[static_cast<std::size_t>(v)]; }

  std::span<const Var> out_edges(int cell) const;
  std::span<const Var> in_edges(int cell) const;

  const std::vector<std::vector<Lit>>& static_clauses() const { return static_clauses_; }

  /// Idempotent. UnknownAtom for cells outside the grid.
  void set_external(Atom atom, bool value);
  bool external(Atom atom) const;
  std::vector<Coord> true_heads() const;
  std::vector<Coord> true_apples() const;

 private:
  GridGraph grid_;
  std::vector<int> edge_from_;
  std::vector<int> edge_to_;
  std::vector<std::vector<Var>> out_;
  std::vector<std::vector<Var>> in_;
  std::vector<std::vector<Lit>> static_clauses_;
  std::vector<char> head_;
  std::vector<char> apple_;
};

ModelProgram build_model(const GridGraph& g);

/// Directed edges snake_i -> snake_{i+1}. NonAdjacent on malformed input.
std::vector<EdgeLit> snake_edge_lits(const Snake& snake);

/// Number of cells from head to apple inclusive, walking along the cycle's
/// direction (the head counts as 1). NotOnCycle if either is missing.
int objective_of(const CyclePath& cycle, Coord head, Coord apple);

}  // namespace snake
