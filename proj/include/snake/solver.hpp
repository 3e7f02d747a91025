#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "snake/grid.hpp"
#include "snake/model.hpp"

namespace snake {

class SolverError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class GuardReleased : public SolverError {
 public:
  using SolverError::SolverError;
};

class NotInCallback : public SolverError {
 public:
  using SolverError::SolverError;
};

class InvalidCycle : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A fresh literal guarding a batch of temporary clauses. Released guards
/// are permanently false and cannot be reused.
struct GuardLit {
  Var var = -1;
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learned_global = 0;  ///< clauses that outlive the call
  std::uint64_t learned_call = 0;    ///< clauses dropped when the call ends
  std::uint64_t models = 0;
};

class Solver;

/// Handed to the on_model callback. Copies share state with the original, so
/// a copy kept past the callback refuses further clauses.
class SearchContext {
 public:
  const CyclePath& cycle() const { return *cycle_; }
  std::optional<int> objective() const { return objective_; }
  bool dummy() const { return dummy_; }

  /// Adds a clause for the rest of the current solve call. Throws
  /// NotInCallback once the callback has returned.
  void add_clause(const std::vector<SignedEdge>& lits);

 private:
  friend class Solver;
  const ModelProgram* model_ = nullptr;
  const CyclePath* cycle_ = nullptr;
  std::optional<int> objective_;
  bool dummy_ = false;
  std::shared_ptr<bool> active_ = std::make_shared<bool>(false);
  std::shared_ptr<std::vector<std::vector<Lit>>> injected_ =
      std::make_shared<std::vector<std::vector<Lit>>>();
};

struct SolveOptions {
  std::vector<SignedEdge> assumptions;
  /// Guards assumed true for this call. Unassumed guards leave their clauses
  /// inert.
  std::vector<GuardLit> guards;
  std::function<void(SearchContext&)> on_model;
  double deadline_ms = 60000.0;
  bool bound_objective = true;
};

enum class SolveStatus {
  optimal,       ///< search space exhausted with an incumbent
  satisfiable,   ///< incumbent found, optimality not proven
  unsat,         ///< no cycle is compatible with the active constraints
  unknown,       ///< deadline hit before any model
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::unknown;
  /// Starts at the head when a head is set, otherwise at (1,1).
  std::optional<CyclePath> incumbent;
  std::optional<int> objective;
  bool optimal_proven = false;
  bool timed_out = false;
  /// Clauses were injected from the model callback during this call.
  bool restricted_search = false;
  bool first_model_dummy = false;
  /// Objective of every accepted model, in emission order.
  std::vector<int> objective_trace;
  SolverStats stats;
  double elapsed_ms = 0.0;
};

/// Incremental anytime branch-and-bound search over a ModelProgram.
///
/// All constraints are clauses over the model's variables except two
/// propagators: single-cycle coverage (lazy subtour elimination) and the
/// objective bound (the head's forced chain must reach the apple within the
/// current bound). Learned clauses derived only from static material are
/// kept across solve calls; everything else is dropped when the call ends.
class Solver {
 public:
  explicit Solver(ModelProgram model);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  const ModelProgram& model() const;
  /// head/apple externals. Idempotent; UnknownAtom outside the grid.
  void set_external(Atom atom, bool value);

  /// Adds a permanent clause (one-shot facts).
  void add_static_clause(const std::vector<SignedEdge>& lits);

  GuardLit new_guard();
  /// Installs (not guard or l) for every l; they bind only in calls that
  /// list the guard in SolveOptions::guards. GuardReleased if retired.
  void add_guarded_constraints(GuardLit guard, const std::vector<EdgeLit>& lits);
  /// Permanently falsifies the guard. Idempotent.
  void release_guard(GuardLit guard);
  bool released(GuardLit guard) const;
  /// Physically deletes clauses satisfied by released guards.
  void cleanup();

  /// Reversible: while true every model contains the edge.
  void set_activation(EdgeLit edge, bool value);
  bool activation(EdgeLit edge) const;

  /// InvalidCycle if the cycle is not a Hamiltonian cycle of the grid.
  void set_warm_start(const CyclePath& cycle);
  void clear_warm_start();
  bool has_warm_start() const;

  SolveOutcome solve(const SolveOptions& opts = {});

  std::size_t clause_count() const;
  std::size_t static_clause_count() const;
  std::size_t guarded_clause_count() const;
  std::size_t learned_global_count() const;
  int guard_count() const;
  const SolverStats& total_stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace snake
