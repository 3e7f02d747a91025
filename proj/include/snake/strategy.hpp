#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "snake/grid.hpp"
#include "snake/solver.hpp"

namespace snake {

enum class StrategyId { oneshot, adhoc, preground, assume, nogood, naive };

inline constexpr StrategyId kAllStrategies[] = {StrategyId::oneshot, StrategyId::adhoc,  StrategyId::preground,
                                                StrategyId::assume,  StrategyId::nogood, StrategyId::naive};
inline constexpr StrategyId kSolverStrategies[] = {StrategyId::oneshot, StrategyId::adhoc, StrategyId::preground,
                                                   StrategyId::assume, StrategyId::nogood};

std::string_view to_string(StrategyId id);
/// Accepts the CLI spellings (oneshot, one-shot, adhoc, ad-hoc, ...).
std::optional<StrategyId> parse_strategy(std::string_view name);
bool is_multishot(StrategyId id);

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct StrategyOptions {
  double timeout_ms = 5000.0;
  bool canonicalize = true;
  /// Seed every solve with the previous cycle (generic_hc on the first call).
  bool warm_start = true;
};

struct RetrieveResult {
  /// Full cycle starting at the snake's tail, so the snake is its prefix.
  std::optional<CyclePath> path;
  SolveOutcome outcome;
  std::string diagnostic;
};

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual StrategyId id() const = 0;
  /// Solves one iteration for a snake (tail first) and an apple off the snake.
  virtual RetrieveResult retrieve(const Snake& snake, Coord apple) = 0;
  /// Learned clauses that will be available to the next call.
  virtual std::size_t persistent_learned() const { return 0; }
  /// The solver kept between calls; null for one-shot and naive.
  virtual const Solver* solver() const { return nullptr; }

  const std::optional<CyclePath>& previous_cycle() const { return previous_; }
  void set_previous_cycle(std::optional<CyclePath> cycle) { previous_ = std::move(cycle); }

 protected:
  std::optional<CyclePath> previous_;
};

/// Throws std::invalid_argument for grids build_grid rejects, or for the
/// nogood backend without a warm start (it has no dummy model to react to).
std::unique_ptr<Strategy> make_strategy(StrategyId id, const GridGraph& grid, const StrategyOptions& opts = {});

}  // namespace snake
