#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "snake/grid.hpp"
#include "snake/strategy.hpp"

namespace snake {

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoardFull : public GameError {
 public:
  using GameError::GameError;
};

class PathMismatch : public GameError {
 public:
  using GameError::GameError;
};

class AppleMissing : public GameError {
 public:
  using GameError::GameError;
};

struct GameConfig {
  int n = 6;
  int m = 6;
  std::uint64_t seed = 1;
  double timeout_ms = 5000.0;
  StrategyId strategy = StrategyId::assume;
  bool canonicalize = true;
  bool warm_start = true;
};

struct GameState {
  Snake snake;
  std::optional<Coord> apple;
  long steps = 0;
  int iteration = 0;
};

struct IterationRecord {
  int iteration = 0;
  int length = 0;  ///< snake length when the apple was placed
  Coord apple;
  long steps = 0;
  double solve_ms = 0.0;
  std::optional<int> objective;
  bool optimal = false;
  bool timed_out = false;
  bool valid_path = true;  ///< the returned path passed validate_hc
};

struct GameResult {
  bool won = false;
  long total_steps = 0;
  std::vector<IterationRecord> iterations;
  double total_ms = 0.0;
  int final_length = 0;
  int invalid_paths = 0;
  std::string diagnostic;  ///< why the game was lost, empty otherwise
};

/// mt19937_64 seeded with the game seed; bounded draws by rejection so every
/// outcome is equally likely.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, k). k must be positive.
  std::uint64_t below(std::uint64_t k);

 private:
  std::mt19937_64 engine_;
};

/// Uniform over free cells, enumerated in cell-index order.
Coord place_apple(const GridGraph& g, const GameState& state, Rng& rng);

/// Moves the snake along p until its head eats the apple.
/// Returns the grown snake and the number of steps taken.
std::pair<Snake, int> follow_path(const Snake& snake, const Path& p, Coord apple);

/// The starting snake: one cell drawn uniformly from the grid.
Snake initial_snake(const GridGraph& g, Rng& rng);

/// Sees the board before the snake moves: state (apple set), the path it is
/// about to follow, and the record so far (steps not yet filled in).
using IterationObserver = std::function<void(const GameState&, const CyclePath&, const IterationRecord&)>;

/// Plays one game. Errors end the game as a loss with a diagnostic.
GameResult run_game(const GameConfig& cfg, Strategy& strategy, const IterationObserver& observer = {});
GameResult run_game(const GameConfig& cfg, const IterationObserver& observer = {});

void to_json(nlohmann::json& j, const IterationRecord& r);

}  // namespace snake
