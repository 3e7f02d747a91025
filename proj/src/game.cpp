#include "snake/game.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include <json.hpp>
#include <spdlog/spdlog.h>

namespace snake {

std::uint64_t Rng::below(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  // Largest multiple of k representable in 64 bits, i.e. 2^64 - (2^64 mod k).
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % k + 1) % k;
  for (;;) {
    const std::uint64_t x = engine_();
    if (rem == 0 || x < std::numeric_limits<std::uint64_t>::max() - rem + 1) return x % k;
  }
}

Coord place_apple(const GridGraph& g, const GameState& state, Rng& rng) {
  std::vector<char> taken(static_cast<std::size_t>(g.cell_count()), 0);
  for (Coord c : state.snake) taken[static_cast<std::size_t>(g.index(c))] = 1;
  std::vector<int> free;
  for (int i = 0; i < g.cell_count(); ++i) {
    if (!taken[static_cast<std::size_t>(i)]) free.push_back(i);
  }
  if (free.empty()) throw BoardFull("no free cell for the apple");
  return g.coord(free[static_cast<std::size_t>(rng.below(free.size()))]);
}

std::pair<Snake, int> follow_path(const Snake& snake, const Path& p, Coord apple) {
  if (snake.empty() || p.size() < snake.size() || !std::equal(snake.begin(), snake.end(), p.begin())) {
    throw PathMismatch("path does not start with the snake");
  }
  const std::size_t head = snake.size() - 1;
  auto it = std::find(p.begin() + static_cast<std::ptrdiff_t>(head) + 1, p.end(), apple);
  if (it == p.end()) throw AppleMissing("apple " + to_string(apple) + " is not on the path after the head");
  const auto j = static_cast<std::size_t>(it - p.begin());
  Snake grown(p.begin() + static_cast<std::ptrdiff_t>(j - snake.size()), it + 1);
  return {std::move(grown), static_cast<int>(j - head)};
}

Snake initial_snake(const GridGraph& g, Rng& rng) {
  return {g.coord(static_cast<int>(rng.below(static_cast<std::uint64_t>(g.cell_count()))))};
}

GameResult run_game(const GameConfig& cfg, Strategy& strategy, const IterationObserver& observer) {
  GameResult result;
  const auto started = std::chrono::steady_clock::now();
  GameState state;
  try {
    const GridGraph g = build_grid(cfg.n, cfg.m);
    Rng rng(cfg.seed);
    state.snake = initial_snake(g, rng);
    const auto cells = static_cast<std::size_t>(g.cell_count());
    while (state.snake.size() < cells) {
      const Coord apple = place_apple(g, state, rng);
      state.apple = apple;
      IterationRecord rec;
      rec.iteration = state.iteration + 1;
      rec.length = static_cast<int>(state.snake.size());
      rec.apple = apple;

      RetrieveResult r = strategy.retrieve(state.snake, apple);
      rec.solve_ms = r.outcome.elapsed_ms;
      rec.objective = r.outcome.objective;
      rec.optimal = r.outcome.optimal_proven;
      rec.timed_out = r.outcome.timed_out;
      if (!r.path) {
        result.iterations.push_back(rec);
        result.diagnostic = "iteration " + std::to_string(rec.iteration) + ": " + r.diagnostic;
        break;
      }
      rec.valid_path = static_cast<bool>(validate_hc(g, *r.path));
      if (!rec.valid_path) result.invalid_paths++;
      if (observer) observer(state, *r.path, rec);
      auto [snake, steps] = follow_path(state.snake, *r.path, apple);
      rec.steps = steps;
      state.snake = std::move(snake);
      state.apple.reset();
      state.steps += steps;
      state.iteration++;
      result.iterations.push_back(rec);
      spdlog::debug("iter {} len {} apple {} steps {} obj {} {:.1f} ms", rec.iteration, rec.length,
                    to_string(apple), steps, rec.objective.value_or(-1), rec.solve_ms);
    }
    result.won = state.snake.size() == cells;
  } catch (const std::exception& e) {
    result.won = false;
    result.diagnostic = e.what();
  }
  if (!result.won && result.diagnostic.empty()) result.diagnostic = "game ended early";
  result.total_steps = state.steps;
  result.final_length = static_cast<int>(state.snake.size());
  result.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

GameResult run_game(const GameConfig& cfg, const IterationObserver& observer) {
  StrategyOptions opts{cfg.timeout_ms, cfg.canonicalize, cfg.warm_start};
  std::unique_ptr<Strategy> strategy;
  try {
    strategy = make_strategy(cfg.strategy, build_grid(cfg.n, cfg.m), opts);
  } catch (const std::exception& e) {
    GameResult result;
    result.diagnostic = e.what();
    return result;
  }
  return run_game(cfg, *strategy, observer);
}

void to_json(nlohmann::json& j, const IterationRecord& r) {
  j = nlohmann::json{{"iter", r.iteration},
                     {"len", r.length},
                     {"apple", r.apple},
                     {"steps", r.steps},
                     {"solve_ms", r.solve_ms},
                     {"objective", r.objective ? nlohmann::json(*r.objective) : nlohmann::json(nullptr)},
                     {"optimal", r.optimal},
                     {"timeout", r.timed_out}};
}

}  // namespace snake
