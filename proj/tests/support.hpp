#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "snake/game.hpp"
#include "snake/grid.hpp"

namespace testing_support {

using namespace snake;

// Minimal objective by dynamic programming over visited-cell bitmasks.
// Shares no code with brute_force_oracle. nullopt if no cycle extends the
// snake. Grids up to 24 cells.
inline std::optional<int> dp_min_objective(const GridGraph& g, const Snake& snake, Coord apple) {
  const int cells = g.cell_count();
  if (cells > 24) throw std::invalid_argument("dp_min_objective handles at most 24 cells");
  const std::uint32_t full = (cells == 32) ? 0xffffffffu : ((1u << cells) - 1);
  std::uint32_t start = 0;
  for (Coord c : snake) start |= 1u << g.index(c);
  const int tail = g.index(snake.front());
  const int head = g.index(snake.back());
  const int target = g.index(apple);

  auto adj = [&](int a, int b) { return adjacent(g.coord(a), g.coord(b)); };

  // can_finish(mask, v): the remaining cells can be walked from v and closed at the tail.
  std::unordered_map<std::uint64_t, bool> memo;
  std::function<bool(std::uint32_t, int)> can_finish = [&](std::uint32_t mask, int v) -> bool {
    if (mask == full) return adj(v, tail);
    const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 5) | static_cast<std::uint64_t>(v);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (int w = 0; w < cells && !ok; ++w) {
      if (!(mask >> w & 1u) && adj(v, w)) ok = can_finish(mask | (1u << w), w);
    }
    memo[key] = ok;
    return ok;
  };

  // Breadth-first over path lengths from the head, stopping at the apple.
  std::vector<std::pair<std::uint32_t, int>> layer{{start, head}};
  for (int len = 1; !layer.empty(); ++len) {
    std::vector<std::pair<std::uint32_t, int>> next;
    std::unordered_map<std::uint64_t, bool> seen;
    for (auto [mask, v] : layer) {
      for (int w = 0; w < cells; ++w) {
        if ((mask >> w & 1u) || !adj(v, w)) continue;
        const std::uint32_t m2 = mask | (1u << w);
        if (w == target) {
          if (can_finish(m2, w)) return len + 1;
          continue;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(m2) << 5) | static_cast<std::uint64_t>(w);
        if (seen.emplace(key, true).second) next.emplace_back(m2, w);
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

struct State {
  Snake snake;
  Coord apple;
};

// States reached by following the naive cycle from the given seeds. Every
// iteration contributes one state; the first `count` are returned.
inline std::vector<State> naive_states(int n, int m, std::uint64_t first_seed, std::size_t count) {
  std::vector<State> out;
  const GridGraph g = build_grid(n, m);
  for (std::uint64_t seed = first_seed; out.size() < count; ++seed) {
    Rng rng(seed);
    GameState st;
    st.snake = initial_snake(g, rng);
    const CyclePath cycle = generic_hc(n, m);
    while (st.snake.size() < static_cast<std::size_t>(g.cell_count()) && out.size() < count) {
      const Coord apple = place_apple(g, st, rng);
      out.push_back({st.snake, apple});
      st.snake = follow_path(st.snake, rotate_to(cycle, st.snake.front()), apple).first;
    }
  }
  return out;
}

}  // namespace testing_support
