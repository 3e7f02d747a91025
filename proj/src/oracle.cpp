#include "snake/oracle.hpp"

#include <algorithm>
#include <string>

namespace snake {

namespace {

struct Search {
  const GridGraph& g;
  Coord tail;
  Coord apple;
  std::size_t head_pos;
  std::vector<char> used;
  CyclePath path;
  OracleResult best;

  void dfs() {
    if (path.size() == used.size()) {
      if (!adjacent(path.back(), tail)) return;
      const int obj = static_cast<int>(*position_of(path, apple) - head_pos) + 1;
      if (best.witness.empty() || obj < best.objective) best = {obj, path};
      return;
    }
    for (Coord next : g.neighbors(path.back())) {
      auto& u = used[static_cast<std::size_t>(g.index(next))];
      if (u) continue;
      u = 1;
      path.push_back(next);
      dfs();
      path.pop_back();
      u = 0;
    }
  }
};

}  // namespace

OracleResult brute_force_oracle(const GridGraph& g, const Snake& snake, Coord apple) {
  if (g.cell_count() > kOracleMaxCells) {
    throw TooLarge("oracle limited to " + std::to_string(kOracleMaxCells) + " cells, grid has " +
                   std::to_string(g.cell_count()));
  }
  if (snake.empty()) throw std::invalid_argument("oracle needs a nonempty snake");
  if (std::find(snake.begin(), snake.end(), apple) != snake.end()) {
    throw std::invalid_argument("apple " + to_string(apple) + " lies on the snake");
  }
  Search s{g, snake.front(), apple, snake.size() - 1, std::vector<char>(static_cast<std::size_t>(g.cell_count()), 0),
           {}, {}};
  for (std::size_t i = 0; i < snake.size(); ++i) {
    if (!g.contains(snake[i]) || (i > 0 && !adjacent(snake[i - 1], snake[i]))) {
      throw std::invalid_argument("snake is not a path in the grid");
    }
    auto& u = s.used[static_cast<std::size_t>(g.index(snake[i]))];
    if (u) throw std::invalid_argument("snake visits " + to_string(snake[i]) + " twice");
    u = 1;
  }
  s.path = snake;
  s.dfs();
  if (s.best.witness.empty()) throw NoCycle("no Hamiltonian cycle extends the snake");
  return s.best;
}

}  // namespace snake
