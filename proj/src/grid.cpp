#include "snake/grid.hpp"

#include <algorithm>
#include <unordered_map>

namespace snake {

std::string to_string(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

GridGraph::GridGraph(int n, int m) : n_(n), m_(m) {}

std::vector<Coord> GridGraph::neighbors(Coord v) const {
  if (!contains(v)) {
    throw OutOfGrid("cell " + to_string(v) + " outside " + std::to_string(n_) + "x" +
                    std::to_string(m_) + " grid");
  }
  std::vector<Coord> out;
  out.reserve(4);
  if (v.x < n_) out.push_back({v.x + 1, v.y});
  if (v.x > 1) out.push_back({v.x - 1, v.y});
  if (v.y < m_) out.push_back({v.x, v.y + 1});
  if (v.y > 1) out.push_back({v.x, v.y - 1});
  return out;
}

GridGraph build_grid(int n, int m) {
  if (n < 2 || m < 2) {
    throw DimensionError("grid " + std::to_string(n) + "x" + std::to_string(m) +
                         " has a side shorter than 2 and admits no cycle");
  }
  if ((n * m) % 2 != 0) {
    throw OddGridError("grid " + std::to_string(n) + "x" + std::to_string(m) +
                       " has an odd number of cells and admits no Hamiltonian cycle");
  }
  return GridGraph(n, m);
}

namespace {

// Requires an even column count.
CyclePath serpentine(int n, int m) {
  CyclePath cycle;
  cycle.reserve(static_cast<std::size_t>(n) * m);
  for (int y = 1; y <= m; ++y) cycle.push_back({1, y});
  for (int x = 2; x <= n; ++x) {
    if (x % 2 == 0) {
      for (int y = m; y >= 2; --y) cycle.push_back({x, y});
    } else {
      for (int y = 2; y <= m; ++y) cycle.push_back({x, y});
    }
  }
  for (int x = n; x >= 2; --x) cycle.push_back({x, 1});
  return cycle;
}

}  // namespace

CyclePath generic_hc(int n, int m) {
  build_grid(n, m);
  if (n % 2 == 0) return serpentine(n, m);
  CyclePath cycle = serpentine(m, n);
  for (auto& c : cycle) std::swap(c.x, c.y);
  return cycle;
}

HcCheck validate_hc(const GridGraph& g, const Path& p) {
  const auto expected = static_cast<std::size_t>(g.cell_count());
  if (p.size() != expected) {
    return {false, "coverage: path has " + std::to_string(p.size()) + " cells, grid has " +
                       std::to_string(expected)};
  }
  std::vector<char> seen(expected, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!g.contains(p[i])) return {false, "cell " + to_string(p[i]) + " outside the grid"};
    auto& s = seen[static_cast<std::size_t>(g.index(p[i]))];
    if (s) return {false, "repeat: cell " + to_string(p[i]) + " visited twice"};
    s = 1;
    if (i > 0 && !adjacent(p[i - 1], p[i])) {
      return {false, "adjacency: " + to_string(p[i - 1]) + " -> " + to_string(p[i])};
    }
  }
  if (!adjacent(p.back(), p.front())) {
    return {false, "closure: " + to_string(p.back()) + " is not adjacent to " +
                       to_string(p.front())};
  }
  return {true, {}};
}

bool validate_general_snake(const GridGraph& g, const Snake& snake, Coord apple, const Path& p) {
  if (snake.empty() || p.size() <= snake.size()) return false;
  if (!std::equal(snake.begin(), snake.end(), p.begin())) return false;
  if (p.back() != apple) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!g.contains(p[i])) return false;
    if (i > 0 && !adjacent(p[i - 1], p[i])) return false;
    if (i + 1 < p.size() && p[i] == apple) return false;
  }
  // Only indices below |p| are constrained; the apple itself is unique.
  std::unordered_map<int, std::size_t> last;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const int key = g.index(p[k]);
    if (auto it = last.find(key); it != last.end() && k - it->second < snake.size()) {
      return false;
    }
    last[key] = k;
  }
  return true;
}

Path apply_transform(const MirrorTransform& t, const Path& p) {
  Path out;
  out.reserve(p.size());
  for (auto c : p) out.push_back(t(c));
  return out;
}

CanonicalInstance canonicalize(int n, int m, const Snake& snake, Coord apple) {
  MirrorTransform t{false, false, n, m};
  if (!snake.empty()) {
    const Coord head = snake.back();
    t.flip_x = head.x > (n + 1) / 2;
    t.flip_y = head.y > (m + 1) / 2;
  }
  return {apply_transform(t, snake), t(apple), t};
}

CyclePath rotate_to(const CyclePath& cycle, Coord start) {
  auto it = std::find(cycle.begin(), cycle.end(), start);
  if (it == cycle.end()) throw std::invalid_argument("rotate_to: " + to_string(start) + " not on cycle");
  CyclePath out;
  out.reserve(cycle.size());
  out.insert(out.end(), it, cycle.end());
  out.insert(out.end(), cycle.begin(), it);
  return out;
}

std::optional<std::size_t> position_of(const Path& p, Coord c) {
  auto it = std::find(p.begin(), p.end(), c);
  if (it == p.end()) return std::nullopt;
  return static_cast<std::size_t>(it - p.begin());
}

void to_json(nlohmann::json& j, const Coord& c) { j = nlohmann::json::array({c.x, c.y}); }

void from_json(const nlohmann::json& j, Coord& c) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("coordinate must be [x,y]");
  c.x = j.at(0).get<int>();
  c.y = j.at(1).get<int>();
}

}  // namespace snake
