#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace snake {

/// A grid vertex. Both coordinates are 1-based: x is the column (1..n),
/// y is the row (1..m).
struct Coord {
  int x = 1;
  int y = 1;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

inline int manhattan(Coord a, Coord b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

inline bool adjacent(Coord a, Coord b) { return manhattan(a, b) == 1; }

std::string to_string(Coord c);

using Path = std::vector<Coord>;
/// Ordered from tail (front) to head (back).
using Snake = std::vector<Coord>;
/// A Hamiltonian cycle; the closing edge back() -> front() is implicit.
using CyclePath = std::vector<Coord>;

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OddGridError : public GridError {
 public:
  using GridError::GridError;
};

class DimensionError : public GridError {
 public:
  using GridError::GridError;
};

class OutOfGrid : public GridError {
 public:
  using GridError::GridError;
};

/// The n x m grid graph. Vertices are dense-indexed row by row:
/// index = (y - 1) * n + (x - 1).
class GridGraph {
 public:
  GridGraph(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  int cell_count() const { return n_ * m_; }
  int edge_count() const { return 2 * n_ * m_ - n_ - m_; }

  bool contains(Coord c) const { return c.x >= 1 && c.x <= n_ && c.y >= 1 && c.y <= m_; }
  int index(Coord c) const { return (c.y - 1) * n_ + (c.x - 1); }
  Coord coord(int index) const { return {index % n_ + 1, index / n_ + 1}; }

  /// Orthogonal neighbours in the fixed order +x, -x, +y, -y.
  std::vector<Coord> neighbors(Coord v) const;

 private:
  int n_;
  int m_;
};

/// Validates dimensions: throws DimensionError if a side is < 2 and
/// OddGridError if n*m is odd.
GridGraph build_grid(int n, int m);

/// Deterministic serpentine Hamiltonian cycle starting at (1,1).
CyclePath generic_hc(int n, int m);

struct HcCheck {
  bool ok = false;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

HcCheck validate_hc(const GridGraph& g, const Path& p);

/// Accepts p if it starts with the snake, ends at the apple (which occurs
/// nowhere else), steps between adjacent cells, and every repeated cell is
/// revisited only after at least |snake| steps.
bool validate_general_snake(const GridGraph& g, const Snake& snake, Coord apple, const Path& p);

/// A grid mirror. Each flag is an involution, so the transform is its own
/// inverse.
struct MirrorTransform {
  bool flip_x = false;
  bool flip_y = false;
  int n = 0;
  int m = 0;

  Coord operator()(Coord c) const {
    return {flip_x ? n + 1 - c.x : c.x, flip_y ? m + 1 - c.y : c.y};
  }
  bool is_identity() const { return !flip_x && !flip_y; }
};

Path apply_transform(const MirrorTransform& t, const Path& p);

struct CanonicalInstance {
  Snake snake;
  Coord apple;
  MirrorTransform transform;
};

/// Mirrors the instance so the head lies in the quadrant x <= ceil(n/2),
/// y <= ceil(m/2). A head on the centre line of an odd side is not flipped.
CanonicalInstance canonicalize(int n, int m, const Snake& snake, Coord apple);

/// Rotates a cycle so that `start` comes first. Direction is preserved.
CyclePath rotate_to(const CyclePath& cycle, Coord start);

/// Position of c in p, if present.
std::optional<std::size_t> position_of(const Path& p, Coord c);

void to_json(nlohmann::json& j, const Coord& c);
void from_json(const nlohmann::json& j, Coord& c);

}  // namespace snake
