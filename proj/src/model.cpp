#include "snake/model.hpp"

#include <algorithm>

namespace snake {

ModelProgram::ModelProgram(GridGraph grid) : grid_(grid) {
  const int cells = grid_.cell_count();
  out_.resize(static_cast<std::size_t>(cells));
  in_.resize(static_cast<std::size_t>(cells));
  head_.assign(static_cast<std::size_t>(cells), 0);
  apple_.assign(static_cast<std::size_t>(cells), 0);

  // (x, y, direction) order fixes the branching tie-break.
  for (int x = 1; x <= grid_.n(); ++x) {
    for (int y = 1; y <= grid_.m(); ++y) {
      const Coord from{x, y};
      for (Coord to : grid_.neighbors(from)) {
        const Var v = static_cast<Var>(edge_from_.size());
        edge_from_.push_back(grid_.index(from));
        edge_to_.push_back(grid_.index(to));
        out_[static_cast<std::size_t>(grid_.index(from))].push_back(v);
        in_[static_cast<std::size_t>(grid_.index(to))].push_back(v);
      }
    }
  }

  auto exactly_one = [this](const std::vector<Var>& vars) {
    std::vector<Lit> alo;
    for (Var v : vars) alo.push_back(Lit::make(v));
    static_clauses_.push_back(std::move(alo));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        static_clauses_.push_back({Lit::make(vars[i], false), Lit::make(vars[j], false)});
      }
    }
  };
  for (int c = 0; c < cells; ++c) {
    exactly_one(out_[static_cast<std::size_t>(c)]);
    exactly_one(in_[static_cast<std::size_t>(c)]);
  }
  for (Var e = 0; e < edge_count(); ++e) {
    static_clauses_.push_back({Lit::make(activation_var(e), false), Lit::make(e)});
  }
}

Var ModelProgram::edge_var(EdgeLit e) const {
  if (!grid_.contains(e.from) || !grid_.contains(e.to)) {
    throw UnknownEdge("edge " + to_string(e.from) + "->" + to_string(e.to) + " leaves the grid");
  }
  auto v = find_edge(grid_.index(e.from), grid_.index(e.to));
  if (!v) throw UnknownEdge("cells " + to_string(e.from) + " and " + to_string(e.to) + " are not adjacent");
  return *v;
}

std::optional<Var> ModelProgram::find_edge(int from_cell, int to_cell) const {
  for (Var v : out_[static_cast<std::size_t>(from_cell)]) {
    if (edge_to(v) == to_cell) return v;
  }
  return std::nullopt;
}

EdgeLit ModelProgram::edge(Var v) const {
  return {grid_.coord(edge_from(v)), grid_.coord(edge_to(v))};
}

std::span<const Var> ModelProgram::out_edges(int cell) const {
  return out_[static_cast<std::size_t>(cell)];
}

std::span<const Var> ModelProgram::in_edges(int cell) const {
  return in_[static_cast<std::size_t>(cell)];
}

void ModelProgram::set_external(Atom atom, bool value) {
  if (!grid_.contains(atom.cell)) {
    throw UnknownAtom(std::string(atom.kind == Atom::Kind::head ? "head" : "apple") +
                      to_string(atom.cell) + " is not a grid cell");
  }
  auto& flags = atom.kind == Atom::Kind::head ? head_ : apple_;
  flags[static_cast<std::size_t>(grid_.index(atom.cell))] = value ? 1 : 0;
}

bool ModelProgram::external(Atom atom) const {
  if (!grid_.contains(atom.cell)) return false;
  const auto& flags = atom.kind == Atom::Kind::head ? head_ : apple_;
  return flags[static_cast<std::size_t>(grid_.index(atom.cell))] != 0;
}

namespace {

std::vector<Coord> collect(const GridGraph& g, const std::vector<char>& flags) {
  std::vector<Coord> out;
  for (int i = 0; i < g.cell_count(); ++i) {
    if (flags[static_cast<std::size_t>(i)]) out.push_back(g.coord(i));
  }
  return out;
}

}  // namespace

std::vector<Coord> ModelProgram::true_heads() const { return collect(grid_, head_); }
std::vector<Coord> ModelProgram::true_apples() const { return collect(grid_, apple_); }

ModelProgram build_model(const GridGraph& g) { return ModelProgram(g); }

std::vector<EdgeLit> snake_edge_lits(const Snake& snake) {
  std::vector<EdgeLit> out;
  for (std::size_t i = 0; i + 1 < snake.size(); ++i) {
    if (!adjacent(snake[i], snake[i + 1])) {
      throw NonAdjacent("snake cells " + to_string(snake[i]) + " and " + to_string(snake[i + 1]) +
                        " are not adjacent");
    }
    out.push_back({snake[i], snake[i + 1]});
  }
  return out;
}

int objective_of(const CyclePath& cycle, Coord head, Coord apple) {
  auto h = position_of(cycle, head);
  auto a = position_of(cycle, apple);
  if (!h || !a) throw NotOnCycle("head or apple not on cycle");
  const auto len = cycle.size();
  return static_cast<int>((*a + len - *h) % len) + 1;
}

}  // namespace snake
