#include <set>

#include "doctest.h"
#include "snake/model.hpp"

using namespace snake;

TEST_CASE("build_model variable counts") {
  auto m22 = build_model(build_grid(2, 2));
  CHECK(m22.edge_count() == 8);
  auto m66 = build_model(build_grid(6, 6));
  CHECK(m66.edge_count() == 120);
  CHECK(m66.edge_count() == 2 * (2 * 6 * 6 - 6 - 6));
  CHECK(m66.variable_count() == 241);
  CHECK(m66.activation_var(0) == 121);
  CHECK(m66.true_heads().empty());
  CHECK(m66.true_apples().empty());
}

TEST_CASE("edge variables are ordered by (x, y, direction)") {
  auto model = build_model(build_grid(3, 2));
  const auto e0 = model.edge(0);
  CHECK(e0.from == Coord{1, 1});
  CHECK(e0.to == Coord{2, 1});
  CHECK(model.edge(1).to == Coord{1, 2});
  Coord prev{0, 0};
  for (Var v = 0; v < model.edge_count(); ++v) {
    const auto e = model.edge(v);
    CHECK(adjacent(e.from, e.to));
    CHECK(model.edge_var(e) == v);
    CHECK(std::pair{prev.x, prev.y} <= std::pair{e.from.x, e.from.y});
    prev = e.from;
  }
}

TEST_CASE("every directed edge has exactly one variable") {
  auto g = build_grid(4, 3);
  auto model = build_model(g);
  std::set<std::pair<int, int>> seen;
  for (Var v = 0; v < model.edge_count(); ++v) seen.insert({model.edge_from(v), model.edge_to(v)});
  CHECK(seen.size() == static_cast<std::size_t>(model.edge_count()));
  for (int c = 0; c < g.cell_count(); ++c) {
    CHECK(model.out_edges(c).size() == g.neighbors(g.coord(c)).size());
    CHECK(model.in_edges(c).size() == g.neighbors(g.coord(c)).size());
  }
}

TEST_CASE("edge_var errors") {
  auto model = build_model(build_grid(4, 4));
  CHECK_THROWS_AS(model.edge_var({{1, 1}, {3, 1}}), UnknownEdge);
  CHECK_THROWS_AS(model.edge_var({{4, 4}, {5, 4}}), UnknownEdge);
  CHECK_THROWS_AS(model.edge_var({{1, 1}, {1, 1}}), UnknownEdge);
}

TEST_CASE("static clauses: exactly-one degrees and activation implications") {
  auto g = build_grid(2, 2);
  auto model = build_model(g);
  // Per cell and side: one at-least-one clause plus C(2,2) pairwise clauses.
  CHECK(model.static_clauses().size() == 4 * 2 * 2 + 8);
  int units = 0;
  for (const auto& c : model.static_clauses()) {
    CHECK(c.size() >= 2);
    if (c.size() == 1) units++;
  }
  CHECK(units == 0);
}

TEST_CASE("externals are recorded and idempotent") {
  auto model = build_model(build_grid(2, 3));
  model.set_external(Atom::head({1, 1}), true);
  model.set_external(Atom::head({1, 1}), true);
  CHECK(model.external(Atom::head({1, 1})));
  CHECK(model.true_heads() == std::vector<Coord>{{1, 1}});
  model.set_external(Atom::head({1, 1}), false);
  CHECK(model.true_heads().empty());
  CHECK_FALSE(model.external(Atom::apple({2, 2})));
  CHECK_THROWS_AS(model.set_external(Atom::apple({3, 1}), true), UnknownAtom);
}

TEST_CASE("snake_edge_lits") {
  CHECK(snake_edge_lits({{1, 1}}).empty());
  auto two = snake_edge_lits({{1, 1}, {2, 1}, {2, 2}});
  REQUIRE(two.size() == 2);
  CHECK(two[0] == EdgeLit{{1, 1}, {2, 1}});
  CHECK(two[1] == EdgeLit{{2, 1}, {2, 2}});

  const Snake fig{{6, 2}, {5, 2}, {4, 2}, {4, 3}, {3, 3}};
  auto edges = snake_edge_lits(fig);
  REQUIRE(edges.size() == 4);
  for (std::size_t i = 0; i < edges.size(); ++i) CHECK(edges[i] == EdgeLit{fig[i], fig[i + 1]});

  CHECK_THROWS_AS(snake_edge_lits({{1, 1}, {2, 2}}), NonAdjacent);
}

TEST_CASE("objective_of") {
  const CyclePath c{{1, 1}, {1, 2}, {2, 2}, {2, 1}};
  CHECK(objective_of(c, {1, 1}, {1, 2}) == 2);
  CHECK(objective_of(c, {1, 1}, {2, 2}) == 3);
  // Wraps around the end of the list.
  CHECK(objective_of(c, {2, 2}, {1, 1}) == 3);
  CHECK(objective_of(c, {2, 1}, {1, 1}) == 2);
  CHECK_THROWS_AS(objective_of(c, {1, 1}, {3, 3}), NotOnCycle);

  const CyclePath g6 = generic_hc(6, 6);
  // In the serpentine cycle (1,2) comes second and (2,1) closes the loop.
  CHECK(objective_of(g6, {1, 1}, {1, 2}) == 2);
  CHECK(objective_of(g6, {1, 1}, {2, 1}) == 36);
}

TEST_CASE("objective equals the position counted from the head") {
  const CyclePath c = generic_hc(4, 4);
  for (std::size_t h = 0; h < c.size(); ++h) {
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (a == h) continue;
      const auto rotated = rotate_to(c, c[h]);
      CHECK(objective_of(c, c[h], c[a]) == static_cast<int>(*position_of(rotated, c[a])) + 1);
    }
  }
}
