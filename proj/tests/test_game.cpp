#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "snake/game.hpp"

using namespace snake;

namespace {

class NoPath final : public Strategy {
 public:
  StrategyId id() const override { return StrategyId::naive; }
  RetrieveResult retrieve(const Snake&, Coord) override {
    RetrieveResult r;
    r.diagnostic = "nothing found";
    return r;
  }
};

class Throws final : public Strategy {
 public:
  StrategyId id() const override { return StrategyId::naive; }
  RetrieveResult retrieve(const Snake&, Coord) override { throw std::runtime_error("backend exploded"); }
};

// Hands back a path that skips the apple.
class WrongPath final : public Strategy {
 public:
  StrategyId id() const override { return StrategyId::naive; }
  RetrieveResult retrieve(const Snake& snake, Coord) override {
    RetrieveResult r;
    r.path = Path(snake);
    return r;
  }
};

}  // namespace

TEST_CASE("Rng draws stay in range and are reproducible") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    CHECK(x < 7);
    CHECK(x == b.below(7));
  }
  CHECK_THROWS(a.below(0));
  CHECK(a.below(1) == 0);
}

TEST_CASE("place_apple") {
  auto g = build_grid(2, 2);
  GameState st;
  st.snake = {{1, 1}, {1, 2}, {2, 2}};
  Rng rng(5);
  CHECK(place_apple(g, st, rng) == Coord{2, 1});
  st.snake.push_back({2, 1});
  CHECK_THROWS_AS(place_apple(g, st, rng), BoardFull);
}

TEST_CASE("place_apple is uniform over free cells") {
  auto g = build_grid(2, 2);
  GameState st;
  st.snake = {{1, 1}};
  auto chi2 = [](const std::map<Coord, int>& counts, int draws) {
    double sum = 0.0;
    const double expected = draws / 3.0;
    for (auto [cell, k] : counts) sum += (k - expected) * (k - expected) / expected;
    return sum;
  };
  // 2 degrees of freedom, p = 0.01.
  const double critical = 9.21;

  const int seeds = 1000000;
  std::map<Coord, int> first_draw;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    first_draw[place_apple(g, st, rng)]++;
  }
  REQUIRE(first_draw.size() == 3);
  CHECK(first_draw.count({1, 1}) == 0);
  CHECK(chi2(first_draw, seeds) < critical);

  const int draws = 100000;
  std::map<Coord, int> stream;
  Rng rng(1);
  for (int i = 0; i < draws; ++i) stream[place_apple(g, st, rng)]++;
  CHECK(chi2(stream, draws) < critical);
}

TEST_CASE("follow_path examples") {
  auto [a, sa] = follow_path({{1, 1}, {2, 1}}, {{1, 1}, {2, 1}, {2, 2}}, {2, 2});
  CHECK(a == Snake{{1, 1}, {2, 1}, {2, 2}});
  CHECK(sa == 1);

  auto [b, sb] = follow_path({{1, 1}, {2, 1}}, {{1, 1}, {2, 1}, {2, 2}, {1, 2}}, {1, 2});
  CHECK(b == Snake{{2, 1}, {2, 2}, {1, 2}});
  CHECK(sb == 2);

  auto [c, sc] = follow_path({{1, 1}}, generic_hc(2, 2), {2, 1});
  CHECK(c == Snake{{2, 2}, {2, 1}});
  CHECK(sc == 3);
}

TEST_CASE("follow_path errors") {
  CHECK_THROWS_AS(follow_path({{1, 1}, {2, 1}}, {{2, 1}, {2, 2}}, {2, 2}), PathMismatch);
  CHECK_THROWS_AS(follow_path({{1, 1}}, {{1, 1}, {2, 1}}, {2, 2}), AppleMissing);
  // The apple behind the head does not count.
  CHECK_THROWS_AS(follow_path({{2, 2}, {2, 1}}, {{2, 2}, {2, 1}}, {2, 2}), AppleMissing);
}

TEST_CASE("follow_path keeps the snake a simple path") {
  const CyclePath c = generic_hc(6, 6);
  Snake s{c[0]};
  for (std::size_t a = 1; a < c.size(); ++a) {
    auto [grown, steps] = follow_path(s, rotate_to(c, s.front()), c[a]);
    CHECK(grown.size() == s.size() + 1);
    for (std::size_t i = 1; i < grown.size(); ++i) CHECK(adjacent(grown[i - 1], grown[i]));
    std::set<Coord> distinct(grown.begin(), grown.end());
    CHECK(distinct.size() == grown.size());
    CHECK(steps >= 1);
    s = grown;
  }
}

TEST_CASE("2x2 games are always won") {
  for (StrategyId id : kAllStrategies) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      GameConfig cfg;
      cfg.n = cfg.m = 2;
      cfg.seed = seed;
      cfg.strategy = id;
      CAPTURE(to_string(id));
      auto r = run_game(cfg);
      CHECK(r.won);
      CHECK(r.final_length == 4);
      CHECK(r.iterations.size() == 3);
      CHECK(r.total_steps >= 3);
      // Optimal play needs at most 2 + 2 + 1 steps; the fixed cycle can need 3 + 2 + 1.
      CHECK(r.total_steps <= (id == StrategyId::naive ? 6 : 5));
    }
  }
}

TEST_CASE("iteration records are consistent") {
  for (StrategyId id : kAllStrategies) {
    GameConfig cfg;
    cfg.n = cfg.m = 6;
    cfg.seed = 11;
    cfg.strategy = id;
    auto r = run_game(cfg);
    REQUIRE(r.won);
    CHECK(r.iterations.size() == 35);
    long total = 0;
    for (std::size_t i = 0; i < r.iterations.size(); ++i) {
      const auto& rec = r.iterations[i];
      CHECK(rec.iteration == static_cast<int>(i) + 1);
      CHECK(rec.length == static_cast<int>(i) + 1);
      CHECK(rec.valid_path);
      REQUIRE(rec.objective);
      CHECK(*rec.objective == rec.steps + 1);
      total += rec.steps;
    }
    CHECK(total == r.total_steps);
    CHECK(r.invalid_paths == 0);
  }
}

TEST_CASE("steps never undercut the Manhattan distance") {
  for (StrategyId id : kAllStrategies) {
    GameConfig cfg;
    cfg.n = cfg.m = 6;
    cfg.strategy = id;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      cfg.seed = seed;
      std::vector<int> distance;
      auto r = run_game(cfg, [&](const GameState& st, const CyclePath& path, const IterationRecord&) {
        REQUIRE(st.apple);
        CHECK(std::equal(st.snake.begin(), st.snake.end(), path.begin()));
        distance.push_back(manhattan(st.snake.back(), *st.apple));
      });
      REQUIRE(distance.size() == r.iterations.size());
      for (std::size_t i = 0; i < distance.size(); ++i) CHECK(r.iterations[i].steps >= distance[i]);
    }
  }
}

TEST_CASE("run_game is reproducible") {
  for (StrategyId id : kAllStrategies) {
    GameConfig cfg;
    cfg.n = cfg.m = 6;
    cfg.seed = 99;
    cfg.strategy = id;
    auto a = run_game(cfg);
    auto b = run_game(cfg);
    CHECK(a.total_steps == b.total_steps);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
      CHECK(a.iterations[i].apple == b.iterations[i].apple);
      CHECK(a.iterations[i].steps == b.iterations[i].steps);
      CHECK(a.iterations[i].objective == b.iterations[i].objective);
    }
  }
}

TEST_CASE("failures end the game as a loss") {
  GameConfig cfg;
  cfg.n = cfg.m = 4;
  NoPath none;
  auto a = run_game(cfg, none);
  CHECK_FALSE(a.won);
  CHECK(a.diagnostic.find("nothing found") != std::string::npos);
  CHECK(a.iterations.size() == 1);

  Throws boom;
  auto b = run_game(cfg, boom);
  CHECK_FALSE(b.won);
  CHECK(b.diagnostic.find("exploded") != std::string::npos);

  WrongPath wrong;
  auto c = run_game(cfg, wrong);
  CHECK_FALSE(c.won);
  CHECK(c.invalid_paths == 1);

  GameConfig odd;
  odd.n = odd.m = 3;
  auto d = run_game(odd);
  CHECK_FALSE(d.won);
  CHECK_FALSE(d.diagnostic.empty());
}

TEST_CASE("iteration records serialize as one JSON object") {
  IterationRecord rec;
  rec.iteration = 3;
  rec.length = 3;
  rec.apple = {2, 5};
  rec.steps = 4;
  rec.solve_ms = 1.5;
  rec.objective = 5;
  rec.optimal = true;
  const nlohmann::json j = rec;
  CHECK(j.dump() ==
        R"({"apple":[2,5],"iter":3,"len":3,"objective":5,"optimal":true,"solve_ms":1.5,"steps":4,"timeout":false})");
  rec.objective.reset();
  CHECK(nlohmann::json(rec)["objective"].is_null());
}
