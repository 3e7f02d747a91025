#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "snake/bench.hpp"
#include "snake/oracle.hpp"
#include "snake/render.hpp"
#include "support.hpp"

using namespace snake;
using testing_support::dp_min_objective;
using testing_support::naive_states;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Drops wall-clock fields so two runs can be compared.
std::string strip_timing(const std::string& jsonl) {
  std::string out;
  for (const auto& line : lines_of(jsonl)) {
    auto j = nlohmann::json::parse(line);
    j.erase("solve_ms");
    j.erase("total_ms");
    j.erase("timeout");
    out += j.dump() + "\n";
  }
  return out;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("snake_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("oracle examples") {
  auto r = brute_force_oracle(build_grid(2, 2), {{1, 1}}, {2, 2});
  CHECK(r.objective == 3);
  CHECK(validate_hc(build_grid(2, 2), r.witness));
  CHECK(r.witness.front() == Coord{1, 1});

  CHECK(brute_force_oracle(build_grid(2, 3), {{1, 1}}, {2, 2}).objective == 3);
  CHECK(brute_force_oracle(build_grid(4, 2), {{1, 1}}, {1, 2}).objective == 2);
}

TEST_CASE("oracle errors") {
  CHECK_THROWS_AS(brute_force_oracle(build_grid(6, 6), {{1, 1}}, {2, 2}), TooLarge);
  CHECK_THROWS_AS(brute_force_oracle(build_grid(2, 2), {{1, 1}}, {1, 1}), std::invalid_argument);
  // Head in the middle of the bottom row of 4x2 with the tail at a corner: the
  // corner (1,2) can only be closed through (1,1), so no cycle extends it.
  CHECK_THROWS_AS(brute_force_oracle(build_grid(4, 2), {{2, 2}, {2, 1}, {3, 1}}, {1, 2}), NoCycle);
}

TEST_CASE("oracle agrees with the DP reference") {
  for (auto [n, m] : {std::pair{2, 3}, {4, 2}, {4, 3}, {4, 4}}) {
    auto g = build_grid(n, m);
    for (const auto& s : naive_states(n, m, 5, 60)) {
      auto expected = dp_min_objective(g, s.snake, s.apple);
      REQUIRE(expected);
      auto got = brute_force_oracle(g, s.snake, s.apple);
      CHECK(got.objective == *expected);
      CHECK(validate_hc(g, got.witness));
      CHECK(std::equal(s.snake.begin(), s.snake.end(), got.witness.begin()));
      CHECK(objective_of(got.witness, s.snake.back(), s.apple) == got.objective);
    }
  }
}

TEST_CASE("ascii rendering") {
  auto g = build_grid(2, 2);
  const auto text = render_board(g, {{1, 1}, {2, 1}}, Coord{1, 2}, std::nullopt);
  const auto rows = lines_of(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "A.");
  CHECK(rows[1] == "#@");
  CHECK(text == render_board(g, {{1, 1}, {2, 1}}, Coord{1, 2}, std::nullopt));

  // Cycle arrows on free cells.
  const auto with_cycle = render_board(g, {{1, 1}}, std::nullopt, generic_hc(2, 2));
  CHECK(lines_of(with_cycle) == std::vector<std::string>{">v", "@<"});
}

TEST_CASE("svg rendering is a well-formed document") {
  auto g = build_grid(4, 4);
  RenderSpec spec;
  spec.format = RenderFormat::svg;
  const auto svg = render_board(g, {{1, 1}, {2, 1}}, Coord{4, 4}, generic_hc(4, 4), spec);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("class=\"head\"") != std::string::npos);
  CHECK(svg.find("class=\"apple\"") != std::string::npos);
  // Every opened element is closed or self-closing.
  int depth = 0;
  for (std::size_t i = 0; i < svg.size(); ++i) {
    if (svg[i] != '<' || svg.compare(i, 2, "<?") == 0) continue;
    const auto close = svg.find('>', i);
    REQUIRE(close != std::string::npos);
    if (svg[i + 1] == '/')
      depth--;
    else if (svg[close - 1] != '/')
      depth++;
    CHECK(depth >= 0);
  }
  CHECK(depth == 0);
}

TEST_CASE("parse_grid") {
  CHECK(parse_grid("6") == GridSize{6, 6});
  CHECK(parse_grid("6x8") == GridSize{6, 8});
  CHECK(to_string(GridSize{4, 2}) == "4x2");
  CHECK_THROWS(parse_grid("x"));
  CHECK_THROWS(parse_grid("6x"));
  CHECK_THROWS(parse_grid("-2"));
}

TEST_CASE("2x2 bench") {
  BenchConfig cfg;
  cfg.grids = {{2, 2}};
  cfg.games = 10;
  cfg.strategies = {StrategyId::assume, StrategyId::naive};
  auto report = run_bench(cfg);
  REQUIRE(report.cells.size() == 2);
  CHECK(report.runs.size() == 20);
  for (const auto& run : report.runs) {
    CHECK(run.result.won);
    for (const auto& rec : run.result.iterations) {
      CHECK(rec.steps >= 1);
      CHECK(rec.steps <= 5);
    }
  }
  for (const auto& cell : report.cells) {
    CHECK(cell.win_rate == 1.0);
    CHECK(cell.games == 10);
  }
}

TEST_CASE("reports on disk round trip") {
  const auto dir = scratch_dir("roundtrip");
  BenchConfig cfg;
  cfg.grids = {{4, 4}};
  cfg.games = 4;
  cfg.strategies = {StrategyId::oneshot, StrategyId::naive};
  cfg.out_dir = dir;
  auto report = run_bench(cfg);

  const auto csv = lines_of(slurp(dir / "report.csv"));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == "grid,strategy,games,win_rate,mean_total_steps,mean_total_time_ms,timeout_rate");

  auto back = read_report_csv(dir / "report.csv");
  REQUIRE(back.size() == report.cells.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].grid == report.cells[i].grid);
    CHECK(back[i].strategy == report.cells[i].strategy);
    CHECK(back[i].games == report.cells[i].games);
    CHECK(back[i].win_rate == doctest::Approx(report.cells[i].win_rate));
    CHECK(back[i].mean_total_steps == doctest::Approx(report.cells[i].mean_total_steps));
  }

  // Aggregates can be recomputed from the raw logs.
  auto runs = load_runs(dir / "iterations.jsonl", dir / "games.jsonl");
  REQUIRE(runs.size() == report.runs.size());
  auto again = aggregate(runs);
  REQUIRE(again.size() == report.cells.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].wins == report.cells[i].wins);
    CHECK(again[i].mean_total_steps == doctest::Approx(report.cells[i].mean_total_steps));
    CHECK(again[i].timeout_rate == doctest::Approx(report.cells[i].timeout_rate));
    CHECK(again[i].timeout_rate_by_iter.size() == report.cells[i].timeout_rate_by_iter.size());
  }

  const auto jsonl = lines_of(slurp(dir / "report.jsonl"));
  CHECK(jsonl.size() == 2);
  for (const auto& line : jsonl) CHECK(nlohmann::json::accept(line));
  fs::remove_all(dir);
}

TEST_CASE("bench output is deterministic apart from timings") {
  const auto a = scratch_dir("det_a");
  const auto b = scratch_dir("det_b");
  BenchConfig cfg;
  cfg.grids = {{4, 4}};
  cfg.games = 3;
  cfg.strategies = {StrategyId::assume, StrategyId::naive};
  cfg.out_dir = a;
  cfg.jobs = 1;
  run_bench(cfg);
  cfg.out_dir = b;
  cfg.jobs = 3;
  run_bench(cfg);
  CHECK(strip_timing(slurp(a / "iterations.jsonl")) == strip_timing(slurp(b / "iterations.jsonl")));
  CHECK(strip_timing(slurp(a / "games.jsonl")) == strip_timing(slurp(b / "games.jsonl")));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("unwritable report path") {
  BenchCell cell;
  cell.grid = {2, 2};
  CHECK_THROWS_AS(emit_report({cell}, ReportFormat::csv, "/nonexistent_dir/x/report.csv"), ReportIoError);
  CHECK_THROWS_AS(read_report_csv("/nonexistent_dir/report.csv"), ReportIoError);
}
