#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "snake/bench.hpp"
#include "snake/game.hpp"
#include "snake/oracle.hpp"
#include "snake/render.hpp"

namespace {

using namespace snake;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("snake");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("SNAKE_LOG_LEVEL")) spdlog::set_level(spdlog::level::from_str(level));
}

std::vector<StrategyId> parse_strategies(const std::string& text) {
  if (text == "all") return {std::begin(kAllStrategies), std::end(kAllStrategies)};
  if (text == "solvers") return {std::begin(kSolverStrategies), std::end(kSolverStrategies)};
  std::vector<StrategyId> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    auto id = parse_strategy(part);
    if (!id) throw CLI::ValidationError("--strategies", "unknown strategy '" + part + "'");
    out.push_back(*id);
  }
  return out;
}

std::vector<GridSize> parse_grids(const std::string& text) {
  std::vector<GridSize> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_grid(part));
  return out;
}

int play(const std::string& grid, const std::string& strategy, std::uint64_t seed, double timeout_ms,
         const std::string& render, const std::string& out_dir, bool no_warmstart, bool no_canonical) {
  const GridSize size = parse_grid(grid);
  auto id = parse_strategy(strategy);
  if (!id) throw CLI::ValidationError("--strategy", "unknown strategy '" + strategy + "'");
  GameConfig cfg{size.n, size.m, seed, timeout_ms, *id, !no_canonical, !no_warmstart};
  const GridGraph g = build_grid(cfg.n, cfg.m);

  std::optional<RenderSpec> spec;
  if (!render.empty()) {
    spec = RenderSpec{render == "svg" ? RenderFormat::svg : RenderFormat::ascii};
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  }
  IterationObserver observer;
  if (spec) {
    observer = [&](const GameState& state, const CyclePath& path, const IterationRecord& rec) {
      const std::string board = render_board(g, state.snake, state.apple, path, *spec);
      if (out_dir.empty()) {
        std::cerr << "iteration " << rec.iteration << "\n" << board << "\n";
        return;
      }
      const auto file = std::filesystem::path(out_dir) /
                        fmt::format("iter_{:04d}.{}", rec.iteration, spec->format == RenderFormat::svg ? "svg" : "txt");
      std::ofstream(file, std::ios::binary) << board;
    };
  }

  const GameResult result = run_game(cfg, observer);
  for (const auto& rec : result.iterations) std::cout << nlohmann::json(rec).dump() << '\n';
  std::cerr << fmt::format("{} {} seed {}: {} after {} steps, length {}, {:.1f} ms{}\n", to_string(size),
                           to_string(*id), seed, result.won ? "won" : "lost", result.total_steps, result.final_length,
                           result.total_ms, result.diagnostic.empty() ? "" : " (" + result.diagnostic + ")");
  return result.won ? 0 : 1;
}

int bench(BenchConfig cfg, const std::string& grids, const std::string& strategies) {
  cfg.grids = parse_grids(grids);
  cfg.strategies = parse_strategies(strategies);
  const BenchReport report = run_bench(cfg);
  std::cout << "grid,strategy,games,win_rate,mean_total_steps,mean_total_time_ms,timeout_rate\n";
  for (const auto& c : report.cells) {
    std::cout << fmt::format("{},{},{},{},{:.2f},{:.1f},{:.4f}\n", to_string(c.grid), to_string(c.strategy), c.games,
                             c.win_rate, c.mean_total_steps, c.mean_total_time_ms, c.timeout_rate);
  }
  return 0;
}

int oracle(const std::string& grid, const std::string& state_file) {
  const GridSize size = parse_grid(grid);
  const GridGraph g = build_grid(size.n, size.m);
  std::ifstream in(state_file);
  if (!in) throw std::runtime_error("cannot read " + state_file);
  const auto j = nlohmann::json::parse(in);
  const auto snake = j.at("snake").get<Snake>();
  const auto apple = j.at("apple").get<Coord>();
  const OracleResult r = brute_force_oracle(g, snake, apple);
  std::cout << nlohmann::json{{"objective", r.objective}, {"witness", r.witness}}.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Plays Snake by solving for minimal Hamiltonian cycles"};
  app.require_subcommand(1);

  std::string grid = "6x6";
  std::string strategy = "assume";
  std::uint64_t seed = 1;
  double timeout_ms = 5000.0;
  std::string render;
  std::string out_dir;
  bool no_warmstart = false;
  bool no_canonical = false;
  auto* play_cmd = app.add_subcommand("play", "Play one game and print one JSON line per iteration");
  play_cmd->add_option("--grid", grid, "Grid size, NxM")->capture_default_str();
  play_cmd->add_option("--strategy", strategy, "oneshot|adhoc|preground|assume|nogood|naive")->capture_default_str();
  play_cmd->add_option("--seed", seed)->capture_default_str();
  play_cmd->add_option("--timeout-ms", timeout_ms, "Per-iteration solve budget")->capture_default_str();
  play_cmd->add_option("--render", render, "Draw every iteration")->check(CLI::IsMember({"ascii", "svg"}));
  play_cmd->add_option("--out", out_dir, "Directory for rendered frames (stderr if omitted)");
  play_cmd->add_flag("--no-warmstart", no_warmstart, "Do not seed solves with the previous cycle");
  play_cmd->add_flag("--no-canonicalize", no_canonical, "Do not mirror the head into the first quadrant");

  BenchConfig bcfg;
  std::string grids = "4,6,8";
  std::string strategies = "all";
  bool bench_no_warm = false;
  auto* bench_cmd = app.add_subcommand("bench", "Run games for every grid and strategy, write JSONL and CSV");
  bench_cmd->add_option("--grids", grids, "Comma-separated sizes, e.g. 4,6,8 or 6x8")->capture_default_str();
  bench_cmd->add_option("--games", bcfg.games)->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--strategies", strategies, "all, solvers, or a comma-separated list")->capture_default_str();
  bench_cmd->add_option("--timeout-ms", bcfg.timeout_ms)->capture_default_str();
  bench_cmd->add_option("--seed", bcfg.base_seed, "Base seed; game k uses seed + k")->capture_default_str();
  bench_cmd->add_option("--out", bcfg.out_dir, "Output directory");
  bench_cmd->add_option("--jobs", bcfg.jobs)->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--no-warmstart", bench_no_warm);

  std::string oracle_grid;
  std::string state_file;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum for a small state");
  oracle_cmd->add_option("--grid", oracle_grid)->required();
  oracle_cmd->add_option("--state", state_file, "JSON {\"snake\":[[x,y],...],\"apple\":[x,y]}")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*play_cmd) return play(grid, strategy, seed, timeout_ms, render, out_dir, no_warmstart, no_canonical);
    if (*bench_cmd) {
      bcfg.warm_start = !bench_no_warm;
      return bench(bcfg, grids, strategies);
    }
    if (*oracle_cmd) return oracle(oracle_grid, state_file);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
