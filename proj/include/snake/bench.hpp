#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "snake/game.hpp"
#include "snake/strategy.hpp"

namespace snake {

class ReportIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSize {
  int n = 6;
  int m = 6;
  friend bool operator==(GridSize, GridSize) = default;
};

std::string to_string(GridSize g);
/// "6" or "6x8".
GridSize parse_grid(const std::string& text);

struct BenchConfig {
  std::vector<GridSize> grids{{4, 4}, {6, 6}, {8, 8}};
  int games = 20;
  std::vector<StrategyId> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  double timeout_ms = 5000.0;
  std::uint64_t base_seed = 1;
  /// Empty: nothing is written.
  std::filesystem::path out_dir;
  int jobs = 1;
  bool canonicalize = true;
  bool warm_start = true;
};

struct GameRun {
  GridSize grid;
  StrategyId strategy = StrategyId::assume;
  int game = 0;
  std::uint64_t seed = 0;
  GameResult result;
};

struct BenchCell {
  GridSize grid;
  StrategyId strategy = StrategyId::assume;
  int games = 0;
  int wins = 0;
  double win_rate = 0.0;
  double mean_total_steps = 0.0;
  double mean_total_time_ms = 0.0;
  /// Timed-out solves over all solves.
  double timeout_rate = 0.0;
  /// Entry k: share of games whose iteration k+1 timed out, among games that
  /// reached it.
  std::vector<double> timeout_rate_by_iter;
};

struct BenchReport {
  std::vector<BenchCell> cells;
  std::vector<GameRun> runs;
};

/// Runs every (grid, strategy, game) with seed base_seed + game. Output order
/// is fixed by the config, whatever `jobs` is. With out_dir set, writes
/// iterations.jsonl, games.jsonl, report.csv and report.jsonl there.
BenchReport run_bench(const BenchConfig& cfg);

/// Aggregates grouped by (grid, strategy) in order of first appearance.
std::vector<BenchCell> aggregate(const std::vector<GameRun>& runs);

/// Rebuilds the runs from iterations.jsonl and games.jsonl.
std::vector<GameRun> load_runs(const std::filesystem::path& iterations, const std::filesystem::path& games);

enum class ReportFormat { csv, jsonl };

void emit_report(const std::vector<BenchCell>& cells, ReportFormat format, const std::filesystem::path& file);
/// Reads back report.csv (the per-iteration curve is not part of the CSV).
std::vector<BenchCell> read_report_csv(const std::filesystem::path& file);

}  // namespace snake
