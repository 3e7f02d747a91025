#include "snake/bench.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace snake {

std::string to_string(GridSize g) { return std::to_string(g.n) + "x" + std::to_string(g.m); }

GridSize parse_grid(const std::string& text) {
  try {
    const auto x = text.find_first_of("xX");
    std::size_t used = 0;
    if (x == std::string::npos) {
      const int n = std::stoi(text, &used);
      if (used != text.size() || n < 1) throw std::invalid_argument(text);
      return {n, n};
    }
    const int n = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const std::string rest = text.substr(x + 1);
    const int m = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    if (n < 1 || m < 1) throw std::invalid_argument(text);
    return {n, m};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("grid must look like 6 or 6x8, got '" + text + "'");
  }
}

namespace {

nlohmann::json iteration_line(const GameRun& run, const IterationRecord& rec) {
  nlohmann::json j = rec;
  j["grid"] = to_string(run.grid);
  j["strategy"] = std::string(to_string(run.strategy));
  j["game"] = run.game;
  j["seed"] = run.seed;
  return j;
}

nlohmann::json game_line(const GameRun& run) {
  const auto& r = run.result;
  return {{"grid", to_string(run.grid)},
          {"strategy", std::string(to_string(run.strategy))},
          {"game", run.game},
          {"seed", run.seed},
          {"won", r.won},
          {"total_steps", r.total_steps},
          {"total_ms", r.total_ms},
          {"iterations", r.iterations.size()},
          {"final_length", r.final_length},
          {"invalid_paths", r.invalid_paths},
          {"diagnostic", r.diagnostic}};
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ReportIoError("cannot write " + file.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ReportIoError("cannot read " + file.string());
  return in;
}

StrategyId strategy_from(const std::string& name, const std::filesystem::path& file) {
  auto id = parse_strategy(name);
  if (!id) throw ReportIoError(file.string() + ": unknown strategy '" + name + "'");
  return *id;
}

}  // namespace

std::vector<BenchCell> aggregate(const std::vector<GameRun>& runs) {
  struct Counts {
    std::vector<int> reached;  // games per iteration index
    long solves = 0;
    long timeouts = 0;
  };
  std::vector<BenchCell> cells;
  std::vector<Counts> counts;
  for (const auto& run : runs) {
    std::size_t i = 0;
    while (i < cells.size() && !(cells[i].grid == run.grid && cells[i].strategy == run.strategy)) ++i;
    if (i == cells.size()) {
      cells.push_back({});
      cells.back().grid = run.grid;
      cells.back().strategy = run.strategy;
      counts.emplace_back();
    }
    auto& c = cells[i];
    auto& n = counts[i];
    c.games++;
    c.wins += run.result.won ? 1 : 0;
    c.mean_total_steps += static_cast<double>(run.result.total_steps);
    c.mean_total_time_ms += run.result.total_ms;
    const auto& iters = run.result.iterations;
    if (c.timeout_rate_by_iter.size() < iters.size()) {
      c.timeout_rate_by_iter.resize(iters.size(), 0.0);
      n.reached.resize(iters.size(), 0);
    }
    for (std::size_t k = 0; k < iters.size(); ++k) {
      n.reached[k]++;
      n.solves++;
      if (iters[k].timed_out) {
        c.timeout_rate_by_iter[k] += 1.0;
        n.timeouts++;
      }
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& c = cells[i];
    c.win_rate = static_cast<double>(c.wins) / c.games;
    c.mean_total_steps /= c.games;
    c.mean_total_time_ms /= c.games;
    c.timeout_rate = counts[i].solves ? static_cast<double>(counts[i].timeouts) / counts[i].solves : 0.0;
    for (std::size_t k = 0; k < c.timeout_rate_by_iter.size(); ++k) c.timeout_rate_by_iter[k] /= counts[i].reached[k];
  }
  return cells;
}

BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.games < 1) throw std::invalid_argument("games must be at least 1");
  if (cfg.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  BenchReport report;
  for (GridSize g : cfg.grids) {
    for (StrategyId s : cfg.strategies) {
      for (int k = 0; k < cfg.games; ++k) {
        report.runs.push_back({g, s, k, cfg.base_seed + static_cast<std::uint64_t>(k), {}});
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < report.runs.size(); i = next++) {
      auto& run = report.runs[i];
      GameConfig gc;
      gc.n = run.grid.n;
      gc.m = run.grid.m;
      gc.seed = run.seed;
      gc.timeout_ms = cfg.timeout_ms;
      gc.strategy = run.strategy;
      gc.canonicalize = cfg.canonicalize;
      gc.warm_start = cfg.warm_start;
      run.result = run_game(gc);
      spdlog::debug("{} {} game {}: {} in {} steps", to_string(run.grid), to_string(run.strategy), run.game,
                   run.result.won ? "won" : "lost", run.result.total_steps);
    }
  };
  const int threads = std::min<int>(cfg.jobs, static_cast<int>(report.runs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  report.cells = aggregate(report.runs);

  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ReportIoError("cannot create " + cfg.out_dir.string() + ": " + ec.message());
    auto iters = open_out(cfg.out_dir / "iterations.jsonl");
    auto games = open_out(cfg.out_dir / "games.jsonl");
    for (const auto& run : report.runs) {
      for (const auto& rec : run.result.iterations) iters << iteration_line(run, rec).dump() << '\n';
      games << game_line(run).dump() << '\n';
    }
    emit_report(report.cells, ReportFormat::csv, cfg.out_dir / "report.csv");
    emit_report(report.cells, ReportFormat::jsonl, cfg.out_dir / "report.jsonl");
  }
  return report;
}

std::vector<GameRun> load_runs(const std::filesystem::path& iterations, const std::filesystem::path& games) {
  std::vector<GameRun> runs;
  std::map<std::tuple<std::string, std::string, int>, std::size_t> index;
  auto games_in = open_in(games);
  std::string line;
  while (std::getline(games_in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    GameRun run;
    run.grid = parse_grid(j.at("grid").get<std::string>());
    run.strategy = strategy_from(j.at("strategy").get<std::string>(), games);
    run.game = j.at("game").get<int>();
    run.seed = j.at("seed").get<std::uint64_t>();
    run.result.won = j.at("won").get<bool>();
    run.result.total_steps = j.at("total_steps").get<long>();
    run.result.total_ms = j.at("total_ms").get<double>();
    run.result.final_length = j.at("final_length").get<int>();
    run.result.invalid_paths = j.at("invalid_paths").get<int>();
    run.result.diagnostic = j.at("diagnostic").get<std::string>();
    index[{j.at("grid").get<std::string>(), std::string(to_string(run.strategy)), run.game}] = runs.size();
    runs.push_back(std::move(run));
  }
  auto iters_in = open_in(iterations);
  while (std::getline(iters_in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const auto strategy = strategy_from(j.at("strategy").get<std::string>(), iterations);
    auto it = index.find({j.at("grid").get<std::string>(), std::string(to_string(strategy)), j.at("game").get<int>()});
    if (it == index.end()) throw ReportIoError(iterations.string() + ": iteration for an unknown game");
    IterationRecord rec;
    rec.iteration = j.at("iter").get<int>();
    rec.length = j.at("len").get<int>();
    rec.apple = j.at("apple").get<Coord>();
    rec.steps = j.at("steps").get<long>();
    rec.solve_ms = j.at("solve_ms").get<double>();
    if (!j.at("objective").is_null()) rec.objective = j.at("objective").get<int>();
    rec.optimal = j.at("optimal").get<bool>();
    rec.timed_out = j.at("timeout").get<bool>();
    runs[it->second].result.iterations.push_back(rec);
  }
  return runs;
}

void emit_report(const std::vector<BenchCell>& cells, ReportFormat format, const std::filesystem::path& file) {
  auto out = open_out(file);
  if (format == ReportFormat::csv) {
    out << "grid,strategy,games,win_rate,mean_total_steps,mean_total_time_ms,timeout_rate\n";
    for (const auto& c : cells) {
      out << fmt::format("{},{},{},{},{},{},{}\n", to_string(c.grid), to_string(c.strategy), c.games, c.win_rate,
                         c.mean_total_steps, c.mean_total_time_ms, c.timeout_rate);
    }
  } else {
    for (const auto& c : cells) {
      nlohmann::json j{{"grid", to_string(c.grid)},
                       {"strategy", std::string(to_string(c.strategy))},
                       {"games", c.games},
                       {"wins", c.wins},
                       {"win_rate", c.win_rate},
                       {"mean_total_steps", c.mean_total_steps},
                       {"mean_total_time_ms", c.mean_total_time_ms},
                       {"timeout_rate", c.timeout_rate},
                       {"timeout_rate_by_iter", c.timeout_rate_by_iter}};
      out << j.dump() << '\n';
    }
  }
  if (!out) throw ReportIoError("failed writing " + file.string());
}

std::vector<BenchCell> read_report_csv(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::string line;
  std::getline(in, line);
  if (line != "grid,strategy,games,win_rate,mean_total_steps,mean_total_time_ms,timeout_rate") {
    throw ReportIoError(file.string() + ": unexpected header");
  }
  std::vector<BenchCell> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, ',');) f.push_back(part);
    if (f.size() != 7) throw ReportIoError(file.string() + ": bad row '" + line + "'");
    BenchCell c;
    c.grid = parse_grid(f[0]);
    c.strategy = strategy_from(f[1], file);
    c.games = std::stoi(f[2]);
    c.win_rate = std::stod(f[3]);
    c.wins = static_cast<int>(std::lround(c.win_rate * c.games));
    c.mean_total_steps = std::stod(f[4]);
    c.mean_total_time_ms = std::stod(f[5]);
    c.timeout_rate = std::stod(f[6]);
    cells.push_back(c);
  }
  return cells;
}

}  // namespace snake
