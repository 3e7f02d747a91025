#include "snake/strategy.hpp"

#include <algorithm>

#include "snake/model.hpp"

namespace snake {

std::string_view to_string(StrategyId id) {
  switch (id) {
    case StrategyId::oneshot: return "oneshot";
    case StrategyId::adhoc: return "adhoc";
    case StrategyId::preground: return "preground";
    case StrategyId::assume: return "assume";
    case StrategyId::nogood: return "nogood";
    case StrategyId::naive: return "naive";
  }
  return "?";
}

std::optional<StrategyId> parse_strategy(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (StrategyId id : kAllStrategies) {
    if (key == to_string(id)) return id;
  }
  return std::nullopt;
}

bool is_multishot(StrategyId id) {
  return id == StrategyId::adhoc || id == StrategyId::preground || id == StrategyId::assume ||
         id == StrategyId::nogood;
}

namespace {

bool starts_with(const CyclePath& p, const Snake& s) {
  return p.size() >= s.size() && std::equal(s.begin(), s.end(), p.begin());
}

// Shared plumbing: mirroring, warm start, externals and the final rotation.
class SolverStrategy : public Strategy {
 public:
  SolverStrategy(const GridGraph& grid, const StrategyOptions& opts) : grid_(grid), opts_(opts) {}

  RetrieveResult retrieve(const Snake& snake, Coord apple) override {
    RetrieveResult result;
    MirrorTransform t{false, false, grid_.n(), grid_.m()};
    Snake s = snake;
    Coord a = apple;
    if (opts_.canonicalize) {
      auto canon = canonicalize(grid_.n(), grid_.m(), snake, apple);
      s = std::move(canon.snake);
      a = canon.apple;
      t = canon.transform;
    }
    std::optional<CyclePath> warm;
    if (opts_.warm_start) warm = apply_transform(t, previous_ ? *previous_ : generic_hc(grid_.n(), grid_.m()));

    result.outcome = solve(s, a, warm);
    if (!result.outcome.incumbent) {
      result.diagnostic = result.outcome.status == SolveStatus::unsat ? "no cycle extends the snake"
                                                                      : "no model before the deadline";
      return result;
    }
    CyclePath cycle = rotate_to(apply_transform(t, *result.outcome.incumbent), snake.front());
    if (auto check = validate_hc(grid_, cycle); !check) {
      result.diagnostic = "solver returned an invalid cycle: " + check.diagnostic;
      return result;
    }
    if (!starts_with(cycle, snake)) {
      result.diagnostic = "solver cycle does not contain the snake";
      return result;
    }
    previous_ = cycle;
    result.path = std::move(cycle);
    return result;
  }

 protected:
  // Canonical frame. The returned incumbent starts at the head.
  virtual SolveOutcome solve(const Snake& snake, Coord apple, const std::optional<CyclePath>& warm) = 0;

  SolveOutcome run(Solver& solver, const Snake& snake, Coord apple, const std::optional<CyclePath>& warm,
                   SolveOptions opts) {
    if (warm) {
      solver.set_warm_start(*warm);
    } else {
      solver.clear_warm_start();
    }
    opts.deadline_ms = opts_.timeout_ms;
    solver.set_external(Atom::head(snake.back()), true);
    solver.set_external(Atom::apple(apple), true);
    struct Unset {
      Solver& s;
      Coord h, a;
      ~Unset() {
        s.set_external(Atom::head(h), false);
        s.set_external(Atom::apple(a), false);
      }
    } unset{solver, snake.back(), apple};
    return solver.solve(opts);
  }

  GridGraph grid_;
  StrategyOptions opts_;
};

class OneShot final : public SolverStrategy {
 public:
  using SolverStrategy::SolverStrategy;
  StrategyId id() const override { return StrategyId::oneshot; }

 protected:
  SolveOutcome solve(const Snake& snake, Coord apple, const std::optional<CyclePath>& warm) override {
    Solver solver(build_model(grid_));
    for (const auto& e : snake_edge_lits(snake)) solver.add_static_clause({{e, true}});
    return run(solver, snake, apple, warm, {});
  }
};

class MultiShot : public SolverStrategy {
 public:
  MultiShot(const GridGraph& grid, const StrategyOptions& opts)
      : SolverStrategy(grid, opts), solver_(build_model(grid)) {}
  std::size_t persistent_learned() const override { return solver_.learned_global_count(); }
  const Solver* solver() const override { return &solver_; }

 protected:
  Solver solver_;
};

class AdHoc final : public MultiShot {
 public:
  using MultiShot::MultiShot;
  StrategyId id() const override { return StrategyId::adhoc; }

 protected:
  SolveOutcome solve(const Snake& snake, Coord apple, const std::optional<CyclePath>& warm) override {
    const GuardLit guard = solver_.new_guard();
    solver_.add_guarded_constraints(guard, snake_edge_lits(snake));
    struct Release {
      Solver& s;
      GuardLit g;
      ~Release() {
        s.release_guard(g);
        s.cleanup();
      }
    } release{solver_, guard};
    SolveOptions opts;
    opts.guards.push_back(guard);
    return run(solver_, snake, apple, warm, std::move(opts));
  }
};

class Preground final : public MultiShot {
 public:
  using MultiShot::MultiShot;
  StrategyId id() const override { return StrategyId::preground; }

 protected:
  SolveOutcome solve(const Snake& snake, Coord apple, const std::optional<CyclePath>& warm) override {
    const auto edges = snake_edge_lits(snake);
    for (const auto& e : edges) solver_.set_activation(e, true);
    struct Deactivate {
      Solver& s;
      const std::vector<EdgeLit>& edges;
      ~Deactivate() {
        for (const auto& e : edges) s.set_activation(e, false);
      }
    } deactivate{solver_, edges};
    return run(solver_, snake, apple, warm, {});
  }
};

class Assume final : public MultiShot {
 public:
  using MultiShot::MultiShot;
  StrategyId id() const override { return StrategyId::assume; }

 protected:
  SolveOutcome solve(const Snake& snake, Coord apple, const std::optional<CyclePath>& warm) override {
    SolveOptions opts;
    for (const auto& e : snake_edge_lits(snake)) opts.assumptions.push_back({e, true});
    return run(solver_, snake, apple, warm, std::move(opts));
  }
};

class Nogood final : public MultiShot {
 public:
  using MultiShot::MultiShot;
  StrategyId id() const override { return StrategyId::nogood; }

 protected:
  SolveOutcome solve(const Snake& snake, Coord apple, const std::optional<CyclePath>& warm) override {
    const auto edges = snake_edge_lits(snake);
    bool first = true;
    SolveOptions opts;
    opts.on_model = [&](SearchContext& ctx) {
      if (first && !ctx.dummy()) throw ContractViolation("first model of a nogood solve lacks the dummy flag");
      first = false;
      if (!ctx.dummy()) return;
      for (const auto& e : edges) ctx.add_clause({{e, true}});
    };
    return run(solver_, snake, apple, warm, std::move(opts));
  }
};

class Naive final : public Strategy {
 public:
  explicit Naive(const GridGraph& grid) : grid_(grid) {}
  StrategyId id() const override { return StrategyId::naive; }

  RetrieveResult retrieve(const Snake& snake, Coord apple) override {
    RetrieveResult result;
    if (!previous_) previous_ = generic_hc(grid_.n(), grid_.m());
    CyclePath cycle = rotate_to(*previous_, snake.front());
    if (!starts_with(cycle, snake)) {
      result.diagnostic = "stored cycle does not contain the snake";
      return result;
    }
    result.outcome.status = SolveStatus::satisfiable;
    result.outcome.objective = objective_of(cycle, snake.back(), apple);
    result.outcome.incumbent = rotate_to(cycle, snake.back());
    result.path = std::move(cycle);
    return result;
  }

 private:
  GridGraph grid_;
};

}  // namespace

std::unique_ptr<Strategy> make_strategy(StrategyId id, const GridGraph& grid, const StrategyOptions& opts) {
  build_grid(grid.n(), grid.m());
  if (!(opts.timeout_ms > 0.0)) throw std::invalid_argument("timeout must be positive");
  switch (id) {
    case StrategyId::oneshot: return std::make_unique<OneShot>(grid, opts);
    case StrategyId::adhoc: return std::make_unique<AdHoc>(grid, opts);
    case StrategyId::preground: return std::make_unique<Preground>(grid, opts);
    case StrategyId::assume: return std::make_unique<Assume>(grid, opts);
    case StrategyId::nogood:
      if (!opts.warm_start) throw std::invalid_argument("the nogood backend needs a warm start");
      return std::make_unique<Nogood>(grid, opts);
    case StrategyId::naive: return std::make_unique<Naive>(grid);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace snake
