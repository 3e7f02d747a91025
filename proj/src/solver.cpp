#include "snake/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace snake {

namespace {

using Clock = std::chrono::steady_clock;

enum class Kind : std::uint8_t { fixed, learned_global, guarded, call_scoped };

// Guarded clauses only fire once their guard is assumed at a decision level,
// so every clause derived from one keeps the negated guard.
bool persistent(Kind k) { return k != Kind::call_scoped; }

struct Clause {
  std::vector<Lit> lits;
  Kind kind = Kind::fixed;
  bool learnt = false;
  bool deleted = false;
  double activity = 0.0;
};

struct Watcher {
  int cref;
  Lit blocker;
};

enum class ReasonKind : std::uint8_t { none, clause, subtour, bound };

struct Reason {
  ReasonKind kind = ReasonKind::none;
  int data = -1;
};

struct Conflict {
  bool present = false;
  std::vector<Lit> lits;
  bool global = true;
};

// Undo record for one fragment merge in the coverage propagator.
struct Merge {
  int trail_pos;
  int from;
  int to;
  int start;
  int end;
  int old_end_of_start;
  int old_end_of_end;
  int old_len_start;
  int old_len_end;
};

double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    seq++;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}

constexpr std::size_t kGlobalLearnedCap = 100000;
constexpr std::uint64_t kDeadlineCheckInterval = 1024;
constexpr int kRestartBase = 100;

}  // namespace

void SearchContext::add_clause(const std::vector<SignedEdge>& lits) {
  if (!*active_) throw NotInCallback("clauses can only be injected from inside an on_model callback");
  std::vector<Lit> clause;
  for (const auto& l : lits) clause.push_back(Lit::make(model_->edge_var(l.edge), l.value));
  injected_->push_back(std::move(clause));
}

struct Solver::Impl {
  ModelProgram model;
  int cells;
  int edges;

  // Assignment.
  std::vector<std::int8_t> value;  // 1 true, -1 false, 0 unassigned
  std::vector<int> level;
  std::vector<Reason> reason;
  std::vector<char> taint0;  // level-0 literal derived from call-scoped material
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::size_t qhead = 0;

  std::vector<Clause> clauses;
  std::vector<std::vector<Watcher>> watches;

  // Branching.
  std::vector<double> activity;
  std::vector<char> phase;
  std::vector<int> heap;      // edge variables ordered by activity
  std::vector<int> heap_pos;  // -1 when absent
  double var_inc = 1.0;
  double cla_inc = 1.0;

  // Coverage propagator.
  std::vector<int> succ;
  std::vector<int> pred;
  std::vector<int> other_end;
  std::vector<int> frag_len;
  std::vector<Merge> merges;
  std::size_t theory_head = 0;

  // Objective bound.
  bool objective_active = false;
  int head_cell = -1;
  int apple_cell = -1;
  int lower_bound = 0;
  std::optional<int> bound;  // max admissible objective

  // Incremental state.
  std::vector<char> guard_released;  // indexed by var, meaningful for guards only
  int guards = 0;
  std::vector<char> activation_on;
  std::vector<Var> warm_edges;
  CyclePath warm_cycle;
  bool warm_active = false;

  // Per-call state.
  std::vector<Lit> assumptions;
  Clock::time_point deadline;
  bool deadline_hit = false;
  std::uint64_t props_since_check = 0;
  SolverStats call;
  SolverStats total;
  std::vector<char> seen;
  double max_learnts = 0;
  // Survives across calls so the kept clause set stays bounded over a game.
  double max_global_learnts = 0;

  explicit Impl(ModelProgram m)
      : model(std::move(m)), cells(model.grid().cell_count()), edges(model.edge_count()) {
    grow_vars(model.variable_count());
    for (const auto& c : model.static_clauses()) add_clause_unassigned(c, Kind::fixed, false);
    succ.assign(static_cast<std::size_t>(cells), -1);
    pred.assign(static_cast<std::size_t>(cells), -1);
    other_end.resize(static_cast<std::size_t>(cells));
    frag_len.assign(static_cast<std::size_t>(cells), 1);
    for (int c = 0; c < cells; ++c) other_end[static_cast<std::size_t>(c)] = c;
    activation_on.assign(static_cast<std::size_t>(edges), 0);
    heap_pos.assign(static_cast<std::size_t>(edges), -1);
    for (Var v = 0; v < edges; ++v) heap_insert(v);
  }

  int nvars() const { return static_cast<int>(value.size()); }

  void grow_vars(int n) {
    const auto sz = static_cast<std::size_t>(n);
    value.resize(sz, 0);
    level.resize(sz, 0);
    reason.resize(sz);
    taint0.resize(sz, 0);
    activity.resize(sz, 0.0);
    phase.resize(sz, 0);
    seen.resize(sz, 0);
    guard_released.resize(sz, 0);
    watches.resize(2 * sz);
  }

  // ---- assignment helpers -------------------------------------------------

  int val(Lit l) const {
    const int v = value[static_cast<std::size_t>(l.var())];
    return l.negative() ? -v : v;
  }

  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void enqueue(Lit l, Reason r) {
    const auto v = static_cast<std::size_t>(l.var());
    value[v] = l.negative() ? -1 : 1;
    level[v] = decision_level();
    reason[v] = r;
    if (decision_level() == 0) taint0[v] = reason_tainted(l, r) ? 1 : 0;
    trail.push_back(l);
  }

  bool reason_tainted(Lit l, Reason r) {
    if (r.kind == ReasonKind::none) return false;
    if (r.kind == ReasonKind::bound) return true;
    bool global = true;
    std::vector<Lit> lits = explain(l.var(), r, global, false);
    if (!global) return true;
    for (std::size_t i = 1; i < lits.size(); ++i) {
      if (taint0[static_cast<std::size_t>(lits[i].var())]) return true;
    }
    return false;
  }

  void new_decision_level() { trail_lim.push_back(static_cast<int>(trail.size())); }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    const auto keep = static_cast<std::size_t>(trail_lim[static_cast<std::size_t>(lvl)]);
    undo_merges(keep);
    for (std::size_t i = trail.size(); i-- > keep;) {
      const auto v = static_cast<std::size_t>(trail[i].var());
      phase[v] = value[v] > 0 ? 1 : 0;
      value[v] = 0;
      reason[v] = {};
      if (trail[i].var() < edges && heap_pos[v] < 0) heap_insert(trail[i].var());
    }
    trail.resize(keep);
    trail_lim.resize(static_cast<std::size_t>(lvl));
    qhead = std::min(qhead, keep);
    theory_head = std::min(theory_head, keep);
  }

  // Drops the whole assignment, level 0 included.
  void reset_assignment() {
    cancel_until(0);
    undo_merges(0);
    for (Lit l : trail) {
      const auto v = static_cast<std::size_t>(l.var());
      value[v] = 0;
      reason[v] = {};
      taint0[v] = 0;
      if (l.var() < edges && heap_pos[v] < 0) heap_insert(l.var());
    }
    trail.clear();
    qhead = 0;
    theory_head = 0;
  }

  // ---- clause database ----------------------------------------------------

  static std::vector<Lit> normalize(std::vector<Lit> lits, bool& tautology) {
    std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) { return a.code < b.code; });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    tautology = false;
    for (std::size_t i = 1; i < lits.size(); ++i) {
      if (lits[i].var() == lits[i - 1].var()) tautology = true;
    }
    return lits;
  }

  void attach(int cref) {
    const auto& c = clauses[static_cast<std::size_t>(cref)];
    if (c.lits.size() < 2) return;
    watches[static_cast<std::size_t>((~c.lits[0]).code)].push_back({cref, c.lits[1]});
    watches[static_cast<std::size_t>((~c.lits[1]).code)].push_back({cref, c.lits[0]});
  }

  int store(std::vector<Lit> lits, Kind kind, bool learnt) {
    Clause c;
    c.lits = std::move(lits);
    c.kind = kind;
    c.learnt = learnt;
    clauses.push_back(std::move(c));
    return static_cast<int>(clauses.size()) - 1;
  }

  // For use while nothing is assigned (between calls).
  void add_clause_unassigned(std::vector<Lit> lits, Kind kind, bool learnt) {
    bool taut = false;
    lits = normalize(std::move(lits), taut);
    if (taut) return;
    attach(store(std::move(lits), kind, learnt));
  }

  // Adds a clause at decision level 0 of a running call. Returns false on a
  // root-level conflict.
  bool add_clause_root(std::vector<Lit> lits, Kind kind) {
    bool taut = false;
    lits = normalize(std::move(lits), taut);
    if (taut) return true;
    std::stable_partition(lits.begin(), lits.end(), [this](Lit l) { return val(l) >= 0; });
    const int cref = store(lits, kind, false);
    if (lits.empty() || val(lits[0]) < 0) return false;
    if (lits.size() == 1 || val(lits[1]) < 0) {
      attach(cref);
      if (val(lits[0]) == 0) enqueue(lits[0], {ReasonKind::clause, cref});
      return true;
    }
    attach(cref);
    return true;
  }

  void remove_call_scoped() {
    for (auto& c : clauses) {
      if (c.kind == Kind::call_scoped) c.deleted = true;
    }
    compact();
  }

  void compact() {
    std::vector<Clause> kept;
    kept.reserve(clauses.size());
    for (auto& c : clauses) {
      if (!c.deleted) kept.push_back(std::move(c));
    }
    clauses = std::move(kept);
    for (auto& w : watches) w.clear();
    for (int i = 0; i < static_cast<int>(clauses.size()); ++i) attach(i);
  }

  void purge_deleted_watches() {
    for (auto& ws : watches) {
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [this](const Watcher& w) {
                                return clauses[static_cast<std::size_t>(w.cref)].deleted;
                              }),
               ws.end());
    }
  }

  bool locked(int cref) const {
    const auto& c = clauses[static_cast<std::size_t>(cref)];
    if (c.lits.empty()) return false;
    const auto v = static_cast<std::size_t>(c.lits[0].var());
    return val(c.lits[0]) > 0 && reason[v].kind == ReasonKind::clause && reason[v].data == cref;
  }

  // Called at decision level 0 only.
  void reduce_db() {
    std::vector<int> scoped;
    std::vector<int> global;
    for (int i = 0; i < static_cast<int>(clauses.size()); ++i) {
      const auto& c = clauses[static_cast<std::size_t>(i)];
      if (c.deleted || !c.learnt || c.lits.size() <= 2 || locked(i)) continue;
      (c.kind == Kind::learned_global ? global : scoped).push_back(i);
    }
    auto by_activity = [this](int a, int b) {
      return clauses[static_cast<std::size_t>(a)].activity < clauses[static_cast<std::size_t>(b)].activity;
    };
    bool changed = false;
    if (static_cast<double>(scoped.size()) > max_learnts) {
      std::sort(scoped.begin(), scoped.end(), by_activity);
      for (std::size_t i = 0; i < scoped.size() / 2; ++i) {
        auto& c = clauses[static_cast<std::size_t>(scoped[i])];
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
      }
      max_learnts *= 1.1;
      changed = true;
    }
    if (static_cast<double>(global.size()) > max_global_learnts || global.size() > kGlobalLearnedCap) {
      std::sort(global.begin(), global.end(), by_activity);
      const std::size_t drop = std::max(global.size() / 2, global.size() - std::min(global.size(), kGlobalLearnedCap));
      for (std::size_t i = 0; i < drop; ++i) {
        auto& c = clauses[static_cast<std::size_t>(global[i])];
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
      }
      max_global_learnts = std::min(max_global_learnts * 1.1, static_cast<double>(kGlobalLearnedCap));
      changed = true;
    }
    if (changed) purge_deleted_watches();
  }

  // ---- branching heap -----------------------------------------------------

  bool heap_less(int a, int b) const {
    const double aa = activity[static_cast<std::size_t>(a)];
    const double ab = activity[static_cast<std::size_t>(b)];
    return aa > ab || (aa == ab && a < b);
  }

  void heap_up(std::size_t i) {
    const int v = heap[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap[parent])) break;
      heap[i] = heap[parent];
      heap_pos[static_cast<std::size_t>(heap[i])] = static_cast<int>(i);
      i = parent;
    }
    heap[i] = v;
    heap_pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }

  void heap_down(std::size_t i) {
    const int v = heap[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap.size()) break;
      if (child + 1 < heap.size() && heap_less(heap[child + 1], heap[child])) child++;
      if (!heap_less(heap[child], v)) break;
      heap[i] = heap[child];
      heap_pos[static_cast<std::size_t>(heap[i])] = static_cast<int>(i);
      i = child;
    }
    heap[i] = v;
    heap_pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }

  void heap_insert(int v) {
    heap.push_back(v);
    heap_up(heap.size() - 1);
  }

  int heap_pop() {
    const int top = heap.front();
    heap_pos[static_cast<std::size_t>(top)] = -1;
    heap.front() = heap.back();
    heap.pop_back();
    if (!heap.empty()) heap_down(0);
    return top;
  }

  void bump_var(Var v) {
    auto& a = activity[static_cast<std::size_t>(v)];
    a += var_inc;
    if (a > 1e100) {
      for (auto& x : activity) x *= 1e-100;
      var_inc *= 1e-100;
    }
    if (v < edges && heap_pos[static_cast<std::size_t>(v)] >= 0) {
      heap_up(static_cast<std::size_t>(heap_pos[static_cast<std::size_t>(v)]));
    }
  }

  void bump_clause(Clause& c) {
    c.activity += cla_inc;
    if (c.activity > 1e20) {
      for (auto& x : clauses) x.activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  void decay() {
    var_inc /= 0.95;
    cla_inc /= 0.999;
  }

  // ---- coverage propagator ------------------------------------------------

  void undo_merges(std::size_t keep) {
    while (!merges.empty() && static_cast<std::size_t>(merges.back().trail_pos) >= keep) {
      const Merge& m = merges.back();
      frag_len[static_cast<std::size_t>(m.end)] = m.old_len_end;
      frag_len[static_cast<std::size_t>(m.start)] = m.old_len_start;
      other_end[static_cast<std::size_t>(m.end)] = m.old_end_of_end;
      other_end[static_cast<std::size_t>(m.start)] = m.old_end_of_start;
      succ[static_cast<std::size_t>(m.from)] = -1;
      pred[static_cast<std::size_t>(m.to)] = -1;
      merges.pop_back();
    }
  }

  std::optional<Var> edge_between(int from, int to) const {
    for (Var v : model.out_edges(from)) {
      if (model.edge_to(v) == to) return v;
    }
    return std::nullopt;
  }

  // Negated edges along the processed successor chain from `from` to `to`.
  void chain_lits(int from, int to, std::vector<Lit>& out) const {
    int c = from;
    while (c != to) {
      const int n = succ[static_cast<std::size_t>(c)];
      out.push_back(Lit::make(*edge_between(c, n), false));
      c = n;
    }
  }

  std::vector<Lit> explain(Var v, Reason r, bool& global, bool bump) {
    std::vector<Lit> lits;
    switch (r.kind) {
      case ReasonKind::clause: {
        auto& c = clauses[static_cast<std::size_t>(r.data)];
        if (!persistent(c.kind)) global = false;
        if (bump && c.learnt) bump_clause(c);
        lits = c.lits;
        break;
      }
      case ReasonKind::subtour: {
        // not(end -> start) because start..end is a fragment shorter than n*m.
        lits.push_back(Lit::make(v, false));
        chain_lits(r.data, model.edge_from(v), lits);
        break;
      }
      case ReasonKind::bound: {
        global = false;
        lits.push_back(Lit::make(v, false));
        chain_lits(head_cell, r.data, lits);
        break;
      }
      case ReasonKind::none:
        break;
    }
    return lits;
  }

  // Subtour clause over the closed cycle through `from -> to`.
  Conflict subtour_conflict(int from, int to) {
    Conflict k;
    k.present = true;
    k.global = true;
    k.lits.push_back(Lit::make(*edge_between(from, to), false));
    chain_lits(to, from, k.lits);
    // Keep the two most recent literals in front so the stored clause is
    // watched correctly after backjumping.
    std::sort(k.lits.begin(), k.lits.end(), [this](Lit a, Lit b) {
      return level[static_cast<std::size_t>(a.var())] > level[static_cast<std::size_t>(b.var())];
    });
    const int cref = store(k.lits, Kind::learned_global, true);
    attach(cref);
    call.learned_global++;
    return k;
  }

  Conflict theory_propagate() {
    while (theory_head < trail.size()) {
      const std::size_t pos = theory_head++;
      const Lit p = trail[pos];
      if (p.negative() || p.var() >= edges) continue;
      const int u = model.edge_from(p.var());
      const int v = model.edge_to(p.var());
      const int start = other_end[static_cast<std::size_t>(u)];
      const int end = other_end[static_cast<std::size_t>(v)];
      Merge mg{static_cast<int>(pos),
               u,
               v,
               start,
               end,
               other_end[static_cast<std::size_t>(start)],
               other_end[static_cast<std::size_t>(end)],
               frag_len[static_cast<std::size_t>(start)],
               frag_len[static_cast<std::size_t>(end)]};
      merges.push_back(mg);
      succ[static_cast<std::size_t>(u)] = v;
      pred[static_cast<std::size_t>(v)] = u;
      if (end == u) {
        if (frag_len[static_cast<std::size_t>(u)] < cells) return subtour_conflict(u, v);
        continue;
      }
      const int len = frag_len[static_cast<std::size_t>(start)] + frag_len[static_cast<std::size_t>(end)];
      other_end[static_cast<std::size_t>(start)] = end;
      other_end[static_cast<std::size_t>(end)] = start;
      frag_len[static_cast<std::size_t>(start)] = len;
      frag_len[static_cast<std::size_t>(end)] = len;
      if (len < cells) {
        if (auto closing = edge_between(end, start); closing && value[static_cast<std::size_t>(*closing)] == 0) {
          enqueue(Lit::make(*closing, false), {ReasonKind::subtour, start});
        }
      }
    }
    return bound_propagate();
  }

  Conflict bound_propagate() {
    if (!objective_active || !bound) return {};
    const int limit = *bound;
    int c = head_cell;
    int count = 1;
    while (c != apple_cell && succ[static_cast<std::size_t>(c)] >= 0 && count <= limit) {
      c = succ[static_cast<std::size_t>(c)];
      count++;
    }
    if (c == apple_cell) {
      if (count <= limit) return {};
      Conflict k;
      k.present = true;
      k.global = false;
      chain_lits(head_cell, c, k.lits);
      return k;
    }
    const Coord cc = model.grid().coord(c);
    const Coord ac = model.grid().coord(apple_cell);
    const int remaining = manhattan(cc, ac);
    if (count + remaining > limit) {
      Conflict k;
      k.present = true;
      k.global = false;
      chain_lits(head_cell, c, k.lits);
      return k;
    }
    if (count + remaining == limit) {
      for (Var e : model.out_edges(c)) {
        if (value[static_cast<std::size_t>(e)] != 0) continue;
        if (manhattan(model.grid().coord(model.edge_to(e)), ac) > remaining) {
          enqueue(Lit::make(e, false), {ReasonKind::bound, c});
        }
      }
    }
    return {};
  }

  // ---- propagation --------------------------------------------------------

  Conflict propagate() {
    for (;;) {
      while (qhead < trail.size()) {
        const Lit p = trail[qhead++];
        call.propagations++;
        if (++props_since_check >= kDeadlineCheckInterval) {
          props_since_check = 0;
          if (deadline_armed() && Clock::now() >= deadline) {
            deadline_hit = true;
            return {};
          }
        }
        auto& ws = watches[static_cast<std::size_t>(p.code)];
        const Lit false_lit = ~p;
        std::size_t i = 0;
        std::size_t j = 0;
        const std::size_t n = ws.size();
        while (i < n) {
          Watcher w = ws[i++];
          if (val(w.blocker) > 0) {
            ws[j++] = w;
            continue;
          }
          auto& c = clauses[static_cast<std::size_t>(w.cref)].lits;
          if (c[0] == false_lit) std::swap(c[0], c[1]);
          const Lit first = c[0];
          if (first != w.blocker && val(first) > 0) {
            ws[j++] = {w.cref, first};
            continue;
          }
          bool moved = false;
          for (std::size_t k = 2; k < c.size(); ++k) {
            if (val(c[k]) >= 0) {
              std::swap(c[1], c[k]);
              watches[static_cast<std::size_t>((~c[1]).code)].push_back({w.cref, first});
              moved = true;
              break;
            }
          }
          if (moved) continue;
          ws[j++] = {w.cref, first};
          if (val(first) < 0) {
            while (i < n) ws[j++] = ws[i++];
            ws.resize(j);
            qhead = trail.size();
            Conflict k;
            k.present = true;
            const auto& cl = clauses[static_cast<std::size_t>(w.cref)];
            k.global = persistent(cl.kind);
            k.lits = cl.lits;
            if (cl.learnt) bump_clause(clauses[static_cast<std::size_t>(w.cref)]);
            return k;
          }
          enqueue(first, {ReasonKind::clause, w.cref});
        }
        ws.resize(j);
      }
      const std::size_t before = trail.size();
      Conflict k = theory_propagate();
      if (k.present) return k;
      if (trail.size() == before) return {};
    }
  }

  bool deadline_armed() const {
    return !warm_active || call.models > 0 || val(Lit::make(model.dummy_var())) < 0;
  }

  // ---- conflict analysis --------------------------------------------------

  void analyze(const Conflict& confl, std::vector<Lit>& learnt, int& bt_level, bool& global) {
    global = confl.global;
    learnt.assign(1, Lit{});
    int path = 0;
    Lit p{};
    std::vector<Lit> lits = confl.lits;
    std::size_t first = 0;
    std::size_t index = trail.size();
    for (;;) {
      for (std::size_t i = first; i < lits.size(); ++i) {
        const Lit q = lits[i];
        const auto v = static_cast<std::size_t>(q.var());
        if (level[v] == 0) {
          if (taint0[v]) global = false;
          continue;
        }
        if (seen[v]) continue;
        seen[v] = 1;
        bump_var(q.var());
        if (level[v] >= decision_level()) {
          path++;
        } else {
          learnt.push_back(q);
        }
      }
      do {
        --index;
      } while (!seen[static_cast<std::size_t>(trail[index].var())]);
      p = trail[index];
      seen[static_cast<std::size_t>(p.var())] = 0;
      if (--path == 0) break;
      lits = explain(p.var(), reason[static_cast<std::size_t>(p.var())], global, true);
      first = 1;
    }
    learnt[0] = ~p;

    bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i) {
        if (level[static_cast<std::size_t>(learnt[i].var())] >
            level[static_cast<std::size_t>(learnt[max_i].var())]) {
          max_i = i;
        }
      }
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level[static_cast<std::size_t>(learnt[1].var())];
    }
    for (Lit l : learnt) seen[static_cast<std::size_t>(l.var())] = 0;
  }

  // ---- search -------------------------------------------------------------

  Lit pick_branch() {
    const Var d = model.dummy_var();
    if (warm_active && value[static_cast<std::size_t>(d)] == 0) {
      return Lit::make(d, phase[static_cast<std::size_t>(d)] != 0);
    }
    while (!heap.empty()) {
      const int v = heap_pop();
      if (value[static_cast<std::size_t>(v)] == 0) return Lit::make(v, phase[static_cast<std::size_t>(v)] != 0);
    }
    return Lit{};
  }

  CyclePath extract_cycle() const {
    CyclePath cycle;
    cycle.reserve(static_cast<std::size_t>(cells));
    int c = objective_active ? head_cell : 0;
    for (int i = 0; i < cells; ++i) {
      cycle.push_back(model.grid().coord(c));
      c = succ[static_cast<std::size_t>(c)];
    }
    return cycle;
  }

  bool satisfied_now(const std::vector<Lit>& clause) const {
    return std::any_of(clause.begin(), clause.end(), [this](Lit l) { return val(l) > 0; });
  }

  SolveOutcome run(const SolveOptions& opts) {
    try {
      return run_body(opts);
    } catch (...) {
      reset_assignment();
      remove_call_scoped();
      bound.reset();
      throw;
    }
  }

  SolveOutcome run_body(const SolveOptions& opts) {
    const auto started = Clock::now();
    if (!(opts.deadline_ms > 0.0)) throw std::invalid_argument("solve deadline must be positive");
    deadline = started + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double, std::milli>(opts.deadline_ms));
    deadline_hit = false;
    props_since_check = 0;
    call = {};

    const auto heads = model.true_heads();
    const auto apples = model.true_apples();
    if (heads.size() > 1) throw ModelContractViolation("more than one head atom is true");
    if (apples.size() > 1) throw ModelContractViolation("more than one apple atom is true");
    objective_active = heads.size() == 1 && apples.size() == 1;
    if (objective_active && heads[0] == apples[0]) {
      throw ModelContractViolation("head and apple coincide at " + to_string(heads[0]));
    }
    if (objective_active) {
      head_cell = model.grid().index(heads[0]);
      apple_cell = model.grid().index(apples[0]);
      lower_bound = manhattan(heads[0], apples[0]) + 1;
    }
    bound.reset();

    // Guards, activations and the caller's literals are decided first, one
    // level each.
    assumptions.clear();
    for (GuardLit g : opts.guards) {
      if (g.var < model.variable_count() || g.var >= nvars()) throw SolverError("unknown guard literal");
      if (guard_released[static_cast<std::size_t>(g.var)]) {
        throw GuardReleased("guard " + std::to_string(g.var) + " was released");
      }
      assumptions.push_back(Lit::make(g.var));
    }
    for (Var e = 0; e < edges; ++e) {
      if (activation_on[static_cast<std::size_t>(e)]) assumptions.push_back(Lit::make(model.activation_var(e)));
    }
    for (const auto& a : opts.assumptions) assumptions.push_back(Lit::make(model.edge_var(a.edge), a.value));

    if (warm_active) {
      const Var d = model.dummy_var();
      for (Var e : warm_edges) add_clause_unassigned({Lit::make(d, false), Lit::make(e)}, Kind::call_scoped, false);
      phase[static_cast<std::size_t>(d)] = 1;
      for (Var e = 0; e < edges; ++e) phase[static_cast<std::size_t>(e)] = 0;
      for (Var e : warm_edges) phase[static_cast<std::size_t>(e)] = 1;
    }
    max_learnts = std::max(2000.0, static_cast<double>(clauses.size()) / 3.0);
    if (max_global_learnts == 0) max_global_learnts = max_learnts;

    SolveOutcome out;
    bool exhausted = false;
    bool stop = false;

    for (int i = 0; i < static_cast<int>(clauses.size()); ++i) {
      const auto& c = clauses[static_cast<std::size_t>(i)];
      if (c.deleted) continue;
      if (c.lits.empty()) {
        exhausted = true;
      } else if (c.lits.size() == 1) {
        const int vv = val(c.lits[0]);
        if (vv < 0) exhausted = true;
        if (vv == 0) enqueue(c.lits[0], {ReasonKind::clause, i});
      }
    }

    int restart_count = 0;
    std::uint64_t conflicts_to_restart =
        static_cast<std::uint64_t>(luby(2.0, restart_count) * kRestartBase);
    std::uint64_t conflicts_this_restart = 0;
    std::vector<Lit> learnt;

    while (!exhausted && !stop) {
      Conflict confl = propagate();
      if (deadline_hit) {
        out.timed_out = true;
        break;
      }
      if (confl.present) {
        call.conflicts++;
        conflicts_this_restart++;
        int max_level = 0;
        for (Lit l : confl.lits) max_level = std::max(max_level, level[static_cast<std::size_t>(l.var())]);
        if (max_level == 0) {
          exhausted = true;
          break;
        }
        if (max_level < decision_level()) cancel_until(max_level);
        int bt = 0;
        bool global = true;
        analyze(confl, learnt, bt, global);
        cancel_until(bt);
        const Kind kind = global ? Kind::learned_global : Kind::call_scoped;
        (global ? call.learned_global : call.learned_call)++;
        const int cref = store(learnt, kind, true);
        attach(cref);
        bump_clause(clauses[static_cast<std::size_t>(cref)]);
        enqueue(learnt[0], {ReasonKind::clause, cref});
        decay();
        continue;
      }

      if (conflicts_this_restart >= conflicts_to_restart) {
        cancel_until(0);
        call.restarts++;
        restart_count++;
        conflicts_this_restart = 0;
        conflicts_to_restart = static_cast<std::uint64_t>(luby(2.0, restart_count) * kRestartBase);
        reduce_db();
        continue;
      }

      Lit next{};
      while (decision_level() < static_cast<int>(assumptions.size())) {
        const Lit a = assumptions[static_cast<std::size_t>(decision_level())];
        if (val(a) > 0) {
          new_decision_level();
        } else if (val(a) < 0) {
          exhausted = true;
          break;
        } else {
          next = a;
          break;
        }
      }
      if (exhausted) break;

      if (!next.valid()) {
        next = pick_branch();
        if (next.valid()) call.decisions++;
      }
      if (next.valid()) {
        new_decision_level();
        enqueue(next, {});
        continue;
      }

      // Every decision variable is assigned: a model.
      CyclePath cycle = extract_cycle();
      std::optional<int> objective;
      if (objective_active) objective = objective_of(cycle, heads[0], apples[0]);
      const bool dummy = val(Lit::make(model.dummy_var())) > 0;
      call.models++;
      if (call.models == 1) out.first_model_dummy = dummy;

      std::vector<std::vector<Lit>> injected;
      if (opts.on_model) {
        SearchContext ctx;
        ctx.model_ = &model;
        ctx.cycle_ = &cycle;
        ctx.objective_ = objective;
        ctx.dummy_ = dummy;
        *ctx.active_ = true;
        try {
          opts.on_model(ctx);
        } catch (...) {
          *ctx.active_ = false;
          throw;
        }
        *ctx.active_ = false;
        injected = std::move(*ctx.injected_);
      }
      const bool accepted = std::all_of(injected.begin(), injected.end(),
                                        [this](const std::vector<Lit>& c) { return satisfied_now(c); });
      if (!injected.empty()) out.restricted_search = true;
      if (accepted) {
        out.incumbent = cycle;
        out.objective = objective;
        if (objective) out.objective_trace.push_back(*objective);
      }

      if (!objective_active || !opts.bound_objective) {
        if (accepted) {
          stop = true;
          break;
        }
      } else if (accepted) {
        if (*objective <= lower_bound) {
          exhausted = true;
          break;
        }
        bound = *objective - 1;
      }
      if (Clock::now() >= deadline) {
        out.timed_out = true;
        break;
      }
      cancel_until(0);
      for (auto& c : injected) {
        // Units ride along as assumptions: clauses learned under them stay
        // reusable instead of being tainted by a call-scoped root fact.
        if (c.size() == 1) {
          assumptions.push_back(c[0]);
        } else if (!add_clause_root(std::move(c), Kind::call_scoped)) {
          exhausted = true;
        }
      }
    }

    if (exhausted) {
      if (out.incumbent) {
        out.status = SolveStatus::optimal;
        out.optimal_proven = objective_active && opts.bound_objective;
        if (!out.optimal_proven) out.status = SolveStatus::satisfiable;
      } else {
        out.status = SolveStatus::unsat;
      }
    } else if (out.incumbent) {
      out.status = SolveStatus::satisfiable;
    } else {
      out.status = SolveStatus::unknown;
    }

    reset_assignment();
    remove_call_scoped();
    bound.reset();

    out.stats = call;
    total.decisions += call.decisions;
    total.conflicts += call.conflicts;
    total.propagations += call.propagations;
    total.restarts += call.restarts;
    total.learned_global += call.learned_global;
    total.learned_call += call.learned_call;
    total.models += call.models;
    out.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    return out;
  }
};

Solver::Solver(ModelProgram model) : impl_(std::make_unique<Impl>(std::move(model))) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

const ModelProgram& Solver::model() const { return impl_->model; }

void Solver::set_external(Atom atom, bool value) { impl_->model.set_external(atom, value); }

void Solver::add_static_clause(const std::vector<SignedEdge>& lits) {
  std::vector<Lit> clause;
  for (const auto& l : lits) clause.push_back(Lit::make(impl_->model.edge_var(l.edge), l.value));
  impl_->add_clause_unassigned(std::move(clause), Kind::fixed, false);
}

GuardLit Solver::new_guard() {
  const Var v = impl_->nvars();
  impl_->grow_vars(v + 1);
  impl_->guards++;
  return GuardLit{v};
}

bool Solver::released(GuardLit guard) const {
  return guard.var >= 0 && guard.var < impl_->nvars() && impl_->guard_released[static_cast<std::size_t>(guard.var)];
}

void Solver::add_guarded_constraints(GuardLit guard, const std::vector<EdgeLit>& lits) {
  if (guard.var <= impl_->model.variable_count() - 1 || guard.var >= impl_->nvars()) {
    throw SolverError("unknown guard literal");
  }
  if (released(guard)) throw GuardReleased("guard " + std::to_string(guard.var) + " was released");
  for (const auto& e : lits) {
    impl_->add_clause_unassigned({Lit::make(guard.var, false), Lit::make(impl_->model.edge_var(e))},
                                 Kind::guarded, false);
  }
}

void Solver::release_guard(GuardLit guard) {
  if (guard.var <= impl_->model.variable_count() - 1 || guard.var >= impl_->nvars()) {
    throw SolverError("unknown guard literal");
  }
  auto& flag = impl_->guard_released[static_cast<std::size_t>(guard.var)];
  if (flag) return;
  flag = 1;
  impl_->add_clause_unassigned({Lit::make(guard.var, false)}, Kind::fixed, false);
}

void Solver::cleanup() {
  auto& im = *impl_;
  for (auto& c : im.clauses) {
    for (Lit l : c.lits) {
      if (l.negative() && l.var() >= im.model.variable_count() && im.guard_released[static_cast<std::size_t>(l.var())]) {
        c.deleted = true;
        break;
      }
    }
  }
  im.compact();
}

void Solver::set_activation(EdgeLit edge, bool value) {
  const Var e = impl_->model.edge_var(edge);
  impl_->activation_on[static_cast<std::size_t>(e)] = value ? 1 : 0;
}

bool Solver::activation(EdgeLit edge) const {
  return impl_->activation_on[static_cast<std::size_t>(impl_->model.edge_var(edge))] != 0;
}

void Solver::set_warm_start(const CyclePath& cycle) {
  auto& im = *impl_;
  if (auto check = validate_hc(im.model.grid(), cycle); !check) {
    throw InvalidCycle("warm start is not a Hamiltonian cycle: " + check.diagnostic);
  }
  im.warm_edges.clear();
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Coord a = cycle[i];
    const Coord b = cycle[(i + 1) % cycle.size()];
    im.warm_edges.push_back(im.model.edge_var({a, b}));
  }
  im.warm_cycle = cycle;
  im.warm_active = true;
}

void Solver::clear_warm_start() {
  impl_->warm_active = false;
  impl_->warm_edges.clear();
  impl_->warm_cycle.clear();
}

bool Solver::has_warm_start() const { return impl_->warm_active; }

SolveOutcome Solver::solve(const SolveOptions& opts) { return impl_->run(opts); }

std::size_t Solver::clause_count() const {
  return static_cast<std::size_t>(std::count_if(impl_->clauses.begin(), impl_->clauses.end(),
                                                [](const Clause& c) { return !c.deleted; }));
}

std::size_t Solver::static_clause_count() const {
  return static_cast<std::size_t>(std::count_if(impl_->clauses.begin(), impl_->clauses.end(), [](const Clause& c) {
    return !c.deleted && c.kind == Kind::fixed;
  }));
}

std::size_t Solver::guarded_clause_count() const {
  return static_cast<std::size_t>(std::count_if(impl_->clauses.begin(), impl_->clauses.end(), [](const Clause& c) {
    return !c.deleted && c.kind == Kind::guarded;
  }));
}

std::size_t Solver::learned_global_count() const {
  return static_cast<std::size_t>(std::count_if(impl_->clauses.begin(), impl_->clauses.end(), [](const Clause& c) {
    return !c.deleted && c.kind == Kind::learned_global;
  }));
}

int Solver::guard_count() const { return impl_->guards; }

const SolverStats& Solver::total_stats() const { return impl_->total; }

}  // namespace snake
