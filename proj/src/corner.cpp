#include "featrange/corner.hpp"

#include "featrange/cancel.hpp"

#include <deque>
#include <limits>

namespace featrange {

// ---------------------------------------------------------------- goals

Goal Goal::lt(const Rational& c) {
  Goal g;
  g.kind = Kind::Lt;
  g.c = c;
  return g;
}

Goal Goal::ge(const Rational& c) {
  Goal g;
  g.kind = Kind::Ge;
  g.c = c;
  return g;
}

Goal Goal::between(const Rational& l, const Rational& r) {
  if (r < l) throw ValidationError("goal interval is reversed");
  Goal g;
  g.kind = Kind::Between;
  g.l = l;
  g.r = r;
  return g;
}

bool Goal::admits(const Rational& v) const {
  switch (kind) {
    case Kind::Lt: return v < c;
    case Kind::Ge: return v >= c;
    case Kind::Between: return l <= v && v <= r;
  }
  return false;
}

std::string Goal::to_string() const {
  switch (kind) {
    case Kind::Lt: return "F < " + to_literal(c);
    case Kind::Ge: return "F >= " + to_literal(c);
    case Kind::Between: return to_literal(l) + " <= F <= " + to_literal(r);
  }
  return "";
}

// ---------------------------------------------------------------- path table

namespace {

struct StepForms {
  size_t loc = 0;
  std::optional<size_t> delta;  // LP column of the dwell
  std::vector<AffineForm> entry, exit;
};

struct PathRec {
  std::vector<size_t> edges;
  std::vector<StepForms> steps;
  Polyhedron poly;
  AffineForm f;
  Rational fmin, fmax;
};

AffineForm widen(AffineForm f, size_t d) {
  f.resize(d);
  return f;
}

std::vector<AffineForm> widen(std::vector<AffineForm> v, size_t d) {
  for (auto& f : v) f.resize(d);
  return v;
}

}  // namespace

struct CornerOracle::Table {
  std::vector<PathRec> paths;
  size_t nodes = 0;
  size_t work = 0;
};

CornerOracle::CornerOracle(const Lsha& l, SearchConfig cfg) : l_(l), cfg_(std::move(cfg)) {
  if (!l_.ha.is_rectangular()) throw NonRectangularFlow("corner search needs a rectangular product");
  if (cfg_.M <= 0 || cfg_.epsilon <= 0) throw ValidationError("step size and precision must be positive");
  if (cfg_.K < l_.levels + 1)
    throw ValidationError("hop bound " + std::to_string(cfg_.K) + " is below n+1 = " + std::to_string(l_.levels + 1));
}

CornerOracle::~CornerOracle() = default;
CornerOracle::CornerOracle(CornerOracle&&) noexcept = default;

size_t CornerOracle::path_count() {
  ensure();
  return table_->paths.size();
}

size_t CornerOracle::work_done() {
  ensure();
  return table_->work;
}

size_t CornerOracle::nodes_explored() {
  ensure();
  return table_->nodes;
}

void CornerOracle::ensure() {
  if (table_) return;
  auto table = std::make_unique<Table>();
  const auto& H = l_.ha;
  const size_t N = H.dim();

  // fewest counted hops from each location to the final one
  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<long> dist(H.locations.size(), inf);
  dist[l_.final_loc] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : H.edges) {
      if (e.stutter || dist[e.dst] == inf) continue;
      long d = dist[e.dst] + (l_.is_pause(e.src) ? 0 : 1);
      if (d < dist[e.src]) {
        dist[e.src] = d;
        changed = true;
      }
    }
  }

  std::vector<std::vector<size_t>> out(H.locations.size());
  for (size_t i = 0; i < H.edges.size(); ++i)
    if (!H.edges[i].stutter) out[H.edges[i].src].push_back(i);

  Polyhedron horizon(N);
  horizon.add_le({{l_.t_var, Rational(1)}}, cfg_.horizon);

  struct Frame {
    size_t loc;
    Polyhedron poly;
    std::vector<AffineForm> entry;
    size_t hops;
    std::vector<size_t> edges;
    std::vector<StepForms> steps;
  };

  auto empty = [&](const Polyhedron& p) {
    table->work += p.constraints().size() * p.dim();
    if (table->work > cfg_.max_work)
      throw ResourceExhausted("corner search exceeded its LP work budget within " + std::to_string(cfg_.K) +
                              " hops after " + std::to_string(table->nodes) + " path prefixes");
    return p.is_empty();
  };

  auto dfs = [&](auto&& self, Frame fr) -> void {
    if (++table->nodes > cfg_.max_paths)
      throw ResourceExhausted("corner search explored more than " + std::to_string(cfg_.max_paths) +
                              " path prefixes within " + std::to_string(cfg_.K) + " hops");
    if (cancel_requested()) throw ResourceExhausted("corner search interrupted");
    StepForms st;
    st.loc = fr.loc;
    if (fr.loc == l_.final_loc) {
      st.entry = st.exit = fr.entry;
      fr.steps.push_back(std::move(st));
      PathRec p;
      p.edges = std::move(fr.edges);
      p.steps = std::move(fr.steps);
      p.f = fr.entry[l_.f_var];
      p.poly = std::move(fr.poly);
      auto lo = p.poly.optimize(p.f, false), hi = p.poly.optimize(p.f, true);
      if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal) return;
      p.fmin = lo.value;
      p.fmax = hi.value;
      table->paths.push_back(std::move(p));
      return;
    }
    const bool pause = l_.is_pause(fr.loc);
    std::vector<AffineForm> exit;
    Polyhedron poly = fr.poly;
    if (pause) {
      exit = fr.entry;
    } else {
      if (fr.hops >= cfg_.K) return;
      const auto& flow = H.locations[fr.loc].flow;
      size_t extra = 1;
      for (const auto& f : flow) extra += f.lo != f.hi;
      size_t D = poly.dim() + extra;
      poly = poly.lift(extra);
      size_t delta = fr.poly.dim();
      size_t w = delta + 1;
      st.delta = delta;
      poly.add_le({{delta, Rational(-1)}}, 0);
      exit = widen(fr.entry, D);
      for (size_t j = 0; j < N; ++j) {
        const auto& f = flow[j];
        if (f.lo == f.hi) {
          if (f.lo != 0) exit[j].a[delta] += f.lo;
          continue;
        }
        exit[j].a[w] += 1;
        poly.add_le({{delta, f.lo}, {w, Rational(-1)}}, 0);
        poly.add_le({{w, Rational(1)}, {delta, -f.hi}}, 0);
        ++w;
      }
      poly.add_all(H.locations[fr.loc].inv.preimage(exit));
      poly.add_all(horizon.preimage(exit));
      if (empty(poly)) return;
    }
    size_t D = poly.dim();
    st.entry = widen(fr.entry, D);
    st.exit = exit;
    for (size_t ei : out[fr.loc]) {
      const Edge& e = H.edges[ei];
      size_t hops = fr.hops + (pause ? 0 : 1);
      if (dist[e.dst] == inf || static_cast<long>(hops) + dist[e.dst] > static_cast<long>(cfg_.K)) continue;
      Polyhedron next = poly;
      next.add_all(e.guard.preimage(exit));
      std::vector<AffineForm> entry;
      entry.reserve(N);
      for (const auto& r : e.reset) entry.push_back(compose(r, exit));
      next.add_all(H.locations[e.dst].inv.preimage(entry));
      if (empty(next)) continue;
      Frame child{e.dst, std::move(next), std::move(entry), hops, fr.edges, fr.steps};
      child.edges.push_back(ei);
      child.steps.push_back(st);
      self(self, std::move(child));
    }
  };

  Polyhedron init = H.init.intersect(H.locations[H.init_loc].inv);
  if (!init.is_empty()) {
    std::vector<AffineForm> entry;
    for (size_t j = 0; j < N; ++j) entry.push_back(AffineForm::var(N, j));
    dfs(dfs, Frame{H.init_loc, init, entry, 0, {}, {}});
  }
  table_ = std::move(table);
}

namespace {

Witness make_witness(const Lsha& l, const PathRec& p, const std::vector<Rational>& x) {
  Witness w;
  w.path = p.edges;
  const size_t D = p.poly.dim();
  for (const auto& s : p.steps) {
    w.locs.push_back(s.loc);
    w.dwell.push_back(s.delta ? x[*s.delta] : Rational(0));
    std::vector<Rational> en, ex;
    for (const auto& f : s.entry) en.push_back(widen(f, D).eval(x));
    for (const auto& f : s.exit) ex.push_back(widen(f, D).eval(x));
    w.entry.push_back(std::move(en));
    w.exit.push_back(std::move(ex));
  }
  w.value = w.entry.back()[l.f_var];
  for (const auto& c : p.poly.constraints()) {
    if (c.rel != Rel::Lt) continue;
    Rational s = 0;
    for (size_t i = 0; i < D; ++i) s += c.a[i] * x[i];
    if (s >= c.b) w.boundary_degenerate = true;
  }
  return w;
}

}  // namespace

std::optional<Witness> CornerOracle::query(const Goal& g) {
  goals_.push_back(g);
  ensure();
  for (const auto& p : table_->paths) {
    bool hit = false;
    switch (g.kind) {
      case Goal::Kind::Lt: hit = p.fmin < g.c; break;
      case Goal::Kind::Ge: hit = p.fmax >= g.c; break;
      case Goal::Kind::Between: hit = p.fmin <= g.r && p.fmax >= g.l; break;
    }
    if (!hit) continue;
    const size_t D = p.poly.dim();
    AffineForm f = widen(p.f, D);
    Polyhedron q = p.poly;
    auto bound = [&](const Rational& b, bool upper) {
      LinCon c;
      c.a = f.a;
      c.b = b - f.c;
      if (!upper) {
        for (auto& v : c.a) v = -v;
        c.b = -c.b;
      }
      q.add(std::move(c));
    };
    if (g.kind == Goal::Kind::Lt) bound(g.c, true);
    if (g.kind == Goal::Kind::Ge) bound(g.c, false);
    if (g.kind == Goal::Kind::Between) {
      bound(g.r, true);
      bound(g.l, false);
    }
    auto fe = lp_feasible(D, q.constraints());
    if (fe.status == LpStatus::Infeasible) continue;
    std::vector<Rational> x = fe.x;
    if (g.kind == Goal::Kind::Lt && f.eval(x) >= g.c) {
      // the closure vertex sits on F = c; pull toward the path minimum
      auto lo = p.poly.optimize(f, false);
      for (size_t i = 0; i < D; ++i) x[i] = (x[i] + lo.point[i]) / 2;
    }
    return make_witness(l_, p, x);
  }
  return std::nullopt;
}

std::optional<Witness> CornerOracle::extreme(bool maximize) {
  ensure();
  const PathRec* best = nullptr;
  for (const auto& p : table_->paths)
    if (!best || (maximize ? p.fmax > best->fmax : p.fmin < best->fmin)) best = &p;
  if (!best) return std::nullopt;
  auto r = best->poly.optimize(widen(best->f, best->poly.dim()), maximize);
  return make_witness(l_, *best, r.point);
}

std::optional<Witness> oracle(const Lsha& l, const Goal& g, const SearchConfig& cfg) {
  CornerOracle o(l, cfg);
  return o.query(g);
}

// ---------------------------------------------------------------- search

Witness ets(CornerOracle& o, Rational lo, Rational hi, const Rational& f, Witness T, Dir dir) {
  const Rational eps = o.config().epsilon;
  Rational cur = f;
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / 2;
    bool min = dir == Dir::Min;
    auto w = o.query(min ? Goal::between(lo, mid) : Goal::between(mid, hi));
    if (w) {
      cur = w->value;
      T = std::move(*w);
      if (min)
        hi = cur - eps;
      else
        lo = cur + eps;
      continue;
    }
    w = o.query(min ? Goal::between(mid, hi) : Goal::between(lo, mid));
    if (!w) break;
    cur = w->value;
    T = std::move(*w);
    if (min) {
      lo = mid;
      hi = cur - eps;
    } else {
      hi = mid;
      lo = cur + eps;
    }
  }
  return T;
}

Witness expand(CornerOracle& o, const Rational& f, Witness T, Dir dir) {
  const Rational eps = o.config().epsilon;
  Rational M = o.config().M;
  Rational cur = f;
  bool min = dir == Dir::Min;
  for (;;) {
    auto w = o.query(min ? Goal::lt(cur - M) : Goal::ge(cur + M));
    if (w) {
      cur = w->value;
      T = std::move(*w);
      M *= 2;
      continue;
    }
    Rational lo = min ? Rational(cur - M) : Rational(cur + eps);
    Rational hi = min ? Rational(cur - eps) : Rational(cur + M);
    if (hi < lo) return T;
    w = o.query(Goal::between(lo, hi));
    if (!w) return T;
    Rational v = w->value;
    return ets(o, lo, hi, v, std::move(*w), dir);
  }
}

std::optional<CornerResult> search_range(CornerOracle& o) {
  auto pivot = o.query(Goal::lt(0));
  if (!pivot) pivot = o.query(Goal::ge(0));
  if (!pivot) return std::nullopt;
  Rational f = pivot->value;
  CornerResult r{expand(o, f, *pivot, Dir::Min), expand(o, f, *pivot, Dir::Max)};
  return r;
}

std::optional<CornerResult> search_range_direct(CornerOracle& o) {
  auto lo = o.extreme(false);
  if (!lo) return std::nullopt;
  return CornerResult{*lo, *o.extreme(true)};
}

// ---------------------------------------------------------------- replay

std::optional<std::string> replay_witness(const Lsha& l, const Witness& w, const Rational& horizon) {
  const auto& H = l.ha;
  const size_t N = H.dim();
  auto where = [&](size_t i) { return "step " + std::to_string(i) + " (" + H.locations[w.locs[i]].name + ")"; };
  if (w.locs.empty() || w.locs.size() != w.path.size() + 1 || w.dwell.size() != w.locs.size() ||
      w.entry.size() != w.locs.size() || w.exit.size() != w.locs.size())
    return std::string("witness arrays have inconsistent lengths");
  if (w.locs[0] != H.init_loc) return std::string("does not start in the initial location");
  if (!H.init.contains_point(w.entry[0])) return std::string("initial valuation outside the initial region");
  for (size_t i = 0; i < w.locs.size(); ++i) {
    const auto& loc = H.locations[w.locs[i]];
    const auto& en = w.entry[i];
    const auto& ex = w.exit[i];
    if (en.size() != N || ex.size() != N) return where(i) + ": valuation has the wrong size";
    if (w.dwell[i] < 0) return where(i) + ": negative dwell";
    if (!loc.inv.contains_point(en) || !loc.inv.contains_point(ex)) return where(i) + ": invariant violated";
    for (size_t j = 0; j < N; ++j) {
      Rational d = ex[j] - en[j];
      if (d < loc.flow[j].lo * w.dwell[i] || d > loc.flow[j].hi * w.dwell[i])
        return where(i) + ": " + H.vars[j] + " moves outside its rate interval";
    }
    if (i + 1 == w.locs.size()) break;
    const Edge& e = H.edges.at(w.path[i]);
    if (e.src != w.locs[i] || e.dst != w.locs[i + 1]) return where(i) + ": edge does not connect the steps";
    if (!e.guard.contains_point(ex)) return where(i) + ": guard of " + e.label + " fails";
    for (size_t j = 0; j < N; ++j)
      if (e.reset[j].eval(ex) != w.entry[i + 1][j]) return where(i) + ": reset of " + H.vars[j] + " mismatches";
  }
  if (w.locs.back() != l.final_loc) return std::string("does not end in the final location");
  if (w.entry.back()[l.f_var] != w.value) return std::string("feature value differs from the recorded value");
  if (w.entry.back()[l.t_var] > horizon) return std::string("exceeds the time horizon");
  return std::nullopt;
}

// ---------------------------------------------------------------- traces

Trace Witness::trace(const Lsha& l) const {
  Trace t;
  t.vars = l.ha.vars;
  double now = 0;
  for (size_t i = 0; i < locs.size(); ++i) {
    TraceStep s;
    s.loc_id = locs[i];
    s.loc = l.ha.locations[locs[i]].name;
    s.t_entry = now;
    s.dwell = dwell[i].get_d();
    for (const auto& v : entry[i]) s.entry.push_back(v.get_d());
    for (const auto& v : exit[i]) s.exit.push_back(v.get_d());
    if (i < path.size()) {
      s.edge = path[i];
      s.edge_label = l.ha.edges[path[i]].label;
    }
    now += s.dwell;
    t.steps.push_back(std::move(s));
  }
  return t;
}

}  // namespace featrange
