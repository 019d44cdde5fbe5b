#include "featrange/reach.hpp"

#include "featrange/cancel.hpp"

#include <deque>

namespace featrange {

Polyhedron time_elapse(const Polyhedron& region, const std::vector<Flow>& rates, const Polyhedron& inv,
                       const std::optional<Rational>& budget) {
  const size_t n = region.dim();
  if (rates.size() != n || inv.dim() != n) throw DimensionMismatch("time_elapse: rates or invariant size");
  for (const auto& f : rates)
    if (!f.is_rate()) throw NonRectangularFlow("time_elapse needs rate intervals");
  if (region.is_empty()) return Polyhedron(n).intersect(region);
  bool moves = false;
  for (const auto& f : rates) moves = moves || !f.is_zero();
  if (!moves || (budget && *budget == 0)) return region.intersect(inv);

  // columns: y (n), d_i per interval-rate variable, delta
  std::vector<size_t> dcol(n, SIZE_MAX);
  size_t m = n;
  for (size_t i = 0; i < n; ++i)
    if (rates[i].lo != rates[i].hi) dcol[i] = m++;
  const size_t delta = m++;
  Polyhedron p(m);
  for (const auto& c : region.constraints()) {
    // a·(y - disp) rel b, disp_i = r_i·delta or d_i
    LinCon k;
    k.a.assign(m, Rational(0));
    k.rel = c.rel;
    k.b = c.b;
    for (size_t i = 0; i < n; ++i) {
      if (c.a[i] == 0) continue;
      k.a[i] += c.a[i];
      if (dcol[i] != SIZE_MAX)
        k.a[dcol[i]] -= c.a[i];
      else
        k.a[delta] -= c.a[i] * rates[i].lo;
    }
    p.add(std::move(k));
  }
  for (size_t i = 0; i < n; ++i) {
    if (dcol[i] == SIZE_MAX) continue;
    p.add_le({{delta, rates[i].lo}, {dcol[i], Rational(-1)}}, 0);
    p.add_le({{dcol[i], Rational(1)}, {delta, -rates[i].hi}}, 0);
  }
  p.add_le({{delta, Rational(-1)}}, 0);
  if (budget) p.add_le({{delta, Rational(1)}}, *budget);
  for (size_t i = 0; i < n; ++i)
    if (dcol[i] != SIZE_MAX) p = p.eliminate(dcol[i]);
  p = p.eliminate(delta);
  return p.truncate(n).intersect(inv).remove_redundant();
}

std::optional<SymbolicState> discrete_post(const HybridAutomaton& h, const SymbolicState& s, const Edge& e) {
  if (e.src != s.loc) throw ValidationError("discrete_post: edge does not leave the state's location");
  Polyhedron pre = s.region.intersect(e.guard);
  if (pre.is_empty()) return std::nullopt;
  Polyhedron img = HybridAutomaton::is_identity(e.reset) ? pre : pre.affine_image(e.reset);
  img = img.intersect(h.locations[e.dst].inv);
  if (img.is_empty()) return std::nullopt;
  return SymbolicState{e.dst, img.remove_redundant()};
}

std::vector<std::vector<bool>> dead_variables(const HybridAutomaton& h, const std::vector<size_t>& observed) {
  const size_t n = h.dim(), m = h.locations.size();
  auto reads = [&](const Polyhedron& p, std::vector<bool>& out) {
    for (const auto& c : p.constraints())
      for (size_t i = 0; i < n; ++i)
        if (c.a[i] != 0) out[i] = true;
  };
  std::vector<std::vector<bool>> live(m, std::vector<bool>(n, false));
  for (size_t q = 0; q < m; ++q) {
    reads(h.locations[q].inv, live[q]);
    for (size_t v : observed) live[q][v] = true;
  }
  // backward fixpoint
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : h.edges) {
      if (e.stutter) continue;
      std::vector<bool> add(n, false);
      reads(e.guard, add);
      for (size_t v = 0; v < n; ++v) {
        const auto& f = e.reset[v];
        bool identity = f.c == 0 && f.a[v] == 1;
        for (size_t j = 0; j < n && identity; ++j)
          if (j != v && f.a[j] != 0) identity = false;
        if (identity) {
          if (live[e.dst][v]) add[v] = true;
        } else if (live[e.dst][v]) {
          for (size_t j = 0; j < n; ++j)
            if (f.a[j] != 0) add[j] = true;
        }
      }
      for (size_t v = 0; v < n; ++v)
        if (add[v] && !live[e.src][v]) {
          live[e.src][v] = true;
          changed = true;
        }
    }
  }
  for (auto& row : live) row.flip();
  return live;
}

ReachResult reach(const HybridAutomaton& h, size_t clock, const ReachConfig& cfg,
                  const std::optional<std::vector<size_t>>& observed) {
  if (!h.is_rectangular()) throw NonRectangularFlow("reach needs a rectangular automaton; hybridize first");
  ReachResult r;
  std::vector<std::vector<bool>> dead;
  if (observed) {
    auto keep = *observed;
    keep.push_back(clock);
    dead = dead_variables(h, keep);
  }
  auto project = [&](size_t loc, Polyhedron p) {
    if (dead.empty()) return p;
    bool any = false;
    for (size_t v = 0; v < h.dim(); ++v)
      if (dead[loc][v]) {
        p = p.eliminate(v);
        any = true;
      }
    return any ? p.remove_redundant() : p;
  };
  std::vector<Polyhedron> inv;
  for (const auto& l : h.locations) {
    Polyhedron p = l.inv;
    p.add_le({{clock, Rational(1)}}, cfg.time_horizon);
    inv.push_back(std::move(p));
  }
  std::vector<std::vector<size_t>> by_loc(h.locations.size());
  using Box = std::vector<std::pair<Bound, Bound>>;
  std::vector<Box> boxes;  // bounding box per stored state
  std::deque<size_t> work;
  auto box_of = [&](const Polyhedron& p) {
    Box b(h.dim());
    for (size_t v = 0; v < h.dim(); ++v) b[v] = p.project_interval(v);
    return b;
  };
  auto inside = [](const Box& in, const Box& out) {
    for (size_t v = 0; v < in.size(); ++v) {
      if (out[v].first && (!in[v].first || *in[v].first < *out[v].first)) return false;
      if (out[v].second && (!in[v].second || *in[v].second > *out[v].second)) return false;
    }
    return true;
  };
  auto covered = [&](size_t loc, const Polyhedron& p, const Box& b) {
    for (size_t k : by_loc[loc])
      if (inside(b, boxes[k]) && r.states[k].region.contains(p)) return true;
    return false;
  };
  auto admit = [&](size_t loc, const Polyhedron& raw) {
    Polyhedron entry = project(loc, raw);
    if (by_loc[loc].size() > 0 && covered(loc, entry, box_of(entry))) return;
    Polyhedron p = time_elapse(entry, h.locations[loc].flow, inv[loc], std::nullopt);
    if (p.is_empty()) return;
    Box b = box_of(p);
    if (covered(loc, p, b)) return;
    if (b[clock].second && *b[clock].second >= cfg.time_horizon) r.horizon_hit = true;
    r.states.push_back({loc, std::move(p)});
    boxes.push_back(std::move(b));
    by_loc[loc].push_back(r.states.size() - 1);
    work.push_back(r.states.size() - 1);
  };
  Polyhedron start = h.init.intersect(inv[h.init_loc]);
  if (!start.is_empty()) admit(h.init_loc, start);
  while (!work.empty()) {
    if (r.states.size() >= cfg.max_symstates || cancel_requested()) {
      r.exhausted = true;
      return r;
    }
    size_t k = work.front();
    work.pop_front();
    ++r.iterations;
    for (const auto& e : h.edges) {
      if (e.stutter || e.src != r.states[k].loc) continue;
      SymbolicState s = r.states[k];
      s.region = s.region.intersect(inv[s.loc]);
      auto next = discrete_post(h, s, e);
      if (next) admit(next->loc, next->region.intersect(inv[next->loc]));
    }
  }
  r.fixpoint_reached = true;
  return r;
}

ReachResult reach(const Lsha& l, const ReachConfig& cfg) {
  ReachResult r = reach(l.ha, l.t_var, cfg, std::vector<size_t>{l.f_var});
  r.f_var = l.f_var;
  r.hybridized = l.hybridized;
  for (size_t i = 0; i < r.states.size(); ++i)
    if (r.states[i].loc == l.final_loc) r.feature_states.push_back(i);
  return r;
}

std::optional<FeatureRange> feature_range(const ReachResult& r) {
  if (r.feature_states.empty()) return std::nullopt;
  FeatureRange out;
  bool first = true;
  for (size_t k : r.feature_states) {
    auto [lo, hi] = r.states[k].region.project_interval(r.f_var);
    if (!lo || !hi) throw UnboundedInvariant("feature value is unbounded in a final state");
    if (first || *lo < out.min) out.min = *lo;
    if (first || *hi > out.max) out.max = *hi;
    first = false;
  }
  if (r.exhausted) {
    out.partial = true;
    out.warnings.push_back("PartialResult: symbolic state cap reached; range is not sound");
  }
  if (r.horizon_hit) {
    out.partial = true;
    out.warnings.push_back("PartialResult: time horizon reached; matches completing later are not covered");
  }
  if (r.hybridized) out.warnings.push_back("range over-approximates the hybridized product");
  return out;
}

}  // namespace featrange
