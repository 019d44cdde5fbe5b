#include "featrange/sim.hpp"

#include "featrange/cancel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace featrange {

namespace {

// ---------------------------------------------------------------- numerics

struct DCon {
  std::vector<double> a;
  double b = 0;
  Rel rel = Rel::Le;
};

std::vector<DCon> to_double(const Polyhedron& p) {
  std::vector<DCon> out;
  for (const auto& c : p.constraints()) {
    DCon d;
    for (const auto& v : c.a) d.a.push_back(v.get_d());
    d.b = c.b.get_d();
    d.rel = c.rel;
    out.push_back(std::move(d));
  }
  return out;
}

bool holds(const std::vector<DCon>& cs, const std::vector<double>& x, double tol) {
  for (const auto& c : cs) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += c.a[i] * x[i];
    double scale = std::max(1.0, std::abs(c.b));
    if (c.rel == Rel::Eq ? std::abs(s - c.b) > tol * scale : s - c.b > tol * scale) return false;
  }
  return true;
}

struct DForm {
  std::vector<double> a;
  double c = 0;
  double eval(const std::vector<double>& x) const {
    double s = c;
    for (size_t i = 0; i < x.size(); ++i) s += a[i] * x[i];
    return s;
  }
};

DForm to_double(const AffineForm& f) {
  DForm d;
  for (const auto& v : f.a) d.a.push_back(v.get_d());
  d.c = f.c.get_d();
  return d;
}

struct DLoc {
  std::vector<DCon> inv;
  std::vector<bool> affine;
  std::vector<DForm> field;
  std::vector<double> lo, hi;
};

struct DEdge {
  size_t src, dst;
  std::vector<DCon> guard;
  std::vector<DForm> reset;
};

Rational exact(double v) { return Rational(v); }

std::vector<double> sample_region(const Polyhedron& p, std::mt19937_64& rng) {
  Polyhedron cur = p;
  std::vector<double> x(p.dim());
  for (size_t i = 0; i < p.dim(); ++i) {
    auto [lo, hi] = cur.project_interval(i);
    if (!lo && !hi) throw ValidationError("initial region is empty");
    double l = lo ? lo->get_d() : hi->get_d() - 1;
    double h = hi ? hi->get_d() : l + 1;
    double v = l == h ? l : std::uniform_real_distribution<double>(l, h)(rng);
    // stay inside after rounding
    Rational r = exact(v);
    if (lo && r < *lo) r = *lo;
    if (hi && r > *hi) r = *hi;
    x[i] = r.get_d();
    cur.add_eq({{i, Rational(1)}}, r);
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------- simulate

Trace simulate(const HybridAutomaton& h, uint64_t seed, const SimConfig& cfg) {
  if (cfg.dt <= 0 || cfg.horizon <= 0) throw ValidationError("dt and horizon must be positive");
  const size_t n = h.dim();
  std::vector<DLoc> locs;
  for (const auto& l : h.locations) {
    DLoc d;
    d.inv = to_double(l.inv);
    for (const auto& f : l.flow) {
      d.affine.push_back(!f.is_rate());
      d.field.push_back(f.is_rate() ? DForm{} : to_double(f.expr));
      d.lo.push_back(f.is_rate() ? f.lo.get_d() : 0);
      d.hi.push_back(f.is_rate() ? f.hi.get_d() : 0);
    }
    locs.push_back(std::move(d));
  }
  std::vector<std::vector<size_t>> out(h.locations.size());
  std::vector<DEdge> edges;
  for (size_t i = 0; i < h.edges.size(); ++i) {
    const auto& e = h.edges[i];
    DEdge d{e.src, e.dst, to_double(e.guard), {}};
    for (const auto& r : e.reset) d.reset.push_back(to_double(r));
    edges.push_back(std::move(d));
    if (!e.stutter) out[e.src].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1);
  Trace tr;
  tr.vars = h.vars;
  size_t loc = h.init_loc;
  std::vector<double> x = sample_region(h.init.intersect(h.locations[loc].inv), rng);
  double t = 0;
  const double tol = cfg.tol;
  const double tiny = 1e-12 * cfg.horizon;

  std::vector<double> rate(n);
  auto pick_rates = [&] {
    const auto& L = locs[loc];
    for (size_t j = 0; j < n; ++j) {
      if (L.affine[j]) continue;
      switch (cfg.rates) {
        case SimConfig::Rates::FixedMin: rate[j] = L.lo[j]; break;
        case SimConfig::Rates::FixedMax: rate[j] = L.hi[j]; break;
        case SimConfig::Rates::Uniform:
          rate[j] = L.lo[j] == L.hi[j] ? L.lo[j] : std::uniform_real_distribution<double>(L.lo[j], L.hi[j])(rng);
      }
    }
  };
  auto deriv = [&](const std::vector<double>& y) {
    const auto& L = locs[loc];
    std::vector<double> d(n);
    for (size_t j = 0; j < n; ++j) d[j] = L.affine[j] ? L.field[j].eval(y) : rate[j];
    return d;
  };
  auto advance = [&](const std::vector<double>& y, double s) {
    auto k1 = deriv(y);
    std::vector<double> tmp(n);
    for (size_t j = 0; j < n; ++j) tmp[j] = y[j] + s / 2 * k1[j];
    auto k2 = deriv(tmp);
    for (size_t j = 0; j < n; ++j) tmp[j] = y[j] + s / 2 * k2[j];
    auto k3 = deriv(tmp);
    for (size_t j = 0; j < n; ++j) tmp[j] = y[j] + s * k3[j];
    auto k4 = deriv(tmp);
    std::vector<double> r(n);
    for (size_t j = 0; j < n; ++j) r[j] = y[j] + s / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    return r;
  };
  auto enabled = [&](const std::vector<double>& y) {
    std::vector<std::pair<size_t, std::vector<double>>> en;
    for (size_t ei : out[loc]) {
      const auto& e = edges[ei];
      if (!holds(e.guard, y, tol)) continue;
      std::vector<double> z(n);
      for (size_t j = 0; j < n; ++j) z[j] = e.reset[j].eval(y);
      if (holds(locs[e.dst].inv, z, tol)) en.emplace_back(ei, std::move(z));
    }
    return en;
  };

  TraceStep step;
  auto open_step = [&] {
    step = TraceStep{};
    step.loc = h.locations[loc].name;
    step.loc_id = loc;
    step.t_entry = t;
    step.entry = x;
    pick_rates();
    if (cfg.dense) tr.samples.push_back({t, tr.steps.size(), x});
  };
  auto close_step = [&](std::optional<size_t> edge) {
    step.dwell = t - step.t_entry;
    step.exit = x;
    step.edge = edge;
    if (edge) step.edge_label = h.edges[*edge].label;
    tr.steps.push_back(std::move(step));
  };
  auto sample = [&] {
    if (cfg.dense) tr.samples.push_back({t, tr.steps.size(), x});
  };
  auto jump = [&](std::vector<std::pair<size_t, std::vector<double>>>& en) {
    size_t k = en.size() == 1 ? 0 : std::uniform_int_distribution<size_t>(0, en.size() - 1)(rng);
    close_step(en[k].first);
    loc = edges[en[k].first].dst;
    x = std::move(en[k].second);
    open_step();
  };

  open_step();
  size_t jumps = 0;
  while (t < cfg.horizon - tiny) {
    if (jumps >= cfg.max_jumps) break;
    auto en = enabled(x);
    if (!en.empty() && unit(rng) < cfg.p_take) {
      jump(en);
      ++jumps;
      continue;
    }
    double s = std::min(cfg.dt, cfg.horizon - t);
    auto xn = advance(x, s);
    if (holds(locs[loc].inv, xn, tol)) {
      x = std::move(xn);
      t += s;
      sample();
      continue;
    }
    // localize the invariant exit
    double lo = 0, hi = s;
    while (hi - lo > tiny) {
      double mid = (lo + hi) / 2;
      if (holds(locs[loc].inv, advance(x, mid), tol))
        lo = mid;
      else
        hi = mid;
    }
    if (lo > 0) {
      x = advance(x, lo);
      t += lo;
      sample();
    }
    en = enabled(x);
    if (en.empty()) {
      tr.stuck = true;
      break;
    }
    jump(en);
    ++jumps;
  }
  close_step(std::nullopt);
  return tr;
}

// ---------------------------------------------------------------- monitor

namespace {

bool same_label(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

// linear expression over z = (trace vars, locals, time)
struct ZForm {
  std::vector<double> a;
  double c = 0;
  double eval(const std::vector<double>& z) const {
    double s = c;
    for (size_t i = 0; i < z.size(); ++i) s += a[i] * z[i];
    return s;
  }
};

struct Atom {
  bool loc_eq = false;
  std::string loc;
  ZForm g;  // g REL 0
  RelOp rel = RelOp::Ge;
};

struct Sub {
  std::vector<std::vector<Atom>> dnf;  // empty means true
  std::vector<Atom> events;            // positive-edge alternatives
  bool loc_event = false;
  std::string event_loc;
  std::vector<std::pair<size_t, ZForm>> assigns;  // local index, rhs
};

// Closed θ-interval in [0, 1]
struct Iv {
  double lo, hi;
};

std::optional<Iv> atom_set(const Atom& at, double g0, double g1, double tol) {
  double d = g1 - g0;
  auto solve = [&](double target) { return (target - g0) / d; };
  switch (at.rel) {
    case RelOp::Ge:
    case RelOp::Gt:
      if (std::abs(d) < 1e-300) return g0 >= -tol ? std::optional<Iv>(Iv{0, 1}) : std::nullopt;
      if (d > 0) {
        double s = std::max(0.0, solve(-tol));
        return s <= 1 ? std::optional<Iv>(Iv{s, 1}) : std::nullopt;
      } else {
        double s = std::min(1.0, solve(-tol));
        return s >= 0 ? std::optional<Iv>(Iv{0, s}) : std::nullopt;
      }
    case RelOp::Le:
    case RelOp::Lt:
      if (std::abs(d) < 1e-300) return g0 <= tol ? std::optional<Iv>(Iv{0, 1}) : std::nullopt;
      if (d < 0) {
        double s = std::max(0.0, solve(tol));
        return s <= 1 ? std::optional<Iv>(Iv{s, 1}) : std::nullopt;
      } else {
        double s = std::min(1.0, solve(tol));
        return s >= 0 ? std::optional<Iv>(Iv{0, s}) : std::nullopt;
      }
    case RelOp::Eq: {
      if (std::abs(d) < 1e-300) return std::abs(g0) <= tol ? std::optional<Iv>(Iv{0, 1}) : std::nullopt;
      double a = solve(-tol), b = solve(tol);
      if (a > b) std::swap(a, b);
      a = std::max(a, 0.0);
      b = std::min(b, 1.0);
      if (a > b) return std::nullopt;
      return Iv{a, b};
    }
  }
  return std::nullopt;
}

class Monitor {
 public:
  Monitor(const Trace& tr, const FeatureDecl& f, const std::map<std::string, Rational>& consts, double tol)
      : tr_(tr), f_(f), consts_(consts), tol_(tol) {
    nv_ = tr.vars.size();
    for (size_t i = 0; i < f.locals.size(); ++i) local_[f.locals[i]] = i;
    nz_ = nv_ + f.locals.size() + 1;
    for (const auto& s : f.seq) subs_.push_back(compile(s));
    value_ = form(f.feature_expr);
    build_pieces();
  }

  std::vector<MatchRecord> run() {
    std::vector<MatchRecord> out;
    for (const auto& a : anchors()) {
      MatchRecord m;
      std::vector<double> locals(f_.locals.size(), 0);
      Instant cur = a;
      bool ok = true;
      for (size_t i = 0; i < subs_.size(); ++i) {
        if (i > 0) {
          double lo = f_.delay_lo(i - 1).get_d();
          auto hi = f_.delay_hi(i - 1);
          auto nx = earliest(i, cur.t + lo, hi ? cur.t + hi->get_d() : INFINITY, locals);
          if (!nx) {
            ok = false;
            break;
          }
          cur = *nx;
        }
        m.times.push_back(cur.t);
        m.steps.push_back(cur.step);
        auto z = zvec(cur, locals);
        std::vector<double> next = locals;
        for (const auto& [k, rhs] : subs_[i].assigns) {
          next[k] = rhs.eval(z);
          z[nv_ + k] = next[k];
        }
        locals = std::move(next);
      }
      if (!ok) continue;
      for (size_t k = 0; k < f_.locals.size(); ++k) m.locals[f_.locals[k]] = locals[k];
      Instant last = cur;
      m.value = value_.eval(zvec(last, locals));
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  struct Piece {
    size_t step;
    double t0, t1;
    std::vector<double> x0, x1;
  };
  struct Instant {
    double t;
    size_t step;
    std::vector<double> x;
    size_t piece;
    double theta;
  };

  ZForm form(const LinExpr& e) const {
    ZForm z;
    z.a.assign(nz_, 0);
    z.c = e.constant.get_d();
    for (const auto& [name, k] : e.terms) {
      double c = k.get_d();
      auto l = local_.find(name);
      if (l != local_.end()) {
        z.a[nv_ + l->second] += c;
        continue;
      }
      if (name == kTimeIdent) {
        z.a[nz_ - 1] += c;
        continue;
      }
      auto var = std::find(tr_.vars.begin(), tr_.vars.end(), name);
      if (var == tr_.vars.end()) var = std::find(tr_.vars.begin(), tr_.vars.end(), strip_instance(name));
      if (var != tr_.vars.end()) {
        z.a[var - tr_.vars.begin()] += c;
        continue;
      }
      auto p = consts_.find(name);
      if (p == consts_.end()) p = consts_.find(strip_instance(name));
      if (p != consts_.end()) {
        z.c += c * p->second.get_d();
        continue;
      }
      throw SemanticError("monitor cannot resolve '" + name + "'");
    }
    return z;
  }

  Atom atom(const Porv& p) const {
    Atom a;
    if (p.kind == Porv::Kind::LocEq) {
      a.loc_eq = true;
      a.loc = p.loc;
      return a;
    }
    a.g = form(p.expr);
    a.rel = p.rel;
    return a;
  }

  Sub compile(const SubExpr& s) const {
    Sub out;
    for (const auto& conj : s.dnf) {
      std::vector<Atom> c;
      for (const auto& p : conj) c.push_back(atom(p));
      out.dnf.push_back(std::move(c));
    }
    if (s.event) {
      for (const auto& alt : desugar_event(*s.event)) {
        if (alt.porv.kind == Porv::Kind::LocEq) {
          out.loc_event = true;
          out.event_loc = alt.porv.loc;
        } else {
          out.events.push_back(atom(alt.porv));
        }
      }
    }
    for (const auto& a : s.assigns) out.assigns.emplace_back(local_.at(a.local), form(a.rhs));
    return out;
  }

  void build_pieces() {
    // dense samples when present, else entry/exit per step
    std::vector<std::vector<std::pair<double, std::vector<double>>>> pts(tr_.steps.size());
    for (const auto& s : tr_.samples)
      if (s.step < pts.size()) pts[s.step].emplace_back(s.t, s.x);
    for (size_t i = 0; i < tr_.steps.size(); ++i) {
      const auto& st = tr_.steps[i];
      auto& p = pts[i];
      if (p.empty() || p.front().first > st.t_entry) p.insert(p.begin(), {st.t_entry, st.entry});
      double end = st.t_entry + st.dwell;
      if (p.back().first < end || p.size() == 1) p.emplace_back(end, st.exit);
      step_first_.push_back(pieces_.size());
      for (size_t k = 0; k + 1 < p.size(); ++k) pieces_.push_back({i, p[k].first, p[k + 1].first, p[k].second, p[k + 1].second});
    }
  }

  std::vector<double> lerp(const Piece& p, double th) const {
    std::vector<double> x(p.x0.size());
    for (size_t j = 0; j < x.size(); ++j) x[j] = p.x0[j] + th * (p.x1[j] - p.x0[j]);
    return x;
  }

  Instant at(size_t pi, double th) const {
    const auto& p = pieces_[pi];
    return Instant{p.t0 + th * (p.t1 - p.t0), p.step, lerp(p, th), pi, th};
  }

  std::vector<double> zvec(const Instant& in, const std::vector<double>& locals) const {
    std::vector<double> z(nz_);
    std::copy(in.x.begin(), in.x.end(), z.begin());
    std::copy(locals.begin(), locals.end(), z.begin() + static_cast<long>(nv_));
    z[nz_ - 1] = in.t;
    return z;
  }

  std::vector<double> zvec(const Piece& p, bool end, const std::vector<double>& locals) const {
    Instant in{end ? p.t1 : p.t0, p.step, end ? p.x1 : p.x0, 0, 0};
    return zvec(in, locals);
  }

  const std::string& loc_of(size_t step) const { return tr_.steps[step].loc; }

  // θ-intervals of the piece where conj holds
  std::optional<Iv> conj_set(const std::vector<Atom>& conj, const Piece& p, const std::vector<double>& locals) const {
    Iv r{0, 1};
    auto z0 = zvec(p, false, locals), z1 = zvec(p, true, locals);
    for (const auto& a : conj) {
      if (a.loc_eq) {
        if (!same_label(loc_of(p.step), a.loc)) return std::nullopt;
        continue;
      }
      auto s = atom_set(a, a.g.eval(z0), a.g.eval(z1), tol_);
      if (!s) return std::nullopt;
      r.lo = std::max(r.lo, s->lo);
      r.hi = std::min(r.hi, s->hi);
      if (r.lo > r.hi) return std::nullopt;
    }
    return r;
  }

  std::vector<Iv> dnf_set(const Sub& s, const Piece& p, const std::vector<double>& locals) const {
    if (s.dnf.empty()) return {Iv{0, 1}};
    std::vector<Iv> out;
    for (const auto& c : s.dnf)
      if (auto r = conj_set(c, p, locals)) out.push_back(*r);
    std::sort(out.begin(), out.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
    return out;
  }

  bool dnf_at(const Sub& s, const Instant& in, const std::vector<double>& locals) const {
    if (s.dnf.empty()) return true;
    auto z = zvec(in, locals);
    for (const auto& c : s.dnf) {
      bool ok = true;
      for (const auto& a : c) {
        if (a.loc_eq) {
          ok = same_label(loc_of(in.step), a.loc);
        } else {
          double g = a.g.eval(z);
          switch (a.rel) {
            case RelOp::Ge:
            case RelOp::Gt: ok = g >= -tol_; break;
            case RelOp::Le:
            case RelOp::Lt: ok = g <= tol_; break;
            case RelOp::Eq: ok = std::abs(g) <= tol_; break;
          }
        }
        if (!ok) break;
      }
      if (ok) return true;
    }
    return false;
  }

  // event instants inside piece pi, in time order
  std::vector<Instant> events_in(const Sub& s, size_t pi, const std::vector<double>& locals) const {
    std::vector<Instant> out;
    const auto& p = pieces_[pi];
    if (s.loc_event) {
      // entering the named location: first piece of a step reached by a jump from elsewhere
      if (step_first_[p.step] == pi && p.step > 0 && same_label(loc_of(p.step), s.event_loc) &&
          !same_label(loc_of(p.step - 1), s.event_loc)) {
        Instant in = at(pi, 0);
        if (dnf_at(s, in, locals)) out.push_back(in);
      }
      return out;
    }
    auto z0 = zvec(p, false, locals), z1 = zvec(p, true, locals);
    std::vector<double> ths;
    for (const auto& e : s.events) {
      double g0 = e.g.eval(z0), g1 = e.g.eval(z1);
      auto set = atom_set(e, g0, g1, 0);  // exact crossing on the linear piece
      if (!set || set->lo <= 0) continue;  // true at the start, or never
      ths.push_back(set->lo);
    }
    std::sort(ths.begin(), ths.end());
    for (double th : ths) {
      Instant in = at(pi, th);
      if (dnf_at(s, in, locals)) out.push_back(in);
    }
    return out;
  }

  size_t first_piece_from(double t) const {
    size_t lo = 0;
    while (lo < pieces_.size() && pieces_[lo].t1 < t) ++lo;
    return lo;
  }

  std::vector<Instant> anchors() const {
    std::vector<Instant> out;
    if (subs_.empty()) return out;
    const Sub& s = subs_[0];
    std::vector<double> none(f_.locals.size(), 0);
    bool event = s.loc_event || !s.events.empty();
    bool open = false;  // inside a truth region carried over from the previous piece
    for (size_t pi = 0; pi < pieces_.size(); ++pi) {
      if (event) {
        for (auto& in : events_in(s, pi, none)) out.push_back(std::move(in));
        continue;
      }
      std::vector<Iv> merged;
      for (const auto& iv : dnf_set(s, pieces_[pi], none)) {
        if (!merged.empty() && iv.lo <= merged.back().hi)
          merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
          merged.push_back(iv);
      }
      bool next_open = false;
      for (const auto& iv : merged) {
        if (!(open && iv.lo <= 0)) out.push_back(at(pi, iv.lo));
        if (iv.hi >= 1) next_open = true;
      }
      open = next_open;
    }
    return out;
  }

  std::optional<Instant> earliest(size_t i, double from, double until, const std::vector<double>& locals) const {
    const Sub& s = subs_[i];
    bool event = s.loc_event || !s.events.empty();
    const double slack = 1e-12 * std::max(1.0, std::abs(from));
    for (size_t pi = first_piece_from(from - slack); pi < pieces_.size(); ++pi) {
      const auto& p = pieces_[pi];
      if (p.t0 > until + slack) break;
      double span = p.t1 - p.t0;
      double thw = span > 0 ? std::clamp((from - p.t0) / span, 0.0, 1.0) : 0;
      double thu = span > 0 ? std::clamp((until - p.t0) / span, 0.0, 1.0) : 1;
      if (event) {
        for (auto& in : events_in(s, pi, locals))
          if (in.t >= from - slack && in.t <= until + slack) return in;
        continue;
      }
      for (const auto& iv : dnf_set(s, p, locals)) {
        if (iv.hi < thw) continue;
        double th = std::max(iv.lo, thw);
        if (th > thu) continue;
        return at(pi, th);
      }
    }
    return std::nullopt;
  }

  const Trace& tr_;
  const FeatureDecl& f_;
  const std::map<std::string, Rational>& consts_;
  double tol_;
  size_t nv_ = 0, nz_ = 0;
  std::map<std::string, size_t> local_;
  std::vector<Sub> subs_;
  ZForm value_;
  std::vector<Piece> pieces_;
  std::vector<size_t> step_first_;
};

}  // namespace

std::vector<MatchRecord> monitor(const Trace& tr, const FeatureDecl& f, const std::map<std::string, Rational>& consts,
                                 double tol) {
  if (!f.grounded()) throw SemanticError("monitor needs a grounded feature");
  return Monitor(tr, f, consts, tol).run();
}

// ---------------------------------------------------------------- sampling

size_t worker_count() {
  size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* e = std::getenv("FEATRANGE_THREADS")) {
    long v = std::strtol(e, nullptr, 10);
    if (v > 0) return std::min<size_t>(static_cast<size_t>(v), hw * 4);
  }
  return hw;
}

Empirical sample_feature(const HybridAutomaton& h, const FeatureDecl& f, size_t runs, uint64_t seed,
                         const SimConfig& cfg) {
  if (runs == 0) throw ValidationError("at least one run is needed");
  std::vector<std::vector<double>> values(runs);
  std::vector<char> stuck(runs, 0), done(runs, 0);
  auto job = [&](size_t i) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(i)};
    std::mt19937_64 g(seq);
    Trace tr = simulate(h, g(), cfg);
    stuck[i] = tr.stuck;
    for (const auto& m : monitor(tr, f, h.params, cfg.tol)) values[i].push_back(m.value);
    done[i] = 1;
  };
  size_t workers = std::min(worker_count(), runs);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < runs && !cancel_requested(); i += workers) job(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Empirical out;
  for (size_t i = 0; i < runs; ++i) {
    if (!done[i]) {
      out.interrupted = true;
      continue;
    }
    ++out.runs;
    out.stuck_runs += stuck[i];
    if (!values[i].empty()) ++out.matched_runs;
    for (double v : values[i]) {
      out.samples.push_back(v);
      if (!out.min || v < *out.min) out.min = v;
      if (!out.max || v > *out.max) out.max = v;
    }
  }
  return out;
}

}  // namespace featrange
