#include "featrange/lsha.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace featrange {

namespace {

bool same_label(const std::string& a, const std::string& b) {
  if (a == b) return true;
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

using Map = std::vector<AffineForm>;
using Atoms = std::vector<LinCon>;

Map compose_maps(const Map& first, const Map& second) {
  // apply `first`, then `second`
  Map out;
  out.reserve(second.size());
  for (const auto& f : second) out.push_back(compose(f, first));
  return out;
}

class Builder {
 public:
  Builder(const HybridAutomaton& h, const FeatureAutomaton& fa) : h_(h), fa_(fa) {}

  Lsha run(const LshaOptions& opt) {
    setup_vars();
    plans_.resize(fa_.n());
    for (size_t L = 0; L < fa_.n(); ++L) plan(L);
    cells_.assign(fa_.n(), std::vector<std::vector<size_t>>(h_.locations.size()));
    for (size_t L = 0; L < fa_.n(); ++L)
      for (size_t q = 0; q < h_.locations.size(); ++q) make_cells(L, q);
    make_final();
    for (size_t L = 0; L < fa_.n(); ++L) {
      ha_edges(L);
      for (size_t q = 0; q < h_.locations.size(); ++q) local_edges(L, q);
    }
    auto& H = out_.ha;
    if (cells_[0][h_.init_loc].empty()) throw ValidationError("initial location has an empty invariant");
    H.init_loc = cells_[0][h_.init_loc][0];
    H.init = h_.init.lift(N_ - h_.dim());
    for (size_t i = h_.dim(); i < N_; ++i) H.init.add_eq({{i, Rational(1)}}, 0);
    add_stutter_edges(H);
    for (size_t i = out_.edge_info.size(); i < H.edges.size(); ++i) {
      LshaEdgeInfo s;
      s.kind = LshaEdgeInfo::Kind::Stutter;
      s.level = out_.loc_info[H.edges[i].src].level;
      out_.edge_info.push_back(s);
    }
    if (opt.hybridize && !H.is_rectangular()) {
      H = hybridize(H);
      out_.hybridized = true;
    }
    validate(H);
    return std::move(out_);
  }

 private:
  struct Plan {
    enum class Ev { None, Linear, Loc };
    Ev ev = Ev::None;
    AffineForm e;  // linear event expression, crossing e = 0
    bool up = false, down = false;
    std::string ev_loc;
    bool has_dnf = false;
    std::vector<std::vector<Atoms>> dnf;  // per HA location; empty list means false
    Polyhedron timing;                    // lt ∈ τ (universe at level 0)
    std::vector<Polyhedron> timing_compl;
    std::vector<Map> chain;
  };

  // ------------------------------------------------------------ variables

  void setup_vars() {
    std::set<std::string> used(h_.vars.begin(), h_.vars.end());
    auto fresh = [&](std::string base) {
      while (used.count(base)) base += "_f";
      used.insert(base);
      return base;
    };
    auto& H = out_.ha;
    H.vars = h_.vars;
    H.params = h_.params;
    out_.n_ha_vars = h_.dim();
    for (const auto& l : fa_.decl.locals) {
      local_idx_[l] = H.vars.size();
      out_.local_vars.push_back(H.vars.size());
      H.vars.push_back(fresh(l));
    }
    out_.f_var = H.vars.size();
    H.vars.push_back(fresh(fa_.decl.name));
    out_.t_var = H.vars.size();
    H.vars.push_back(fresh(kTimer));
    out_.lt_var = H.vars.size();
    H.vars.push_back(fresh(kLocTimer));
    out_.level_var = H.vars.size();
    H.vars.push_back(fresh("level"));
    N_ = H.vars.size();
    out_.levels = fa_.n();
  }

  size_t target_index(const std::string& name) const {
    auto it = local_idx_.find(name);
    if (it != local_idx_.end()) return it->second;
    if (name == fa_.decl.name) return out_.f_var;
    if (name == kLocTimer) return out_.lt_var;
    if (name == kTimer) return out_.t_var;
    throw SemanticError("cannot assign to '" + name + "'");
  }

  AffineForm resolve(const LinExpr& e) const {
    AffineForm f(N_);
    f.c = e.constant;
    for (const auto& [name, k] : e.terms) {
      auto it = local_idx_.find(name);
      if (it != local_idx_.end()) {
        f.a[it->second] += k;
        continue;
      }
      if (name == fa_.decl.name) {
        f.a[out_.f_var] += k;
        continue;
      }
      if (name == kTimer || name == kTimeIdent) {
        f.a[out_.t_var] += k;
        continue;
      }
      if (name == kLocTimer) {
        f.a[out_.lt_var] += k;
        continue;
      }
      auto v = h_.find_var(name);
      if (!v) v = h_.find_var(strip_instance(name));
      if (v) {
        f.a[*v] += k;
        continue;
      }
      auto p = h_.params.find(name);
      if (p == h_.params.end()) p = h_.params.find(strip_instance(name));
      if (p != h_.params.end()) {
        f.c += k * p->second;
        continue;
      }
      throw SemanticError("feature " + fa_.decl.name + " refers to '" + name +
                          "', which is neither a model variable nor a model parameter");
    }
    return f;
  }

  // expr REL 0 as constraints a·x rel b
  Atoms atoms_of(const Porv& p) const {
    AffineForm f = resolve(p.expr);
    Atoms out;
    LinCon c;
    switch (p.rel) {
      case RelOp::Ge:
      case RelOp::Gt:
        c.a = (Rational(-1) * f).a;
        c.b = f.c;
        c.rel = p.rel == RelOp::Gt ? Rel::Lt : Rel::Le;
        break;
      case RelOp::Le:
      case RelOp::Lt:
        c.a = f.a;
        c.b = -f.c;
        c.rel = p.rel == RelOp::Lt ? Rel::Lt : Rel::Le;
        break;
      case RelOp::Eq:
        c.a = f.a;
        c.b = -f.c;
        c.rel = Rel::Eq;
        break;
    }
    out.push_back(std::move(c));
    return out;
  }

  Polyhedron poly(const Atoms& a) const {
    Polyhedron p(N_);
    for (const auto& c : a) p.add(c);
    return p;
  }

  // ------------------------------------------------------------ plans

  Map identity() const {
    Map m;
    for (size_t i = 0; i < N_; ++i) m.push_back(AffineForm::var(N_, i));
    return m;
  }

  void plan(size_t L) {
    Plan& P = plans_[L];
    const SubExpr& s = fa_.decl.seq[L];
    P.timing = Polyhedron(N_);
    if (L > 0) {
      Rational lo = fa_.decl.delay_lo(L - 1);
      auto hi = fa_.decl.delay_hi(L - 1);
      if (lo > 0) P.timing.add_le({{out_.lt_var, Rational(-1)}}, -lo);
      if (hi) P.timing.add_le({{out_.lt_var, Rational(1)}}, *hi);
      if (lo > 0) {
        Polyhedron c(N_);
        c.add_le({{out_.lt_var, Rational(1)}}, lo);
        P.timing_compl.push_back(c);
      }
      if (hi) {
        Polyhedron c(N_);
        c.add_le({{out_.lt_var, Rational(-1)}}, -*hi);
        P.timing_compl.push_back(c);
      }
    }
    P.has_dnf = !s.dnf.empty();
    P.dnf.resize(h_.locations.size());
    std::set<std::string> unknown;
    for (size_t q = 0; q < h_.locations.size(); ++q) {
      if (!P.has_dnf) {
        P.dnf[q].push_back({});
        continue;
      }
      for (const auto& conj : s.dnf) {
        Atoms atoms;
        bool ok = true;
        for (const auto& p : conj) {
          if (p.kind == Porv::Kind::LocEq) {
            if (!location_exists(p.loc)) unknown.insert(p.loc);
            if (!same_label(h_.locations[q].name, p.loc)) ok = false;
            continue;
          }
          auto a = atoms_of(p);
          atoms.insert(atoms.end(), a.begin(), a.end());
        }
        if (ok) P.dnf[q].push_back(std::move(atoms));
      }
    }
    if (s.event) {
      auto alts = desugar_event(*s.event);
      if (alts[0].porv.kind == Porv::Kind::LocEq) {
        P.ev = Plan::Ev::Loc;
        P.ev_loc = alts[0].porv.loc;
        if (!location_exists(P.ev_loc)) unknown.insert(P.ev_loc);
      } else {
        P.ev = Plan::Ev::Linear;
        P.e = resolve(alts[0].porv.expr);
        for (const auto& a : alts) {
          if (a.porv.rel == RelOp::Ge || a.porv.rel == RelOp::Eq) P.up = true;
          if (a.porv.rel == RelOp::Le || a.porv.rel == RelOp::Eq) P.down = true;
        }
      }
    }
    for (const auto& u : unknown)
      out_.warnings.push_back("UnknownLocation: sub-expression " + std::to_string(L + 1) + " names '" + u +
                              "', which is not a location of the model");
    for (const auto& a : fa_.resets[L]) {
      Map m = identity();
      m[target_index(a.local)] = resolve(a.rhs);
      P.chain.push_back(std::move(m));
    }
    if (L + 1 == fa_.n()) {
      Map fm = identity();
      fm[out_.f_var] = resolve(fa_.decl.feature_expr);
      P.chain.back() = compose_maps(P.chain.back(), fm);
    }
    Map lv = identity();
    lv[out_.level_var] = AffineForm::constant(N_, Rational(static_cast<long>(L + 1)));
    P.chain.front() = compose_maps(lv, P.chain.front());
  }

  bool location_exists(const std::string& label) const {
    for (const auto& l : h_.locations)
      if (same_label(l.name, label)) return true;
    return false;
  }

  // closure pieces of ¬(C_1 ∨ ... ∨ C_m), each intersected with `within` and kept when non-empty
  std::vector<Polyhedron> complement(const std::vector<Atoms>& dnf, const Polyhedron& within) const {
    std::vector<Polyhedron> acc = {within};
    for (const auto& conj : dnf) {
      if (conj.empty()) return {};
      bool universal = std::any_of(conj.begin(), conj.end(), [](const LinCon& c) { return c.rel == Rel::Eq; });
      if (universal) continue;
      std::vector<Polyhedron> next;
      for (const auto& base : acc)
        for (const auto& c : conj) {
          LinCon n;
          n.a = c.a;
          for (auto& v : n.a) v = -v;
          n.b = -c.b;
          n.rel = Rel::Le;
          Polyhedron p = base;
          p.add(n);
          if (!p.is_empty()) next.push_back(std::move(p));
        }
      acc = std::move(next);
      if (acc.empty()) return {};
    }
    return acc;
  }

  // ------------------------------------------------------------ locations

  Polyhedron inv_ext(size_t q) const { return h_.locations[q].inv.lift(N_ - h_.dim()); }

  std::vector<Flow> flow_ext(size_t q) const {
    std::vector<Flow> f;
    for (const auto& fl : h_.locations[q].flow) {
      Flow g = fl;
      if (!g.is_rate()) g.expr.resize(N_);
      f.push_back(std::move(g));
    }
    while (f.size() < N_) f.push_back(Flow::rate(0, 0));
    f[out_.t_var] = Flow::rate(1, 1);
    f[out_.lt_var] = Flow::rate(1, 1);
    return f;
  }

  std::string unique_name(std::string base) {
    while (names_.count(base)) base += "_";
    names_.insert(base);
    return base;
  }

  size_t add_loc(const std::string& name, Polyhedron inv, std::vector<Flow> flow, LshaLocInfo info) {
    Location l;
    l.name = unique_name(name);
    l.inv = std::move(inv);
    l.flow = std::move(flow);
    out_.ha.locations.push_back(std::move(l));
    out_.loc_info.push_back(info);
    return out_.ha.locations.size() - 1;
  }

  void make_cells(size_t L, size_t q) {
    const Plan& P = plans_[L];
    std::string base = h_.locations[q].name + "_L" + std::to_string(L);
    Polyhedron inv = inv_ext(q);
    LshaLocInfo info;
    info.ha_loc = q;
    info.level = L;
    auto add = [&](const std::string& suffix, Polyhedron p, LshaLocInfo::Role role) {
      if (p.is_empty()) return;
      info.role = role;
      cells_[L][q].push_back(add_loc(base + suffix, std::move(p), flow_ext(q), info));
    };
    if (L == 0 || P.ev == Plan::Ev::Loc) {
      add("", inv, LshaLocInfo::Role::Plain);
      return;
    }
    if (P.ev == Plan::Ev::Linear) {
      if (P.dnf[q].empty() || undetectable(L, q)) {
        add("", inv, LshaLocInfo::Role::Plain);
        return;
      }
      Polyhedron below = inv, above = inv;
      below.add(le0(P.e));
      above.add(ge0(P.e));
      add("_lo", std::move(below), LshaLocInfo::Role::Below);
      add("_hi", std::move(above), LshaLocInfo::Role::Above);
      return;
    }
    // state condition only
    std::vector<Polyhedron> match;
    for (const auto& conj : P.dnf[q]) {
      Polyhedron p = inv;
      for (const auto& c : conj) p.add(c);
      if (!p.is_empty()) match.push_back(std::move(p));
    }
    if (match.empty()) {
      add("", inv, LshaLocInfo::Role::Plain);
      return;
    }
    for (size_t k = 0; k < match.size(); ++k) add("_g" + std::to_string(k), match[k], LshaLocInfo::Role::Match);
    auto rest = complement(P.dnf[q], inv);
    for (size_t k = 0; k < rest.size(); ++k) add("_r" + std::to_string(k), rest[k], LshaLocInfo::Role::Rest);
  }

  void make_final() {
    LshaLocInfo info;
    info.kind = LshaLocInfo::Kind::Final;
    info.level = fa_.n();
    out_.final_loc = add_loc("qF", Polyhedron(N_), std::vector<Flow>(N_, Flow::rate(0, 0)), info);
  }

  size_t pause(size_t L, size_t q, size_t j) {
    auto key = std::make_tuple(L, q, j);
    auto it = pauses_.find(key);
    if (it != pauses_.end()) return it->second;
    const Plan& P = plans_[L];
    // build the whole chain for (L, q) at once
    std::vector<size_t> ids;
    for (size_t k = 1; k < P.chain.size(); ++k) {
      LshaLocInfo info;
      info.kind = LshaLocInfo::Kind::Pause;
      info.ha_loc = q;
      info.level = L + 1;
      info.step = L;
      info.hop = k;
      size_t id = add_loc(h_.locations[q].name + "_s" + std::to_string(L + 1) + "r" + std::to_string(k),
                          Polyhedron(N_), std::vector<Flow>(N_, Flow::rate(0, 0)), info);
      pauses_[std::make_tuple(L, q, k)] = id;
      ids.push_back(id);
    }
    for (size_t k = 0; k < ids.size(); ++k) {
      const Map& r = P.chain[k + 1];
      std::string label = "r" + std::to_string(L + 1) + "_" + std::to_string(k + 2);
      if (k + 1 < ids.size()) {
        add_edge(ids[k], ids[k + 1], Polyhedron(N_), r, LshaEdgeInfo::Kind::Chain, L + 1, -1, label);
      } else {
        for (size_t d : after_chain(L, q))
          add_edge(ids[k], d, Polyhedron(N_), r, LshaEdgeInfo::Kind::Chain, L + 1, -1, label);
      }
    }
    return pauses_.at(key);
  }

  std::vector<size_t> after_chain(size_t L, size_t q) const {
    if (L + 1 == fa_.n()) return {out_.final_loc};
    return cells_[L + 1][q];
  }

  // ------------------------------------------------------------ edges

  static LinCon le0(const AffineForm& f) {
    LinCon c;
    c.a = f.a;
    c.b = -f.c;
    c.rel = Rel::Le;
    return c;
  }
  static LinCon ge0(const AffineForm& f) {
    LinCon c;
    c.a = f.a;
    for (auto& v : c.a) v = -v;
    c.b = f.c;
    c.rel = Rel::Le;
    return c;
  }
  static LinCon eq0(const AffineForm& f) {
    LinCon c;
    c.a = f.a;
    c.b = -f.c;
    c.rel = Rel::Eq;
    return c;
  }

  // rate of e in location q: A(x) + [ilo, ihi]
  void event_rate(size_t L, size_t q, AffineForm& A, Rational& ilo, Rational& ihi) const {
    const AffineForm& e = plans_[L].e;
    auto fl = flow_ext(q);
    A = AffineForm(N_);
    ilo = ihi = 0;
    for (size_t j = 0; j < N_; ++j) {
      const Rational& a = e.a[j];
      if (a == 0) continue;
      const Flow& f = fl[j];
      if (f.is_rate()) {
        ilo += a * (a > 0 ? f.lo : f.hi);
        ihi += a * (a > 0 ? f.hi : f.lo);
      } else {
        A = A + a * f.expr;
      }
    }
  }

  bool undetectable(size_t L, size_t q) {
    AffineForm A;
    Rational ilo, ihi;
    event_rate(L, q, A, ilo, ihi);
    if (A.is_constant() && A.c == 0 && ilo == 0 && ihi == 0) {
      std::string msg = "EventUndetectable: " + to_string(*fa_.decl.seq[L].event) + " cannot fire in location " +
                        h_.locations[q].name + " (its rate is identically 0)";
      if (std::find(out_.warnings.begin(), out_.warnings.end(), msg) == out_.warnings.end())
        out_.warnings.push_back(msg);
      return true;
    }
    return false;
  }

  // Guard making a crossing in direction `up` possible; nullopt when it never is.
  std::optional<Polyhedron> sign_guard(size_t L, size_t q, bool up) const {
    AffineForm A;
    Rational ilo, ihi;
    event_rate(L, q, A, ilo, ihi);
    Polyhedron g(N_);
    if (A.is_constant()) {
      if (up ? A.c + ihi > 0 : A.c + ilo < 0) return g;
      return std::nullopt;
    }
    AffineForm r = A;
    r.c += up ? ihi : ilo;
    g.add(up ? ge0(r) : le0(r));
    return g;
  }

  Map ha_reset(const Edge& e) const {
    Map m = identity();
    for (size_t i = 0; i < h_.dim(); ++i) {
      AffineForm f = e.reset[i];
      f.resize(N_);
      m[i] = std::move(f);
    }
    return m;
  }

  Polyhedron level_guard(size_t L) const {
    Polyhedron g(N_);
    g.add_eq({{out_.level_var, Rational(1)}}, Rational(static_cast<long>(L)));
    return g;
  }

  void add_edge(size_t src, size_t dst, Polyhedron guard, const Map& reset, LshaEdgeInfo::Kind kind, size_t level,
                long ha_edge, const std::string& label) {
    auto& H = out_.ha;
    Polyhedron check = H.locations[src].inv.intersect(guard);
    check.add_all(H.locations[dst].inv.preimage(reset));
    if (check.is_empty()) return;
    Edge e;
    e.src = src;
    e.dst = dst;
    e.label = label;
    e.guard = std::move(guard);
    e.reset = reset;
    H.edges.push_back(std::move(e));
    LshaEdgeInfo info;
    info.kind = kind;
    info.level = level;
    info.ha_edge = ha_edge;
    out_.edge_info.push_back(info);
  }

  // Advance edge(s) from `src`; `pre` is applied before the chain (HA reset of a location-entry match).
  void advance(size_t src, size_t L, size_t q, const Polyhedron& guard, const Map& pre, long ha_edge) {
    const Plan& P = plans_[L];
    Map first = compose_maps(pre, P.chain.front());
    std::string label = "adv" + std::to_string(L + 1);
    if (P.chain.size() == 1) {
      for (size_t d : after_chain(L, q))
        add_edge(src, d, guard, first, LshaEdgeInfo::Kind::Advance, L, ha_edge, label);
    } else {
      add_edge(src, pause(L, q, 1), guard, first, LshaEdgeInfo::Kind::Advance, L, ha_edge, label);
    }
  }

  bool is_match_cell(size_t id) const { return out_.loc_info[id].role == LshaLocInfo::Role::Match; }

  void ha_edges(size_t L) {
    const Plan& P = plans_[L];
    Polyhedron lvl = level_guard(L);
    for (size_t ei = 0; ei < h_.edges.size(); ++ei) {
      const Edge& e = h_.edges[ei];
      if (e.stutter) continue;
      Map r = ha_reset(e);
      Polyhedron g = e.guard.lift(N_ - h_.dim()).intersect(lvl);
      std::string label = (e.label.empty() ? "e" + std::to_string(ei) : e.label) + "_L" + std::to_string(L);
      bool entry = P.ev == Plan::Ev::Loc && e.src != e.dst && same_label(h_.locations[e.dst].name, P.ev_loc);
      for (size_t s : cells_[L][e.src]) {
        if (is_match_cell(s)) continue;
        if (!entry) {
          for (size_t d : cells_[L][e.dst])
            add_edge(s, d, g, r, LshaEdgeInfo::Kind::Ha, L, static_cast<long>(ei), label);
          continue;
        }
        // location-entry event: the entering jump either matches or is allowed only where it cannot
        for (const auto& conj : P.dnf[e.dst]) {
          Polyhedron mg = g.intersect(poly(conj).preimage(r));
          mg.add_all(P.timing);
          advance(s, L, e.dst, mg, r, static_cast<long>(ei));
        }
        std::vector<Polyhedron> plain;
        if (L == 0) {
          plain.push_back(g);
        } else {
          Polyhedron within = out_.ha.locations[s].inv.intersect(g);
          for (const auto& p : complement(P.dnf[e.dst], Polyhedron(N_))) {
            Polyhedron pg = g.intersect(p.preimage(r));
            if (!pg.intersect(within).is_empty()) plain.push_back(std::move(pg));
          }
          for (const auto& tc : P.timing_compl) plain.push_back(g.intersect(tc));
        }
        for (const auto& pg : plain)
          for (size_t d : cells_[L][e.dst]) add_edge(s, d, pg, r, LshaEdgeInfo::Kind::Ha, L, static_cast<long>(ei), label);
      }
    }
  }

  void local_edges(size_t L, size_t q) {
    const Plan& P = plans_[L];
    const auto& cells = cells_[L][q];
    if (cells.empty()) return;
    Polyhedron lvl = level_guard(L);
    Map id = identity();
    if (P.ev == Plan::Ev::Loc) return;
    if (L == 0) {
      size_t c = cells[0];
      for (const auto& conj : P.dnf[q]) {
        Polyhedron g = lvl.intersect(poly(conj));
        if (P.ev == Plan::Ev::None) {
          advance(c, L, q, g, id, -1);
          continue;
        }
        if (undetectable(L, q)) continue;
        g.add(eq0(P.e));
        for (bool up : {true, false}) {
          if (up ? !P.up : !P.down) continue;
          auto sg = sign_guard(L, q, up);
          if (sg) advance(c, L, q, g.intersect(*sg), id, -1);
        }
      }
      return;
    }
    auto role = [&](size_t id) { return out_.loc_info[id].role; };
    if (P.ev == Plan::Ev::None) {
      Rational lo = fa_.decl.delay_lo(L - 1);
      size_t k = 0;
      for (size_t c : cells) {
        if (role(c) != LshaLocInfo::Role::Match) continue;
        advance(c, L, q, lvl.intersect(P.timing), id, -1);
        ++k;
      }
      for (size_t a : cells)
        for (size_t b : cells) {
          if (a == b || role(a) == LshaLocInfo::Role::Plain) continue;
          Polyhedron g = lvl;
          if (role(a) == LshaLocInfo::Role::Match && role(b) == LshaLocInfo::Role::Rest) {
            if (lo == 0) continue;
            g.add_le({{out_.lt_var, Rational(1)}}, lo);
          }
          add_edge(a, b, g, id, LshaEdgeInfo::Kind::Boundary, L, -1, "b" + std::to_string(L));
        }
      return;
    }
    // linear event split into e <= 0 and e >= 0
    size_t below = SIZE_MAX, above = SIZE_MAX;
    for (size_t c : cells) {
      if (role(c) == LshaLocInfo::Role::Below) below = c;
      if (role(c) == LshaLocInfo::Role::Above) above = c;
    }
    if (below == SIZE_MAX && above == SIZE_MAX) return;
    std::vector<Polyhedron> blocked = complement(P.dnf[q], Polyhedron(N_));
    for (const auto& tc : P.timing_compl) blocked.push_back(tc);
    for (bool up : {true, false}) {
      size_t pre = up ? below : above, post = up ? above : below;
      bool is_event = up ? P.up : P.down;
      if (pre == SIZE_MAX) continue;
      if (is_event) {
        auto sg = sign_guard(L, q, up);
        if (sg)
          for (const auto& conj : P.dnf[q]) {
            Polyhedron g = lvl.intersect(poly(conj)).intersect(P.timing).intersect(*sg);
            g.add(eq0(P.e));
            advance(pre, L, q, g, id, -1);
          }
      }
      if (post == SIZE_MAX) continue;
      if (!is_event) {
        add_edge(pre, post, lvl, id, LshaEdgeInfo::Kind::Boundary, L, -1, "b" + std::to_string(L));
      } else {
        for (const auto& piece : blocked)
          add_edge(pre, post, lvl.intersect(piece), id, LshaEdgeInfo::Kind::Boundary, L, -1, "b" + std::to_string(L));
      }
    }
  }

  const HybridAutomaton& h_;
  const FeatureAutomaton& fa_;
  Lsha out_;
  size_t N_ = 0;
  std::map<std::string, size_t> local_idx_;
  std::vector<Plan> plans_;
  std::vector<std::vector<std::vector<size_t>>> cells_;
  std::map<std::tuple<size_t, size_t, size_t>, size_t> pauses_;
  std::set<std::string> names_;
};

}  // namespace

Lsha build_lsha(const HybridAutomaton& h, const FeatureAutomaton& fa, const LshaOptions& opt) {
  return Builder(h, fa).run(opt);
}

BoundsReport check_bounds(const Lsha& l, const HybridAutomaton& h, const FeatureAutomaton& fa) {
  BoundsReport r;
  r.xf = l.ha.dim();
  r.xh = h.dim();
  r.v = fa.value_vars().size();
  r.c = FeatureAutomaton::timers().size();
  r.k = h.locations.size();
  if (r.xf != r.xh + r.v + r.c + 1)
    r.problems.push_back("variable count " + std::to_string(r.xf) + " != " + std::to_string(r.xh) + " + " +
                         std::to_string(r.v) + " + " + std::to_string(r.c) + " + 1");
  std::set<size_t> base;
  for (size_t i = 0; i < l.loc_info.size(); ++i) {
    const auto& info = l.loc_info[i];
    if (info.kind == LshaLocInfo::Kind::Cell) base.insert(info.ha_loc);
    if (info.kind == LshaLocInfo::Kind::Pause) ++r.pause;
    if (info.kind != LshaLocInfo::Kind::Cell) {
      for (const auto& f : l.ha.locations[i].flow)
        if (!f.is_zero()) r.problems.push_back("variables evolve in pause location " + l.ha.locations[i].name);
    }
  }
  r.base_locations = base.size();
  if (r.base_locations > r.k)
    r.problems.push_back("non-pause cells map onto " + std::to_string(r.base_locations) + " > " +
                         std::to_string(r.k) + " model locations");
  size_t m = fa.max_reset_len();
  r.pause_bound = fa.n() * r.k * (m > 0 ? m - 1 : 0);
  if (r.pause > r.pause_bound)
    r.problems.push_back("pause locations " + std::to_string(r.pause) + " exceed " + std::to_string(r.pause_bound));
  for (size_t i = 0; i < l.ha.edges.size(); ++i) {
    const auto& e = l.ha.edges[i];
    if (e.src == l.final_loc && !e.stutter) r.problems.push_back("final location has an outgoing edge");
    if (l.edge_info[i].kind == LshaEdgeInfo::Kind::Advance) {
      // level moves by exactly one
      const auto& f = e.reset[l.level_var];
      if (!f.is_constant() || f.c != Rational(static_cast<long>(l.edge_info[i].level + 1)))
        r.problems.push_back("advance edge " + e.label + " does not increment level by one");
    }
  }
  if (!r.ok()) {
    std::string msg;
    for (const auto& p : r.problems) msg += (msg.empty() ? "" : "; ") + p;
    throw BoundViolation(msg);
  }
  return r;
}

}  // namespace featrange
