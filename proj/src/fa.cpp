#include "featrange/fa.hpp"

#include <algorithm>
#include <sstream>

namespace featrange {

std::vector<std::string> FeatureAutomaton::value_vars() const {
  auto v = decl.locals;
  v.push_back(decl.name);
  return v;
}

size_t FeatureAutomaton::pause_count() const {
  return static_cast<size_t>(std::count_if(locs.begin(), locs.end(), [](const FaLocation& l) {
    return l.kind == FaLocation::Kind::Pause;
  }));
}

size_t FeatureAutomaton::max_reset_len() const {
  size_t m = 0;
  for (const auto& r : resets) m = std::max(m, r.size());
  return m;
}

size_t FeatureAutomaton::advance_edge(size_t i) const {
  for (size_t k = 0; k < edges.size(); ++k)
    if (edges[k].sub && *edges[k].sub == i) return k;
  throw std::out_of_range("no edge for sub-expression");
}

FeatureAutomaton build_feature_automaton(const FeatureDecl& f) {
  if (!f.grounded()) throw SemanticError("feature " + f.name + " still has unbound parameters");
  FeatureAutomaton fa;
  fa.decl = f;
  size_t n = f.seq.size();
  std::vector<size_t> main(n + 1);
  for (size_t i = 0; i <= n; ++i) {
    FaLocation l;
    l.kind = FaLocation::Kind::Main;
    l.name = "q" + std::to_string(i + 1);
    l.step = i;
    l.in_z = i == n;
    main[i] = fa.locs.size();
    fa.locs.push_back(l);
  }
  for (size_t i = 0; i < n; ++i) {
    std::vector<Assign> chain;
    chain.push_back({kLocTimer, LinExpr::constant_of(0)});
    for (const auto& a : f.seq[i].assigns) {
      Assign c = a;
      auto it = c.rhs.terms.find(kTimeIdent);
      if (it != c.rhs.terms.end()) {
        Rational k = it->second;
        c.rhs.terms.erase(it);
        c.rhs.terms[kTimer] += k;
      }
      chain.push_back(std::move(c));
    }
    fa.resets.push_back(chain);
    size_t prev = main[i];
    for (size_t j = 0; j < chain.size(); ++j) {
      size_t dst;
      if (j + 1 == chain.size()) {
        dst = main[i + 1];
      } else {
        FaLocation p;
        p.kind = FaLocation::Kind::Pause;
        p.name = "q" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
        p.step = i;
        p.hop = j + 1;
        p.in_z = true;
        dst = fa.locs.size();
        fa.locs.push_back(p);
      }
      FaEdge e;
      e.src = prev;
      e.dst = dst;
      if (j == 0) {
        e.sub = i;
        if (i > 0) e.delay = i - 1;
      }
      e.reset = chain[j];
      fa.edges.push_back(std::move(e));
      prev = dst;
    }
  }
  FaLocation fin;
  fin.kind = FaLocation::Kind::Final;
  fin.name = "qF";
  fin.step = n;
  fin.in_z = true;
  fa.final_loc = fa.locs.size();
  fa.locs.push_back(fin);
  FaEdge last;
  last.src = main[n];
  last.dst = fa.final_loc;
  last.reset = {f.name, f.feature_expr};
  fa.edges.push_back(std::move(last));
  return fa;
}

Rational timer_rate(const FeatureAutomaton& fa, size_t loc, const std::string& var) {
  if (var != kTimer && var != kLocTimer) return 0;
  return fa.locs.at(loc).in_z ? 0 : 1;
}

namespace {

std::string guard_text(const FeatureAutomaton& fa, const FaEdge& e) {
  std::vector<std::string> parts;
  if (e.sub) {
    const auto& s = fa.decl.seq[*e.sub];
    if (!s.dnf.empty()) {
      std::string d;
      for (size_t k = 0; k < s.dnf.size(); ++k) {
        d += k ? " || " : "";
        d += "(";
        for (size_t m = 0; m < s.dnf[k].size(); ++m) d += (m ? " && " : "") + to_string(s.dnf[k][m]);
        d += ")";
      }
      parts.push_back(d);
    }
    if (s.event) parts.push_back(to_string(*s.event));
  }
  if (e.delay) {
    Rational lo = fa.decl.delay_lo(*e.delay);
    auto hi = fa.decl.delay_hi(*e.delay);
    parts.push_back(std::string(kLocTimer) + " >= " + to_literal(lo));
    if (hi) parts.push_back(std::string(kLocTimer) + " <= " + to_literal(*hi));
  }
  if (parts.empty()) return "true";
  std::string r;
  for (size_t k = 0; k < parts.size(); ++k) r += (k ? " && " : "") + parts[k];
  return r;
}

}  // namespace

std::string to_text(const FeatureAutomaton& fa) {
  std::ostringstream os;
  os << "// feature automaton for " << fa.decl.name << "\nvar";
  for (const auto& v : fa.value_vars()) os << " " << v;
  for (const auto& c : FeatureAutomaton::timers()) os << " " << c;
  os << ";\n";
  for (size_t i = 0; i < fa.locs.size(); ++i) {
    const auto& l = fa.locs[i];
    os << "location " << l.name << " {";
    if (l.in_z) os << " pause;";
    os << " flow:";
    for (const auto& c : FeatureAutomaton::timers()) os << " " << c << "' = " << to_literal(timer_rate(fa, i, c)) << ";";
    os << " }\n";
  }
  for (const auto& e : fa.edges) {
    os << "edge " << fa.locs[e.src].name << " -> " << fa.locs[e.dst].name << " { guard: " << guard_text(fa, e)
       << "; reset: " << e.reset.local << " := " << to_string(e.reset.rhs) << "; }\n";
  }
  os << "init " << fa.locs[0].name << ";\n";
  return os.str();
}

std::string to_dot(const FeatureAutomaton& fa) {
  std::ostringstream os;
  os << "digraph \"" << fa.decl.name << "\" {\n  rankdir=LR;\n";
  for (size_t i = 0; i < fa.locs.size(); ++i) {
    const auto& l = fa.locs[i];
    const char* shape = l.kind == FaLocation::Kind::Final ? "doublecircle"
                        : l.kind == FaLocation::Kind::Pause ? "box"
                                                            : "circle";
    os << "  n" << i << " [label=\"" << l.name << "\", shape=" << shape << "];\n";
  }
  for (const auto& e : fa.edges) {
    std::string g = guard_text(fa, e);
    std::string lbl = (g == "true" ? "" : g + "\\n") + e.reset.local + " := " + to_string(e.reset.rhs);
    std::string esc;
    for (char c : lbl) {
      if (c == '"') esc += '\\';
      esc += c;
    }
    os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << esc << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace featrange
