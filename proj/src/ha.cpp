#include "featrange/ha.hpp"

#include "featrange/errors.hpp"
#include "lexer.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace featrange {

using detail::Token;
using detail::TokenStream;

std::optional<size_t> HybridAutomaton::find_location(const std::string& name) const {
  for (size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == name) return i;
  return std::nullopt;
}

std::optional<size_t> HybridAutomaton::find_var(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return i;
  return std::nullopt;
}

bool HybridAutomaton::is_rectangular() const {
  for (const auto& l : locations)
    for (const auto& f : l.flow)
      if (!f.is_rate()) return false;
  return true;
}

std::vector<AffineForm> HybridAutomaton::identity_reset() const {
  std::vector<AffineForm> r;
  for (size_t i = 0; i < dim(); ++i) r.push_back(AffineForm::var(dim(), i));
  return r;
}

bool HybridAutomaton::is_identity(const std::vector<AffineForm>& reset) {
  for (size_t i = 0; i < reset.size(); ++i) {
    const auto& f = reset[i];
    if (f.c != 0) return false;
    for (size_t j = 0; j < f.a.size(); ++j)
      if (f.a[j] != (i == j ? 1 : 0)) return false;
  }
  return true;
}

void add_stutter_edges(HybridAutomaton& h) {
  for (size_t i = 0; i < h.locations.size(); ++i) {
    Edge e;
    e.src = e.dst = i;
    e.label = "stutter";
    e.guard = h.locations[i].inv;
    e.reset = h.identity_reset();
    e.stutter = true;
    h.edges.push_back(std::move(e));
  }
}

void validate(const HybridAutomaton& h) {
  size_t n = h.dim();
  if (h.locations.empty()) throw ValidationError("model has no locations");
  std::set<std::string> names;
  for (const auto& l : h.locations) {
    if (!names.insert(l.name).second) throw ValidationError("location '" + l.name + "' declared twice");
    if (l.inv.dim() != n) throw ValidationError("location '" + l.name + "': invariant dimension");
    if (l.flow.size() != n) throw ValidationError("location '" + l.name + "': flow arity");
    for (size_t i = 0; i < n; ++i) {
      const auto& f = l.flow[i];
      if (f.is_rate() && f.lo > f.hi)
        throw ValidationError("location '" + l.name + "': rate interval of " + h.vars[i] + " has lo > hi");
      if (!f.is_rate() && f.expr.a.size() != n)
        throw ValidationError("location '" + l.name + "': affine flow dimension");
    }
  }
  for (const auto& e : h.edges) {
    if (e.src >= h.locations.size() || e.dst >= h.locations.size())
      throw ValidationError("edge '" + e.label + "' references a missing location");
    if (e.guard.dim() != n || e.reset.size() != n)
      throw ValidationError("edge '" + e.label + "': dimension mismatch");
  }
  if (h.init_loc >= h.locations.size()) throw ValidationError("initial location does not exist");
  if (h.init.dim() != n) throw ValidationError("initial region dimension");
  const auto& il = h.locations[h.init_loc];
  if (h.init.is_empty()) throw ValidationError("initial region in '" + il.name + "' is empty");
  if (!il.inv.contains(h.init))
    throw ValidationError("initial region is not inside the invariant of location '" + il.name + "'");
}

HybridAutomaton hybridize(const HybridAutomaton& h) {
  HybridAutomaton out = h;
  for (auto& l : out.locations) {
    bool empty = false, checked = false;
    for (size_t i = 0; i < l.flow.size(); ++i) {
      auto& f = l.flow[i];
      if (f.is_rate()) continue;
      if (!checked) {
        empty = l.inv.is_empty();
        checked = true;
      }
      if (empty) {
        f = Flow::rate(0, 0);
        continue;
      }
      auto lo = l.inv.optimize(f.expr, false);
      auto hi = l.inv.optimize(f.expr, true);
      if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
        throw UnboundedInvariant("location '" + l.name + "' does not bound the flow of " + h.vars[i]);
      f = Flow::rate(lo.value, hi.value);
    }
  }
  return out;
}

// ---------------------------------------------------------------- printing

std::string format_affine(const AffineForm& f, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < f.a.size(); ++j) {
    const auto& k = f.a[j];
    if (k == 0) continue;
    if (first)
      os << (k < 0 ? "-" : "");
    else
      os << (k < 0 ? " - " : " + ");
    Rational m = abs(k);
    if (m != 1) os << to_literal(m) << "*";
    os << names.at(j);
    first = false;
  }
  if (first)
    os << to_literal(f.c);
  else if (f.c != 0)
    os << (f.c < 0 ? " - " : " + ") << to_literal(abs(f.c));
  return os.str();
}

std::string to_ha(const HybridAutomaton& h) {
  std::ostringstream os;
  os << "var";
  for (const auto& v : h.vars) os << " " << v;
  os << ";\n";
  for (const auto& [k, v] : h.params) os << "param " << k << " " << to_literal(v) << ";\n";
  for (const auto& l : h.locations) {
    os << "location " << l.name << " {\n  inv: " << l.inv.to_string(h.vars) << ";\n  flow:";
    for (size_t i = 0; i < h.dim(); ++i) {
      const auto& f = l.flow[i];
      os << " " << h.vars[i] << "' = ";
      if (f.is_rate())
        os << "[" << to_literal(f.lo) << ", " << to_literal(f.hi) << "]";
      else
        os << format_affine(f.expr, h.vars);
      os << ";";
    }
    os << "\n}\n";
  }
  for (const auto& e : h.edges) {
    if (e.stutter) continue;
    os << "edge " << h.locations[e.src].name << " -> " << h.locations[e.dst].name << " {";
    if (!e.label.empty()) os << " label " << e.label << ";";
    if (!e.guard.is_universe()) os << " guard: " << e.guard.to_string(h.vars) << ";";
    bool any = false;
    for (size_t i = 0; i < h.dim(); ++i) {
      const auto& f = e.reset[i];
      bool ident = f.c == 0;
      for (size_t j = 0; ident && j < f.a.size(); ++j)
        if (f.a[j] != (i == j ? 1 : 0)) ident = false;
      if (ident) continue;
      os << (any ? ", " : " reset: ") << h.vars[i] << " := " << format_affine(f, h.vars);
      any = true;
    }
    if (any) os << ";";
    os << " }\n";
  }
  os << "init " << h.locations[h.init_loc].name << " { " << h.init.to_string(h.vars) << "; }\n";
  return os.str();
}

std::string to_dot(const HybridAutomaton& h, const std::string& graph_name) {
  std::ostringstream os;
  auto quote = [](const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r + "\"";
  };
  os << "digraph " << quote(graph_name) << " {\n  rankdir=LR;\n";
  os << "  __init [shape=point];\n  __init -> n" << h.init_loc << ";\n";
  for (size_t i = 0; i < h.locations.size(); ++i) {
    const auto& l = h.locations[i];
    os << "  n" << i << " [label=" << quote(l.name + "\\n" + l.inv.to_string(h.vars)) << "];\n";
  }
  for (const auto& e : h.edges) {
    if (e.stutter) continue;
    std::string lbl = e.label;
    if (!e.guard.is_universe()) lbl += (lbl.empty() ? "" : "\\n") + e.guard.to_string(h.vars);
    for (size_t i = 0; i < h.dim(); ++i) {
      const auto& f = e.reset[i];
      bool ident = f.c == 0;
      for (size_t j = 0; ident && j < f.a.size(); ++j)
        if (f.a[j] != (i == j ? 1 : 0)) ident = false;
      if (!ident) lbl += "\\n" + h.vars[i] + " := " + format_affine(f, h.vars);
    }
    os << "  n" << e.src << " -> n" << e.dst << " [label=" << quote(lbl) << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

const std::vector<std::string> kPuncts = {"->", ":=", "'", "<=", ">=", "==", "<", ">", "=", "&&", "&",
                                          "{",  "}",  "(", ")",  "[",  "]",  ",", ";", ":", "+",  "-",
                                          "*",  "/"};

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : ts_(detail::tokenize(text, kPuncts)) {}

  HybridAutomaton run() {
    bool have_init = false;
    std::string init_name;
    SourcePos init_pos;
    std::vector<std::pair<std::string, std::string>> edge_ends;
    std::vector<SourcePos> edge_pos;
    std::vector<std::pair<std::string, Polyhedron>> pending_init;
    while (!ts_.at_end()) {
      if (ts_.accept_ident("var")) {
        if (!h_.locations.empty()) ts_.fail("variables must be declared before locations");
        while (!ts_.accept(";")) {
          SourcePos p = ts_.peek().pos;
          std::string v = ts_.ident("variable name");
          if (h_.find_var(v) || h_.params.count(v))
            throw ValidationError(at(p) + "'" + v + "' declared twice");
          h_.vars.push_back(v);
          ts_.accept(",");
        }
      } else if (ts_.accept_ident("param")) {
        SourcePos p = ts_.peek().pos;
        std::string k = ts_.ident("parameter name");
        if (h_.find_var(k) || h_.params.count(k)) throw ValidationError(at(p) + "'" + k + "' declared twice");
        ts_.accept("=");
        AffineForm v = expr();
        if (!v.is_constant()) throw ValidationError(at(p) + "parameter value must be constant");
        h_.params[k] = v.c;
        ts_.expect(";");
      } else if (ts_.accept_ident("location")) {
        location();
      } else if (ts_.accept_ident("edge")) {
        edge_pos.push_back(ts_.peek().pos);
        Edge e;
        std::string src = ts_.ident("location name");
        ts_.expect("->");
        std::string dst = ts_.ident("location name");
        edge_body(e);
        edge_ends.emplace_back(src, dst);
        edges_.push_back(std::move(e));
      } else if (ts_.accept_ident("init")) {
        if (have_init) ts_.fail("second init block");
        init_pos = ts_.peek().pos;
        init_name = ts_.ident("location name");
        ts_.expect("{");
        h_.init = constraints();
        ts_.accept(";");
        ts_.expect("}");
        have_init = true;
      } else {
        ts_.fail("unexpected " + TokenStream::describe(ts_.peek()), "var, param, location, edge or init");
      }
    }
    for (size_t i = 0; i < edges_.size(); ++i) {
      auto s = h_.find_location(edge_ends[i].first);
      auto d = h_.find_location(edge_ends[i].second);
      if (!s) throw ValidationError(at(edge_pos[i]) + "edge from unknown location '" + edge_ends[i].first + "'");
      if (!d) throw ValidationError(at(edge_pos[i]) + "edge to unknown location '" + edge_ends[i].second + "'");
      edges_[i].src = *s;
      edges_[i].dst = *d;
      h_.edges.push_back(std::move(edges_[i]));
    }
    if (!have_init) throw ValidationError("model has no init block");
    auto il = h_.find_location(init_name);
    if (!il) throw ValidationError(at(init_pos) + "init names unknown location '" + init_name + "'");
    h_.init_loc = *il;
    validate(h_);
    add_stutter_edges(h_);
    return std::move(h_);
  }

 private:
  static std::string at(SourcePos p) {
    return std::to_string(p.line) + ":" + std::to_string(p.col) + ": ";
  }

  size_t n() const { return h_.dim(); }

  void location() {
    Location l;
    SourcePos p = ts_.peek().pos;
    l.name = ts_.ident("location name");
    if (h_.find_location(l.name)) throw ValidationError(at(p) + "location '" + l.name + "' declared twice");
    l.inv = Polyhedron(n());
    l.flow.assign(n(), Flow());
    std::vector<bool> seen(n(), false);
    bool have_inv = false;
    ts_.expect("{");
    while (!ts_.accept("}")) {
      if (ts_.accept_ident("inv")) {
        ts_.expect(":");
        l.inv.add_all(constraints());
        have_inv = true;
        ts_.expect(";");
      } else if (ts_.accept_ident("flow")) {
        ts_.expect(":");
        while (ts_.peek().kind == Token::Kind::Ident && ts_.peek(1).kind == Token::Kind::Punct &&
               ts_.peek(1).text == "'") {
          SourcePos vp = ts_.peek().pos;
          std::string v = ts_.ident();
          auto idx = h_.find_var(v);
          if (!idx) throw ValidationError(at(vp) + "flow of undeclared variable '" + v + "'");
          if (seen[*idx]) throw ValidationError(at(vp) + "flow of '" + v + "' given twice");
          seen[*idx] = true;
          ts_.expect("'");
          ts_.expect("=");
          if (ts_.accept("[")) {
            AffineForm lo = expr();
            ts_.expect(",");
            AffineForm hi = expr();
            ts_.expect("]");
            if (!lo.is_constant() || !hi.is_constant())
              throw ValidationError(at(vp) + "rate bounds must be constant");
            l.flow[*idx] = Flow::rate(lo.c, hi.c);
          } else {
            AffineForm e = expr();
            if (e.is_constant())
              l.flow[*idx] = Flow::rate(e.c, e.c);
            else
              l.flow[*idx] = Flow::affine(std::move(e));
          }
          ts_.expect(";");
        }
      } else {
        ts_.fail("unexpected " + TokenStream::describe(ts_.peek()), "inv:, flow: or '}'");
      }
    }
    if (!have_inv) throw ValidationError(at(p) + "location '" + l.name + "' has no invariant");
    for (size_t i = 0; i < n(); ++i)
      if (!seen[i]) throw ValidationError(at(p) + "location '" + l.name + "' gives no flow for " + h_.vars[i]);
    h_.locations.push_back(std::move(l));
  }

  void edge_body(Edge& e) {
    e.guard = Polyhedron(n());
    e.reset = h_.identity_reset();
    ts_.expect("{");
    while (!ts_.accept("}")) {
      if (ts_.accept_ident("label")) {
        e.label = ts_.ident("label");
        ts_.expect(";");
      } else if (ts_.accept_ident("guard")) {
        ts_.expect(":");
        e.guard.add_all(constraints());
        ts_.expect(";");
      } else if (ts_.accept_ident("reset")) {
        ts_.expect(":");
        std::vector<bool> seen(n(), false);
        for (;;) {
          SourcePos vp = ts_.peek().pos;
          std::string v = ts_.ident("variable name");
          auto idx = h_.find_var(v);
          if (!idx) throw ValidationError(at(vp) + "reset of undeclared variable '" + v + "'");
          if (seen[*idx]) throw ValidationError(at(vp) + "variable '" + v + "' reset twice");
          seen[*idx] = true;
          ts_.expect(":=");
          e.reset[*idx] = expr();
          if (ts_.accept(",")) continue;
          ts_.expect(";");
          if (ts_.peek().kind == Token::Kind::Ident && ts_.peek(1).kind == Token::Kind::Punct &&
              ts_.peek(1).text == ":=")
            continue;
          break;
        }
      } else {
        ts_.fail("unexpected " + TokenStream::describe(ts_.peek()), "label, guard:, reset: or '}'");
      }
    }
  }

  // c1 & c2 & ... ; each c may be a chain a <= b <= c, "x in [a, b]" or "true".
  Polyhedron constraints() {
    Polyhedron p(n());
    do {
      if (ts_.accept_ident("true")) continue;
      if (ts_.accept_ident("false")) {
        p.add_le({}, -1);
        continue;
      }
      if (ts_.peek().kind == Token::Kind::Ident && ts_.peek(1).kind == Token::Kind::Ident &&
          ts_.peek(1).text == "in") {
        AffineForm x = expr();
        ts_.expect_ident("in");
        ts_.expect("[");
        AffineForm lo = expr();
        ts_.expect(",");
        AffineForm hi = expr();
        ts_.expect("]");
        add_rel(p, lo, "<=", x);
        add_rel(p, x, "<=", hi);
        continue;
      }
      AffineForm lhs = expr();
      std::string rel = relation();
      AffineForm rhs = expr();
      add_rel(p, lhs, rel, rhs);
      while (is_relation()) {
        std::string r2 = relation();
        AffineForm next = expr();
        add_rel(p, rhs, r2, next);
        rhs = std::move(next);
      }
    } while (ts_.accept("&") || ts_.accept("&&"));
    return p;
  }

  bool is_relation() const {
    return ts_.is("<=") || ts_.is(">=") || ts_.is("<") || ts_.is(">") || ts_.is("==") || ts_.is("=");
  }

  std::string relation() {
    if (!is_relation()) ts_.fail("unexpected " + TokenStream::describe(ts_.peek()), "relation");
    return ts_.next().text;
  }

  void add_rel(Polyhedron& p, const AffineForm& l, const std::string& rel, const AffineForm& r) {
    // move everything to the form a·x REL b
    AffineForm d = (rel == ">=" || rel == ">") ? r - l : l - r;
    LinCon c;
    c.a = d.a;
    c.b = -d.c;
    c.rel = (rel == "<" || rel == ">") ? Rel::Lt : (rel == "==" || rel == "=") ? Rel::Eq : Rel::Le;
    p.add(std::move(c));
  }

  AffineForm expr() {
    AffineForm e = term();
    for (;;) {
      if (ts_.accept("+"))
        e = e + term();
      else if (ts_.accept("-"))
        e = e - term();
      else
        return e;
    }
  }

  AffineForm term() {
    AffineForm e = factor();
    for (;;) {
      SourcePos p = ts_.peek().pos;
      if (ts_.accept("*")) {
        AffineForm r = factor();
        if (e.is_constant())
          e = e.c * r;
        else if (r.is_constant())
          e = r.c * e;
        else
          throw SyntaxError(p, "nonlinear product");
      } else if (ts_.accept("/")) {
        AffineForm r = factor();
        if (!r.is_constant() || r.c == 0) throw SyntaxError(p, "division by a non-constant or zero");
        e = Rational(1 / r.c) * e;
      } else {
        return e;
      }
    }
  }

  AffineForm factor() {
    const Token& t = ts_.peek();
    if (ts_.accept("-")) return Rational(-1) * factor();
    if (ts_.accept("+")) return factor();
    if (ts_.accept("(")) {
      AffineForm e = expr();
      ts_.expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Number) {
      auto v = parse_rational(t.text);
      if (!v) throw SyntaxError(t.pos, "malformed number '" + t.text + "'");
      ts_.next();
      return AffineForm::constant(n(), *v);
    }
    if (t.kind == Token::Kind::Ident) {
      if (auto idx = h_.find_var(t.text)) {
        ts_.next();
        return AffineForm::var(n(), *idx);
      }
      auto it = h_.params.find(t.text);
      if (it != h_.params.end()) {
        ts_.next();
        return AffineForm::constant(n(), it->second);
      }
      throw ValidationError(at(t.pos) + "undeclared identifier '" + t.text + "'");
    }
    ts_.fail("unexpected " + TokenStream::describe(t), "expression");
  }

  TokenStream ts_;
  HybridAutomaton h_;
  std::vector<Edge> edges_;
};

}  // namespace

HybridAutomaton parse_model(std::string_view text) { return ModelParser(text).run(); }

HybridAutomaton parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IOError", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace featrange
