#include "featrange/fia.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace featrange {

using detail::Token;
using detail::TokenStream;

void LinExpr::add(const LinExpr& o, const Rational& k) {
  for (const auto& [n, c] : o.terms) {
    auto& v = terms[n];
    v += k * c;
    if (v == 0) terms.erase(n);
  }
  constant += k * o.constant;
}

void LinExpr::scale(const Rational& k) {
  if (k == 0) {
    terms.clear();
    constant = 0;
    return;
  }
  for (auto& [n, c] : terms) c *= k;
  constant *= k;
}

Rational FeatureDecl::delay_lo(size_t i) const {
  const auto& d = delays.at(i);
  if (!d.lo.is_constant()) throw SemanticError("delay bound depends on an unbound parameter");
  return d.lo.constant;
}

std::optional<Rational> FeatureDecl::delay_hi(size_t i) const {
  const auto& d = delays.at(i);
  if (!d.hi) return std::nullopt;
  if (!d.hi->is_constant()) throw SemanticError("delay bound depends on an unbound parameter");
  return d.hi->constant;
}

bool is_state_ident(const std::string& id) { return strip_instance(id) == "state"; }

std::string strip_instance(const std::string& id) {
  auto dot = id.rfind('.');
  return dot == std::string::npos ? id : id.substr(dot + 1);
}

const char* to_string(RelOp r) {
  switch (r) {
    case RelOp::Ge: return ">=";
    case RelOp::Gt: return ">";
    case RelOp::Le: return "<=";
    case RelOp::Lt: return "<";
    case RelOp::Eq: return "==";
  }
  return "?";
}

RelOp complement_closure(RelOp r) {
  switch (r) {
    case RelOp::Ge:
    case RelOp::Gt: return RelOp::Le;
    case RelOp::Le:
    case RelOp::Lt: return RelOp::Ge;
    case RelOp::Eq: break;
  }
  throw UnsupportedEvent("equality has no convex complement");
}

std::vector<Event> desugar_event(const Event& e) {
  if (e.porv.kind == Porv::Kind::LocEq) {
    if (e.edge != EventEdge::Pos)
      throw UnsupportedEvent("only @+ is defined for location events (state == " + e.porv.loc + ")");
    return {e};
  }
  auto with = [&](RelOp r) {
    Event o = e;
    o.edge = EventEdge::Pos;
    o.porv.rel = r;
    return o;
  };
  RelOp r = e.porv.rel;
  switch (e.edge) {
    case EventEdge::Pos:
      if (r == RelOp::Gt) return {with(RelOp::Ge)};
      if (r == RelOp::Lt) return {with(RelOp::Le)};
      return {e};
    case EventEdge::Neg:
      if (r == RelOp::Eq) throw UnsupportedEvent("@- of an equality");
      return {with(complement_closure(r))};
    case EventEdge::Any: {
      if (r == RelOp::Eq) throw UnsupportedEvent("@ of an equality");
      RelOp pos = (r == RelOp::Ge || r == RelOp::Gt) ? RelOp::Ge : RelOp::Le;
      return {with(pos), with(complement_closure(r))};
    }
  }
  return {e};
}

// ---------------------------------------------------------------- printing

namespace {

std::string term_text(const Rational& mag, const std::string& name) {
  if (mag == 1) return name;
  return to_literal(mag) + "*" + name;
}

// Renders Σ terms + constant; empty renders "0".
std::string render(const std::vector<std::pair<std::string, Rational>>& terms, const Rational& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, k] : terms) {
    if (k == 0) continue;
    if (first)
      os << (k < 0 ? "-" : "");
    else
      os << (k < 0 ? " - " : " + ");
    os << term_text(abs(k), n);
    first = false;
  }
  if (c != 0 || first) {
    if (first)
      os << to_literal(c);
    else
      os << (c < 0 ? " - " : " + ") << to_literal(abs(c));
  }
  return os.str();
}

}  // namespace

std::string to_string(const LinExpr& e) {
  std::vector<std::pair<std::string, Rational>> t(e.terms.begin(), e.terms.end());
  return render(t, e.constant);
}

std::string to_string(const Porv& p, const std::vector<std::string>& params) {
  if (p.kind == Porv::Kind::LocEq) return "state == " + p.loc;
  std::vector<std::pair<std::string, Rational>> left, right;
  for (const auto& [n, k] : p.expr.terms) {
    if (std::find(params.begin(), params.end(), n) != params.end())
      right.emplace_back(n, -k);
    else
      left.emplace_back(n, k);
  }
  if (left.empty()) {
    left = std::move(right);
    right.clear();
    for (auto& kv : left) kv.second = -kv.second;
  }
  return render(left, 0) + " " + to_string(p.rel) + " " + render(right, -p.expr.constant);
}

std::string to_string(const Event& e, const std::vector<std::string>& params) {
  const char* op = e.edge == EventEdge::Pos ? "@+" : e.edge == EventEdge::Neg ? "@-" : "@";
  return std::string(op) + "(" + to_string(e.porv, params) + ")";
}

std::string to_string(const FeatureDecl& f) {
  std::ostringstream os;
  os << "feature " << f.name << "(";
  for (size_t i = 0; i < f.params.size(); ++i) os << (i ? ", " : "") << f.params[i];
  os << ");\nbegin\n";
  if (!f.locals.empty()) {
    os << "  var ";
    for (size_t i = 0; i < f.locals.size(); ++i) os << (i ? ", " : "") << f.locals[i];
    os << ";\n";
  }
  for (size_t i = 0; i < f.seq.size(); ++i) {
    const auto& s = f.seq[i];
    os << "  ";
    if (i > 0) {
      const auto& d = f.delays[i - 1];
      os << "##[" << to_string(d.lo) << ":" << (d.hi ? to_string(*d.hi) : "$") << "] ";
    }
    std::vector<std::string> parts;
    if (!s.dnf.empty()) {
      auto conj = [&](const std::vector<Porv>& c) {
        std::string r = "(";
        for (size_t k = 0; k < c.size(); ++k) r += (k ? " && " : "") + to_string(c[k], f.params);
        return r + ")";
      };
      if (s.dnf.size() == 1) {
        parts.push_back(conj(s.dnf[0]));
      } else {
        std::string r = "(";
        for (size_t k = 0; k < s.dnf.size(); ++k) r += (k ? " || " : "") + conj(s.dnf[k]);
        parts.push_back(r + ")");
      }
    }
    if (s.event) parts.push_back(to_string(*s.event, f.params));
    for (size_t k = 0; k < parts.size(); ++k) os << (k ? " && " : "") << parts[k];
    for (const auto& a : s.assigns) os << ", " << a.local << " = " << to_string(a.rhs);
    os << "\n";
  }
  os << "  |-> " << f.name << " = " << to_string(f.feature_expr) << ";\nend\n";
  return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

const std::vector<std::string> kPuncts = {"##", "|->", "||", "&&", "@+", "@-", "@", ">=", "<=",
                                          "==", ">",  "<",   "=",  "(",  ")",  "[",  "]", ",",
                                          ":",  ";",  "+",   "-",  "*",  "/",  "$"};

struct BNode {
  enum class Kind { And, Or, Atom, Ev };
  Kind kind = Kind::Atom;
  std::vector<BNode> kids;
  Porv porv;
  Event ev;
  SourcePos pos;
};

class FiaParser {
 public:
  explicit FiaParser(std::string_view text) : ts_(detail::tokenize(text, kPuncts)) {}

  FeatureDecl run() {
    FeatureDecl f;
    ts_.expect_ident("feature");
    f.name = ts_.ident("feature name");
    ts_.expect("(");
    if (!ts_.is(")")) {
      do f.params.push_back(ts_.ident("parameter name"));
      while (ts_.accept(","));
    }
    ts_.expect(")");
    ts_.accept(";");
    ts_.expect_ident("begin");
    while (ts_.accept_ident("var")) {
      do f.locals.push_back(ts_.ident("local name"));
      while (ts_.accept(","));
      ts_.expect(";");
    }
    params_ = f.params;
    f.seq.push_back(sub_expr());
    while (ts_.is("##")) {
      f.delays.push_back(delay());
      f.seq.push_back(sub_expr());
    }
    ts_.expect("|->");
    SourcePos fpos = ts_.peek().pos;
    std::string fname = ts_.ident("feature name");
    if (fname != f.name)
      throw SemanticError(at(fpos) + "feature expression assigns '" + fname + "' but the feature is '" +
                          f.name + "'");
    ts_.expect("=");
    f.feature_expr = lin_expr();
    ts_.accept(";");
    ts_.expect_ident("end");
    if (!ts_.at_end()) ts_.fail("trailing input after 'end'", "end of input");
    f.warnings = std::move(warnings_);
    validate(f);
    return f;
  }

 private:
  static std::string at(SourcePos p) {
    return std::to_string(p.line) + ":" + std::to_string(p.col) + ": ";
  }

  DelayInterval delay() {
    ts_.expect("##");
    DelayInterval d;
    if (ts_.peek().kind == Token::Kind::Number) {
      d.lo = number();
      d.hi = d.lo;
      return d;
    }
    ts_.expect("[");
    d.lo = lin_expr();
    if (!ts_.accept(":")) ts_.expect(",");
    if (!ts_.accept("$")) d.hi = lin_expr();
    ts_.expect("]");
    return d;
  }

  LinExpr number() {
    const Token& t = ts_.next();
    auto v = parse_rational(t.text);
    if (!v) throw SyntaxError(t.pos, "malformed number '" + t.text + "'");
    return LinExpr::constant_of(*v);
  }

  SubExpr sub_expr() {
    SubExpr s;
    s.pos = ts_.peek().pos;
    BNode root = or_expr();
    to_canonical(root, s);
    while (ts_.accept(",")) {
      Assign a;
      a.local = ts_.ident("local name");
      ts_.expect("=");
      a.rhs = lin_expr();
      s.assigns.push_back(std::move(a));
    }
    return s;
  }

  BNode or_expr() {
    BNode first = and_expr();
    if (!ts_.is("||")) return first;
    BNode n;
    n.kind = BNode::Kind::Or;
    n.pos = first.pos;
    n.kids.push_back(std::move(first));
    while (ts_.accept("||")) n.kids.push_back(and_expr());
    return n;
  }

  BNode and_expr() {
    BNode first = primary();
    if (!ts_.is("&&")) return first;
    BNode n;
    n.kind = BNode::Kind::And;
    n.pos = first.pos;
    n.kids.push_back(std::move(first));
    while (ts_.accept("&&")) n.kids.push_back(primary());
    return n;
  }

  BNode primary() {
    SourcePos pos = ts_.peek().pos;
    if (ts_.is("@+") || ts_.is("@-") || ts_.is("@")) {
      BNode n;
      n.kind = BNode::Kind::Ev;
      n.pos = pos;
      std::string op = ts_.next().text;
      n.ev.edge = op == "@+" ? EventEdge::Pos : op == "@-" ? EventEdge::Neg : EventEdge::Any;
      ts_.expect("(");
      n.ev.porv = atom();
      ts_.expect(")");
      return n;
    }
    if (ts_.is("(")) {
      size_t m = ts_.mark();
      try {
        ts_.next();
        BNode inner = or_expr();
        if (ts_.accept(")")) return inner;
        if (ts_.is(",") || ts_.is("##") || ts_.is("|->")) {
          warnings_.push_back(at(pos) + "unclosed '(' closed implicitly before " +
                              TokenStream::describe(ts_.peek()));
          return inner;
        }
        ts_.fail("unexpected " + TokenStream::describe(ts_.peek()), "')'");
      } catch (const SyntaxError& boolean_err) {
        size_t reached = ts_.mark();
        ts_.reset(m);
        try {
          BNode n;
          n.pos = pos;
          n.porv = atom();
          return n;
        } catch (const SyntaxError& atom_err) {
          if (ts_.mark() >= reached) throw;
          throw boolean_err;
        }
      }
    }
    BNode n;
    n.pos = pos;
    n.porv = atom();
    return n;
  }

  Porv atom() {
    LinExpr lhs = lin_expr();
    Porv p;
    if (ts_.accept(">="))
      p.rel = RelOp::Ge;
    else if (ts_.accept("<="))
      p.rel = RelOp::Le;
    else if (ts_.accept("=="))
      p.rel = RelOp::Eq;
    else if (ts_.accept(">"))
      p.rel = RelOp::Gt;
    else if (ts_.accept("<"))
      p.rel = RelOp::Lt;
    else
      ts_.fail("unexpected " + TokenStream::describe(ts_.peek()), "relation (>=, >, <=, <, ==)");
    LinExpr rhs = lin_expr();
    if (p.rel == RelOp::Eq && single_ident(lhs) && is_state_ident(lhs.terms.begin()->first)) {
      if (!single_ident(rhs)) ts_.fail("location comparison needs a location name", "location name");
      p.kind = Porv::Kind::LocEq;
      p.loc = rhs.terms.begin()->first;
      return p;
    }
    p.expr = std::move(lhs);
    p.expr.add(rhs, -1);
    return p;
  }

  static bool single_ident(const LinExpr& e) {
    return e.constant == 0 && e.terms.size() == 1 && e.terms.begin()->second == 1;
  }

  LinExpr lin_expr() {
    LinExpr e = term();
    for (;;) {
      if (ts_.accept("+"))
        e.add(term());
      else if (ts_.accept("-"))
        e.add(term(), -1);
      else
        return e;
    }
  }

  LinExpr term() {
    LinExpr e = factor();
    for (;;) {
      SourcePos pos = ts_.peek().pos;
      if (ts_.accept("*")) {
        LinExpr r = factor();
        if (e.is_constant()) {
          r.scale(e.constant);
          e = std::move(r);
        } else if (r.is_constant()) {
          e.scale(r.constant);
        } else {
          throw SemanticError(at(pos) + "nonlinear product");
        }
      } else if (ts_.accept("/")) {
        LinExpr r = factor();
        if (!r.is_constant()) throw SemanticError(at(pos) + "division by a non-constant");
        if (r.constant == 0) throw SemanticError(at(pos) + "division by zero");
        e.scale(1 / r.constant);
      } else {
        return e;
      }
    }
  }

  LinExpr factor() {
    const Token& t = ts_.peek();
    if (ts_.accept("-")) {
      LinExpr e = factor();
      e.scale(-1);
      return e;
    }
    if (ts_.accept("+")) return factor();
    if (ts_.accept("(")) {
      LinExpr e = lin_expr();
      ts_.expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Number) return number();
    if (t.kind == Token::Kind::Ident) {
      if (t.text[0] == '$' && t.text != kTimeIdent)
        throw SyntaxError(t.pos, "unknown reserved identifier '" + t.text + "'");
      return LinExpr::ident(ts_.next().text);
    }
    ts_.fail("unexpected " + TokenStream::describe(t), "expression");
  }

  void to_canonical(const BNode& root, SubExpr& s) {
    std::vector<const BNode*> conj;
    if (root.kind == BNode::Kind::And)
      for (const auto& k : root.kids) conj.push_back(&k);
    else
      conj.push_back(&root);
    std::vector<std::vector<std::vector<Porv>>> factors;
    for (const BNode* c : conj) {
      if (c->kind == BNode::Kind::Ev) {
        if (s.event) throw SemanticError(at(c->pos) + "more than one event in a sub-expression");
        s.event = c->ev;
        continue;
      }
      factors.push_back(dnf(*c));
    }
    if (factors.empty()) return;
    std::vector<std::vector<Porv>> acc = {{}};
    for (const auto& f : factors) {
      std::vector<std::vector<Porv>> next;
      for (const auto& a : acc)
        for (const auto& b : f) {
          auto m = a;
          m.insert(m.end(), b.begin(), b.end());
          next.push_back(std::move(m));
        }
      acc = std::move(next);
    }
    s.dnf = std::move(acc);
  }

  std::vector<std::vector<Porv>> dnf(const BNode& n) {
    switch (n.kind) {
      case BNode::Kind::Atom: return {{n.porv}};
      case BNode::Kind::Ev:
        throw SemanticError(at(n.pos) + "an event may only appear as a top-level conjunct");
      case BNode::Kind::Or: {
        std::vector<std::vector<Porv>> out;
        for (const auto& k : n.kids) {
          auto d = dnf(k);
          out.insert(out.end(), d.begin(), d.end());
        }
        return out;
      }
      case BNode::Kind::And: {
        std::vector<std::vector<Porv>> acc = {{}};
        for (const auto& k : n.kids) {
          auto d = dnf(k);
          std::vector<std::vector<Porv>> next;
          for (const auto& a : acc)
            for (const auto& b : d) {
              auto m = a;
              m.insert(m.end(), b.begin(), b.end());
              next.push_back(std::move(m));
            }
          acc = std::move(next);
        }
        return acc;
      }
    }
    return {};
  }

  void validate(const FeatureDecl& f) {
    std::set<std::string> params(f.params.begin(), f.params.end());
    std::set<std::string> locals;
    for (const auto& p : f.params)
      if (std::count(f.params.begin(), f.params.end(), p) > 1)
        throw SemanticError("parameter '" + p + "' declared twice");
    for (const auto& l : f.locals) {
      if (!locals.insert(l).second) throw SemanticError("local '" + l + "' declared twice");
      if (params.count(l)) throw SemanticError("'" + l + "' is both a parameter and a local");
    }
    for (size_t i = 0; i < f.delays.size(); ++i) {
      const auto& d = f.delays[i];
      std::string where = "delay " + std::to_string(i + 1) + ": ";
      for (const auto& [n, c] : d.lo.terms)
        if (!params.count(n)) throw SemanticError(where + "'" + n + "' is not a parameter");
      if (d.hi)
        for (const auto& [n, c] : d.hi->terms)
          if (!params.count(n)) throw SemanticError(where + "'" + n + "' is not a parameter");
      check_delay(d, where);
    }
    std::set<std::string> assigned;
    auto check_reads = [&](const LinExpr& e, SourcePos pos, const std::string& what) {
      for (const auto& [n, c] : e.terms)
        if (locals.count(n) && !assigned.count(n))
          throw SemanticError(at(pos) + what + " reads local '" + n + "' before it is assigned");
    };
    for (const auto& s : f.seq) {
      for (const auto& c : s.dnf)
        for (const auto& p : c)
          if (p.kind == Porv::Kind::Linear) check_reads(p.expr, s.pos, "predicate");
      if (s.event) {
        if (s.event->porv.kind == Porv::Kind::Linear) check_reads(s.event->porv.expr, s.pos, "event");
        try {
          desugar_event(*s.event);
        } catch (const UnsupportedEvent& e) {
          throw SemanticError(at(s.pos) + "event with disallowed relation: " + e.what());
        }
      }
      for (const auto& a : s.assigns) {
        if (!locals.count(a.local))
          throw SemanticError(at(s.pos) + "assignment to undeclared local '" + a.local + "'");
        check_reads(a.rhs, s.pos, "assignment to '" + a.local + "'");
        assigned.insert(a.local);
      }
    }
    for (const auto& [n, c] : f.feature_expr.terms)
      if (!locals.count(n) && !params.count(n))
        throw SemanticError("feature expression uses '" + n + "', which is neither a local nor a parameter");
  }

 public:
  static void check_delay(const DelayInterval& d, const std::string& where) {
    if (d.lo.is_constant() && d.lo.constant < 0) throw SemanticError(where + "negative lower bound");
    if (d.hi && d.hi->is_constant() && d.hi->constant < 0)
      throw SemanticError(where + "negative upper bound");
    if (d.hi && d.lo.is_constant() && d.hi->is_constant() && d.lo.constant > d.hi->constant)
      throw SemanticError(where + "lower bound " + to_literal(d.lo.constant) + " exceeds upper bound " +
                          to_literal(d.hi->constant));
  }

 private:
  TokenStream ts_;
  std::vector<std::string> params_;
  std::vector<std::string> warnings_;
};

LinExpr substitute(const LinExpr& e, const std::map<std::string, Rational>& b) {
  LinExpr o;
  o.constant = e.constant;
  for (const auto& [n, c] : e.terms) {
    auto it = b.find(n);
    if (it != b.end())
      o.constant += c * it->second;
    else
      o.terms[n] += c;
  }
  return o;
}

}  // namespace

FeatureDecl parse_feature(std::string_view text) { return FiaParser(text).run(); }

FeatureDecl parse_feature_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IOError", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_feature(ss.str());
}

FeatureDecl resolve_params(const FeatureDecl& f, const std::map<std::string, Rational>& bindings,
                           std::vector<std::string>* warnings) {
  std::map<std::string, Rational> used;
  for (const auto& p : f.params) {
    auto it = bindings.find(p);
    if (it == bindings.end()) throw MissingBinding("parameter '" + p + "' of " + f.name + " has no value");
    used[p] = it->second;
  }
  if (warnings)
    for (const auto& [k, v] : bindings)
      if (!used.count(k)) warnings->push_back("ExtraBinding: '" + k + "' is not a parameter of " + f.name);
  FeatureDecl g = f;
  g.params.clear();
  auto sub = [&](LinExpr& e) { e = substitute(e, used); };
  for (auto& s : g.seq) {
    for (auto& c : s.dnf)
      for (auto& p : c)
        if (p.kind == Porv::Kind::Linear) sub(p.expr);
    if (s.event && s.event->porv.kind == Porv::Kind::Linear) sub(s.event->porv.expr);
    for (auto& a : s.assigns) sub(a.rhs);
  }
  for (size_t i = 0; i < g.delays.size(); ++i) {
    auto& d = g.delays[i];
    sub(d.lo);
    if (d.hi) sub(*d.hi);
    FiaParser::check_delay(d, "delay " + std::to_string(i + 1) + ": ");
  }
  sub(g.feature_expr);
  return g;
}

}  // namespace featrange
