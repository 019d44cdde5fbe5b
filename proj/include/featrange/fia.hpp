#pragma once

#include "featrange/errors.hpp"
#include "featrange/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featrange {

// Reserved identifier for the global match timer.
inline constexpr const char* kTimeIdent = "$time";

// Σ c·v + constant. Identifiers may be HA variables, locals, parameters or $time.
struct LinExpr {
  std::map<std::string, Rational> terms;
  Rational constant;

  static LinExpr constant_of(const Rational& c) {
    LinExpr e;
    e.constant = c;
    return e;
  }
  static LinExpr ident(const std::string& name) {
    LinExpr e;
    e.terms[name] = 1;
    return e;
  }
  bool is_constant() const { return terms.empty(); }
  void add(const LinExpr& o, const Rational& k = 1);
  void scale(const Rational& k);
  bool operator==(const LinExpr&) const = default;
};

enum class RelOp { Ge, Gt, Le, Lt, Eq };

// expr REL 0, or state == loc.
struct Porv {
  enum class Kind { Linear, LocEq };
  Kind kind = Kind::Linear;
  LinExpr expr;
  RelOp rel = RelOp::Ge;
  std::string loc;
  bool operator==(const Porv&) const = default;
};

enum class EventEdge { Pos, Neg, Any };

struct Event {
  EventEdge edge = EventEdge::Pos;
  Porv porv;
  bool operator==(const Event&) const = default;
};

// [lo : hi]; hi absent means $.
struct DelayInterval {
  LinExpr lo;
  std::optional<LinExpr> hi;
  bool operator==(const DelayInterval&) const = default;
};

struct Assign {
  std::string local;
  LinExpr rhs;
  bool operator==(const Assign&) const = default;
};

struct SubExpr {
  std::vector<std::vector<Porv>> dnf;  // empty means no state condition
  std::optional<Event> event;
  std::vector<Assign> assigns;
  SourcePos pos;
  bool operator==(const SubExpr& o) const {
    return dnf == o.dnf && event == o.event && assigns == o.assigns;
  }
};

struct FeatureDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> locals;
  std::vector<SubExpr> seq;
  std::vector<DelayInterval> delays;
  LinExpr feature_expr;
  std::vector<std::string> warnings;

  bool grounded() const { return params.empty(); }
  // Valid only on grounded declarations.
  Rational delay_lo(size_t i) const;
  std::optional<Rational> delay_hi(size_t i) const;

  bool operator==(const FeatureDecl& o) const {
    return name == o.name && params == o.params && locals == o.locals && seq == o.seq &&
           delays == o.delays && feature_expr == o.feature_expr;
  }
};

FeatureDecl parse_feature(std::string_view text);
FeatureDecl parse_feature_file(const std::string& path);

// Substitutes parameters. Unused bindings are reported through `warnings`.
FeatureDecl resolve_params(const FeatureDecl& f, const std::map<std::string, Rational>& bindings,
                           std::vector<std::string>* warnings = nullptr);

// Canonical positive-edge events; @(P) yields two alternatives.
std::vector<Event> desugar_event(const Event& e);

// Relation of the closure of ¬(expr rel 0); Eq has no single complement.
RelOp complement_closure(RelOp r);

std::string to_string(const LinExpr& e);
std::string to_string(const Porv& p, const std::vector<std::string>& params = {});
std::string to_string(const Event& e, const std::vector<std::string>& params = {});
std::string to_string(const FeatureDecl& f);
const char* to_string(RelOp r);

// Location labels in `state == X` may carry an instance prefix ("batt.state").
bool is_state_ident(const std::string& id);
// Last component of a dotted identifier.
std::string strip_instance(const std::string& id);

}  // namespace featrange
