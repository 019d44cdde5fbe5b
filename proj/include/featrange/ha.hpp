#pragma once

#include "featrange/errors.hpp"
#include "featrange/polyhedron.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featrange {

// Per-variable dynamics: either a rate interval [lo, hi] or an affine field a·x + c.
struct Flow {
  enum class Kind { Rate, Affine };
  Kind kind = Kind::Rate;
  Rational lo, hi;
  AffineForm expr;

  static Flow rate(const Rational& lo, const Rational& hi) {
    Flow f;
    f.lo = lo;
    f.hi = hi;
    return f;
  }
  static Flow affine(AffineForm e) {
    Flow f;
    f.kind = Kind::Affine;
    f.expr = std::move(e);
    return f;
  }
  bool is_rate() const { return kind == Kind::Rate; }
  bool is_zero() const { return is_rate() && lo == 0 && hi == 0; }
};

struct Location {
  std::string name;
  Polyhedron inv;
  std::vector<Flow> flow;  // one per variable
};

struct Edge {
  size_t src = 0, dst = 0;
  std::string label;
  Polyhedron guard;
  std::vector<AffineForm> reset;  // one per variable; identity when unset
  bool stutter = false;
};

struct HybridAutomaton {
  std::vector<std::string> vars;
  std::map<std::string, Rational> params;
  std::vector<Location> locations;
  std::vector<Edge> edges;
  size_t init_loc = 0;
  Polyhedron init;

  size_t dim() const { return vars.size(); }
  std::optional<size_t> find_location(const std::string& name) const;
  std::optional<size_t> find_var(const std::string& name) const;
  bool is_rectangular() const;
  std::vector<AffineForm> identity_reset() const;
  static bool is_identity(const std::vector<AffineForm>& reset);
};

HybridAutomaton parse_model(std::string_view text);
HybridAutomaton parse_model_file(const std::string& path);

// Well-formedness: ids resolve, rate intervals ordered, init inside its invariant.
void validate(const HybridAutomaton& h);

// Appends one stutter self-loop per location (guard = invariant, identity reset).
void add_stutter_edges(HybridAutomaton& h);

// Replaces every affine row by its exact range over the location invariant.
HybridAutomaton hybridize(const HybridAutomaton& h);

std::string format_affine(const AffineForm& f, const std::vector<std::string>& names);
std::string to_ha(const HybridAutomaton& h);
std::string to_dot(const HybridAutomaton& h, const std::string& graph_name = "H");

}  // namespace featrange
