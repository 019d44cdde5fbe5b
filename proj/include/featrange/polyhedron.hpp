#pragma once

#include "featrange/linear.hpp"
#include "featrange/errors.hpp"
#include "featrange/lp.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace featrange {

struct OptResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;
};

// Interval bound; nullopt means unbounded on that side.
using Bound = std::optional<Rational>;

// Conjunction of linear constraints over a fixed variable order.
class Polyhedron {
 public:
  Polyhedron() = default;
  explicit Polyhedron(size_t dim) : dim_(dim) {}

  size_t dim() const { return dim_; }
  const std::vector<LinCon>& constraints() const { return cons_; }
  bool is_universe() const { return cons_.empty() && !trivially_empty_; }

  // Normalizes and drops syntactic duplicates; a constant false row marks the set empty.
  void add(LinCon c);
  void add_all(const Polyhedron& o);
  // a·x rel b with a sparse list of (index, coefficient)
  void add_le(const std::vector<std::pair<size_t, Rational>>& terms, const Rational& b,
              bool strict = false);
  void add_eq(const std::vector<std::pair<size_t, Rational>>& terms, const Rational& b);

  Polyhedron intersect(const Polyhedron& o) const;
  bool is_empty() const;
  OptResult optimize(const std::vector<Rational>& obj, bool maximize) const;
  OptResult optimize(const AffineForm& obj, bool maximize) const;
  std::pair<Bound, Bound> project_interval(size_t var) const;

  // Image under x' = map(x); map has one form per variable.
  Polyhedron affine_image(const std::vector<AffineForm>& map) const;
  // Preimage: {x | map(x) ∈ P}.
  Polyhedron preimage(const std::vector<AffineForm>& map) const;

  // Existential projection of one variable (Fourier–Motzkin); the variable
  // stays in the order but becomes unconstrained.
  Polyhedron eliminate(size_t var) const;
  Polyhedron remove_redundant() const;

  // Appends `extra` unconstrained variables.
  Polyhedron lift(size_t extra) const;
  // Drops trailing variables, which must not occur in any constraint.
  Polyhedron truncate(size_t new_dim) const;

  // o ⊆ this (closures are compared).
  bool contains(const Polyhedron& o) const;
  bool contains_point(const std::vector<Rational>& x, bool closure = true) const;

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void dedupe_tight();

  size_t dim_ = 0;
  std::vector<LinCon> cons_;
  bool trivially_empty_ = false;
};

}  // namespace featrange
