#pragma once

#include "featrange/rational.hpp"

#include <string>
#include <vector>

namespace featrange {

// Relation of a constraint a·x REL b. Strict constraints are kept as written
// but every LP treats them as their closure.
enum class Rel { Le, Lt, Eq };

struct LinCon {
  std::vector<Rational> a;
  Rel rel = Rel::Le;
  Rational b;
};

// a·x + c over a dense variable order.
struct AffineForm {
  std::vector<Rational> a;
  Rational c;

  AffineForm() = default;
  explicit AffineForm(size_t n) : a(n) {}
  static AffineForm var(size_t n, size_t i) {
    AffineForm f(n);
    f.a[i] = 1;
    return f;
  }
  static AffineForm constant(size_t n, const Rational& v) {
    AffineForm f(n);
    f.c = v;
    return f;
  }
  bool is_constant() const;
  Rational eval(const std::vector<Rational>& x) const;
  void resize(size_t n) { a.resize(n); }
};

AffineForm operator+(const AffineForm& l, const AffineForm& r);
AffineForm operator-(const AffineForm& l, const AffineForm& r);
AffineForm operator*(const Rational& k, const AffineForm& f);

// Substitute x_i := forms[i] into a·x + c, producing a form over the
// variables of `forms`.
AffineForm compose(const AffineForm& f, const std::vector<AffineForm>& forms);

// Scale so the first nonzero coefficient has magnitude 1. Keeps the relation.
void normalize(LinCon& c);
bool same_constraint(const LinCon& l, const LinCon& r);

}  // namespace featrange
