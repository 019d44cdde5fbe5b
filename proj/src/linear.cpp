#include "featrange/linear.hpp"

#include <stdexcept>

namespace featrange {

bool AffineForm::is_constant() const {
  for (const auto& v : a)
    if (v != 0) return false;
  return true;
}

Rational AffineForm::eval(const std::vector<Rational>& x) const {
  Rational s = c;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += a[i] * x[i];
  return s;
}

AffineForm operator+(const AffineForm& l, const AffineForm& r) {
  if (l.a.size() != r.a.size()) throw std::invalid_argument("dimension mismatch");
  AffineForm o(l.a.size());
  for (size_t i = 0; i < l.a.size(); ++i) o.a[i] = l.a[i] + r.a[i];
  o.c = l.c + r.c;
  return o;
}

AffineForm operator-(const AffineForm& l, const AffineForm& r) {
  if (l.a.size() != r.a.size()) throw std::invalid_argument("dimension mismatch");
  AffineForm o(l.a.size());
  for (size_t i = 0; i < l.a.size(); ++i) o.a[i] = l.a[i] - r.a[i];
  o.c = l.c - r.c;
  return o;
}

AffineForm operator*(const Rational& k, const AffineForm& f) {
  AffineForm o(f.a.size());
  if (k == 0) return o;
  for (size_t i = 0; i < f.a.size(); ++i)
    if (f.a[i] != 0) o.a[i] = k * f.a[i];
  o.c = k * f.c;
  return o;
}

AffineForm compose(const AffineForm& f, const std::vector<AffineForm>& forms) {
  if (forms.size() != f.a.size()) throw std::invalid_argument("dimension mismatch");
  size_t m = forms.empty() ? 0 : forms[0].a.size();
  AffineForm o(m);
  o.c = f.c;
  Rational tmp;
  for (size_t i = 0; i < f.a.size(); ++i) {
    if (f.a[i] == 0) continue;
    const auto& g = forms[i];
    for (size_t j = 0; j < m; ++j)
      if (g.a[j] != 0) {
        tmp = f.a[i] * g.a[j];
        o.a[j] += tmp;
      }
    o.c += f.a[i] * g.c;
  }
  return o;
}

void normalize(LinCon& c) {
  for (const auto& v : c.a) {
    if (v == 0) continue;
    Rational s = abs(v);
    if (s != 1) {
      for (auto& w : c.a) w /= s;
      c.b /= s;
    }
    return;
  }
}

bool same_constraint(const LinCon& l, const LinCon& r) {
  return l.rel == r.rel && l.b == r.b && l.a == r.a;
}

}  // namespace featrange
