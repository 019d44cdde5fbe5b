#include "featrange/polyhedron.hpp"

#include "featrange/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace featrange {

namespace {

bool all_zero(const std::vector<Rational>& a) {
  for (const auto& v : a)
    if (v != 0) return false;
  return true;
}

bool holds_constant(const LinCon& c) {
  // 0 rel b
  switch (c.rel) {
    case Rel::Le: return c.b >= 0;
    case Rel::Lt: return c.b > 0;
    case Rel::Eq: return c.b == 0;
  }
  return false;
}

}  // namespace

void Polyhedron::add(LinCon c) {
  if (c.a.size() != dim_) throw DimensionMismatch("constraint has " + std::to_string(c.a.size()) +
                                                  " coefficients, expected " + std::to_string(dim_));
  if (all_zero(c.a)) {
    if (!holds_constant(c)) trivially_empty_ = true;
    return;
  }
  normalize(c);
  for (const auto& d : cons_)
    if (same_constraint(d, c)) return;
  cons_.push_back(std::move(c));
}

void Polyhedron::add_all(const Polyhedron& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("intersect of different dimensions");
  if (o.trivially_empty_) trivially_empty_ = true;
  for (const auto& c : o.cons_) add(c);
}

void Polyhedron::add_le(const std::vector<std::pair<size_t, Rational>>& terms, const Rational& b,
                        bool strict) {
  LinCon c;
  c.a.assign(dim_, Rational(0));
  for (const auto& [i, v] : terms) c.a.at(i) += v;
  c.rel = strict ? Rel::Lt : Rel::Le;
  c.b = b;
  add(std::move(c));
}

void Polyhedron::add_eq(const std::vector<std::pair<size_t, Rational>>& terms, const Rational& b) {
  LinCon c;
  c.a.assign(dim_, Rational(0));
  for (const auto& [i, v] : terms) c.a.at(i) += v;
  c.rel = Rel::Eq;
  c.b = b;
  add(std::move(c));
}

Polyhedron Polyhedron::intersect(const Polyhedron& o) const {
  Polyhedron r = *this;
  r.add_all(o);
  return r;
}

bool Polyhedron::is_empty() const {
  if (trivially_empty_) return true;
  if (cons_.empty()) return false;
  return lp_feasible(dim_, cons_).status == LpStatus::Infeasible;
}

OptResult Polyhedron::optimize(const std::vector<Rational>& obj, bool maximize) const {
  if (obj.size() != dim_) throw DimensionMismatch("objective dimension");
  OptResult o;
  if (trivially_empty_) {
    o.status = LpStatus::Infeasible;
    return o;
  }
  auto r = lp_solve(dim_, cons_, &obj, maximize);
  o.status = r.status;
  o.value = r.value;
  o.point = std::move(r.x);
  return o;
}

OptResult Polyhedron::optimize(const AffineForm& obj, bool maximize) const {
  auto r = optimize(obj.a, maximize);
  if (r.status == LpStatus::Optimal) r.value += obj.c;
  return r;
}

std::pair<Bound, Bound> Polyhedron::project_interval(size_t var) const {
  std::vector<Rational> obj(dim_);
  obj.at(var) = 1;
  auto lo = optimize(obj, false);
  auto hi = optimize(obj, true);
  Bound l, h;
  if (lo.status == LpStatus::Optimal) l = lo.value;
  if (hi.status == LpStatus::Optimal) h = hi.value;
  return {l, h};
}

void Polyhedron::dedupe_tight() {
  // keep the tightest bound per normal direction
  std::vector<LinCon> out;
  out.reserve(cons_.size());
  for (auto& c : cons_) {
    if (c.rel == Rel::Eq) {
      out.push_back(std::move(c));
      continue;
    }
    bool merged = false;
    for (auto& d : out) {
      if (d.rel == Rel::Eq || d.a != c.a) continue;
      if (c.b < d.b || (c.b == d.b && c.rel == Rel::Lt)) {
        d.b = c.b;
        d.rel = c.rel;
      }
      merged = true;
      break;
    }
    if (!merged) out.push_back(std::move(c));
  }
  cons_ = std::move(out);
}

Polyhedron Polyhedron::eliminate(size_t var) const {
  if (var >= dim_) throw DimensionMismatch("variable index out of range");
  Polyhedron r(dim_);
  r.trivially_empty_ = trivially_empty_;
  if (trivially_empty_) return r;

  // an equality on var allows plain substitution
  const LinCon* pivot = nullptr;
  size_t best_nz = 0;
  for (const auto& c : cons_) {
    if (c.rel != Rel::Eq || c.a[var] == 0) continue;
    size_t nz = 0;
    for (const auto& v : c.a)
      if (v != 0) ++nz;
    if (!pivot || nz < best_nz) {
      pivot = &c;
      best_nz = nz;
    }
  }
  if (pivot) {
    for (const auto& c : cons_) {
      if (&c == pivot) continue;
      if (c.a[var] == 0) {
        r.add(c);
        continue;
      }
      Rational k = c.a[var] / pivot->a[var];
      LinCon n = c;
      for (size_t j = 0; j < dim_; ++j) n.a[j] -= k * pivot->a[j];
      n.a[var] = 0;
      n.b -= k * pivot->b;
      r.add(std::move(n));
    }
  } else {
    std::vector<const LinCon*> pos, neg;
    for (const auto& c : cons_) {
      if (c.a[var] > 0)
        pos.push_back(&c);
      else if (c.a[var] < 0)
        neg.push_back(&c);
      else
        r.add(c);
    }
    Rational tmp;
    for (const auto* p : pos)
      for (const auto* q : neg) {
        // p/p_v + q/|q_v|
        LinCon n;
        n.a.assign(dim_, Rational(0));
        Rational sp = 1 / p->a[var];
        Rational sq = -1 / q->a[var];
        for (size_t j = 0; j < dim_; ++j) {
          if (p->a[j] != 0) {
            tmp = sp * p->a[j];
            n.a[j] += tmp;
          }
          if (q->a[j] != 0) {
            tmp = sq * q->a[j];
            n.a[j] += tmp;
          }
        }
        n.a[var] = 0;
        n.b = sp * p->b + sq * q->b;
        n.rel = (p->rel == Rel::Lt || q->rel == Rel::Lt) ? Rel::Lt : Rel::Le;
        r.add(std::move(n));
      }
  }
  r.dedupe_tight();
  size_t active = 0;
  for (size_t j = 0; j < dim_; ++j)
    for (const auto& c : r.cons_)
      if (c.a[j] != 0) {
        ++active;
        break;
      }
  if (r.cons_.size() > 2 * active + 2) return r.remove_redundant();
  return r;
}

Polyhedron Polyhedron::remove_redundant() const {
  Polyhedron r(dim_);
  r.trivially_empty_ = trivially_empty_;
  if (trivially_empty_) return r;
  std::vector<LinCon> keep = cons_;
  // equalities first; they are never dropped
  std::stable_partition(keep.begin(), keep.end(), [](const LinCon& c) { return c.rel == Rel::Eq; });
  size_t i = 0;
  while (i < keep.size()) {
    if (keep[i].rel == Rel::Eq) {
      ++i;
      continue;
    }
    std::vector<LinCon> others;
    others.reserve(keep.size() - 1);
    for (size_t j = 0; j < keep.size(); ++j)
      if (j != i) others.push_back(keep[j]);
    auto res = lp_solve(dim_, others, &keep[i].a, true);
    if (res.status == LpStatus::Infeasible) {
      r.trivially_empty_ = true;
      return r;
    }
    if (res.status == LpStatus::Optimal && res.value <= keep[i].b) {
      keep.erase(keep.begin() + static_cast<long>(i));
      continue;
    }
    ++i;
  }
  r.cons_ = std::move(keep);
  return r;
}

Polyhedron Polyhedron::lift(size_t extra) const {
  Polyhedron r(dim_ + extra);
  r.trivially_empty_ = trivially_empty_;
  for (auto c : cons_) {
    c.a.resize(dim_ + extra);
    r.cons_.push_back(std::move(c));
  }
  return r;
}

Polyhedron Polyhedron::truncate(size_t new_dim) const {
  Polyhedron r(new_dim);
  r.trivially_empty_ = trivially_empty_;
  for (auto c : cons_) {
    for (size_t j = new_dim; j < c.a.size(); ++j)
      if (c.a[j] != 0) throw DimensionMismatch("truncating a constrained variable");
    c.a.resize(new_dim);
    r.add(std::move(c));
  }
  return r;
}

Polyhedron Polyhedron::affine_image(const std::vector<AffineForm>& map) const {
  if (map.size() != dim_) throw DimensionMismatch("affine map arity");
  std::vector<size_t> moved;
  for (size_t i = 0; i < dim_; ++i) {
    const auto& f = map[i];
    if (f.a.size() != dim_) throw DimensionMismatch("affine map dimension");
    bool ident = f.c == 0;
    for (size_t j = 0; ident && j < dim_; ++j)
      if (f.a[j] != (i == j ? 1 : 0)) ident = false;
    if (!ident) moved.push_back(i);
  }
  if (moved.empty() || trivially_empty_) return *this;
  size_t r = moved.size();
  Polyhedron q = lift(r);
  for (size_t k = 0; k < r; ++k) {
    LinCon c;
    c.a.assign(dim_ + r, Rational(0));
    const auto& f = map[moved[k]];
    for (size_t j = 0; j < dim_; ++j) c.a[j] = -f.a[j];
    c.a[dim_ + k] = 1;
    c.rel = Rel::Eq;
    c.b = f.c;
    q.add(std::move(c));
  }
  for (size_t i : moved) q = q.eliminate(i);
  // move y_k into slot moved[k]
  Polyhedron out(dim_);
  out.trivially_empty_ = q.trivially_empty_;
  for (auto c : q.cons_) {
    for (size_t k = 0; k < r; ++k) {
      c.a[moved[k]] = c.a[dim_ + k];
    }
    c.a.resize(dim_);
    out.add(std::move(c));
  }
  return out;
}

Polyhedron Polyhedron::preimage(const std::vector<AffineForm>& map) const {
  if (map.size() != dim_) throw DimensionMismatch("affine map arity");
  size_t m = map.empty() ? 0 : map[0].a.size();
  Polyhedron out(m);
  out.trivially_empty_ = trivially_empty_;
  for (const auto& c : cons_) {
    AffineForm f;
    f.a = c.a;
    f.c = 0;
    AffineForm g = compose(f, map);
    LinCon n;
    n.a = std::move(g.a);
    n.rel = c.rel;
    n.b = c.b - g.c;
    out.add(std::move(n));
  }
  return out;
}

bool Polyhedron::contains(const Polyhedron& o) const {
  if (o.dim_ != dim_) throw DimensionMismatch("containment of different dimensions");
  if (trivially_empty_) return o.is_empty();
  if (cons_.empty()) return true;
  if (o.is_empty()) return true;
  for (const auto& c : cons_) {
    auto hi = o.optimize(c.a, true);
    if (hi.status != LpStatus::Optimal || hi.value > c.b) return false;
    if (c.rel == Rel::Eq) {
      auto lo = o.optimize(c.a, false);
      if (lo.status != LpStatus::Optimal || lo.value < c.b) return false;
    }
  }
  return true;
}

bool Polyhedron::contains_point(const std::vector<Rational>& x, bool closure) const {
  if (x.size() != dim_) throw DimensionMismatch("point dimension");
  if (trivially_empty_) return false;
  for (const auto& c : cons_) {
    Rational s = 0;
    for (size_t j = 0; j < dim_; ++j)
      if (c.a[j] != 0) s += c.a[j] * x[j];
    switch (c.rel) {
      case Rel::Le:
        if (s > c.b) return false;
        break;
      case Rel::Lt:
        if (closure ? s > c.b : s >= c.b) return false;
        break;
      case Rel::Eq:
        if (s != c.b) return false;
        break;
    }
  }
  return true;
}

namespace {

std::string number(const Rational& r) { return to_literal(r); }

}  // namespace

std::string Polyhedron::to_string(const std::vector<std::string>& names) const {
  if (trivially_empty_) return "0 <= -1";
  if (cons_.empty()) return "true";
  std::ostringstream os;
  bool first_con = true;
  for (const auto& c : cons_) {
    if (!first_con) os << " & ";
    first_con = false;
    // a single variable with negative coefficient reads better flipped
    size_t nz = 0, idx = 0;
    for (size_t j = 0; j < dim_; ++j)
      if (c.a[j] != 0) {
        ++nz;
        idx = j;
      }
    if (nz == 1 && c.rel != Rel::Eq) {
      Rational k = c.a[idx];
      Rational bound = c.b / k;
      const char* op;
      if (k > 0)
        op = c.rel == Rel::Lt ? " < " : " <= ";
      else
        op = c.rel == Rel::Lt ? " > " : " >= ";
      os << names.at(idx) << op << number(bound);
      continue;
    }
    bool first = true;
    for (size_t j = 0; j < dim_; ++j) {
      if (c.a[j] == 0) continue;
      Rational k = c.a[j];
      if (first) {
        if (k < 0) os << "-";
      } else {
        os << (k < 0 ? " - " : " + ");
      }
      Rational m = abs(k);
      if (m != 1) os << number(m) << "*";
      os << names.at(j);
      first = false;
    }
    os << (c.rel == Rel::Le ? " <= " : c.rel == Rel::Lt ? " < " : " == ") << number(c.b);
  }
  return os.str();
}

}  // namespace featrange
