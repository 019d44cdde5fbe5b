#include <doctest.h>

#include "featrange/polyhedron.hpp"

#include <random>

using namespace featrange;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

Polyhedron box(size_t n, const std::vector<std::pair<long, long>>& b) {
  Polyhedron p(n);
  for (size_t i = 0; i < n; ++i) {
    p.add_le({{i, q(-1)}}, q(-b[i].first));
    p.add_le({{i, q(1)}}, q(b[i].second));
  }
  return p;
}

}  // namespace

TEST_CASE("unit box optimum") {
  auto p = box(2, {{0, 1}, {0, 1}});
  auto r = p.optimize(std::vector<Rational>{q(1), q(1)}, true);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == 2);
  auto s = p.optimize(std::vector<Rational>{q(-1), q(-1)}, false);
  CHECK(s.value == -2);
}

TEST_CASE("contradictory bounds are empty") {
  Polyhedron p(1);
  p.add_le({{0, q(1)}}, q(0));
  p.add_le({{0, q(-1)}}, q(-1));
  CHECK(p.is_empty());
  Polyhedron c(1);
  c.add_le({}, q(-1));
  CHECK(c.is_empty());
}

TEST_CASE("unbounded and infeasible objectives") {
  Polyhedron p(2);
  p.add_le({{0, q(-1)}}, q(0));
  auto r = p.optimize(std::vector<Rational>{q(1), q(0)}, true);
  CHECK(r.status == LpStatus::Unbounded);
  auto s = p.optimize(std::vector<Rational>{q(1), q(0)}, false);
  CHECK(s.status == LpStatus::Optimal);
  CHECK(s.value == 0);
}

TEST_CASE("affine image of an interval") {
  auto p = box(1, {{0, 1}});
  AffineForm f(1);
  f.a[0] = 2;
  f.c = 1;
  auto img = p.affine_image({f});
  auto [lo, hi] = img.project_interval(0);
  REQUIRE(lo);
  REQUIRE(hi);
  CHECK(*lo == 1);
  CHECK(*hi == 3);
}

TEST_CASE("non-invertible image projects") {
  // (x, y) in unit box, x := x + y, y := 0
  auto p = box(2, {{0, 1}, {0, 1}});
  AffineForm fx(2), fy(2);
  fx.a = {q(1), q(1)};
  auto img = p.affine_image({fx, fy});
  auto [lo, hi] = img.project_interval(0);
  CHECK(*lo == 0);
  CHECK(*hi == 2);
  auto [ylo, yhi] = img.project_interval(1);
  CHECK(*ylo == 0);
  CHECK(*yhi == 0);
}

TEST_CASE("equality substitution in elimination") {
  Polyhedron p(3);
  p.add_eq({{0, q(1)}, {1, q(-1)}}, q(2));  // x - y = 2
  p.add_le({{1, q(1)}}, q(5));
  p.add_le({{1, q(-1)}}, q(0));
  p.add_le({{2, q(1)}, {0, q(1)}}, q(10));
  auto e = p.eliminate(1);
  auto [lo, hi] = e.project_interval(0);
  CHECK(*lo == 2);
  CHECK(*hi == 7);
}

TEST_CASE("strict constraints survive elimination") {
  Polyhedron p(2);
  p.add_le({{0, q(1)}, {1, q(-1)}}, q(0), true);  // x < y
  p.add_le({{1, q(1)}}, q(3));                    // y <= 3
  auto e = p.eliminate(1);
  REQUIRE(e.constraints().size() == 1);
  CHECK(e.constraints()[0].rel == Rel::Lt);
  CHECK(!e.contains_point({q(3), q(0)}, false));
  CHECK(e.contains_point({q(3), q(0)}, true));
}

TEST_CASE("containment") {
  auto big = box(2, {{0, 4}, {0, 4}});
  auto small = box(2, {{1, 2}, {1, 3}});
  CHECK(big.contains(small));
  CHECK(!small.contains(big));
  Polyhedron empty(2);
  empty.add_le({}, q(-1));
  CHECK(small.contains(empty));
}

TEST_CASE("preimage") {
  auto p = box(1, {{1, 3}});
  AffineForm f(1);
  f.a[0] = 2;
  f.c = 1;
  auto pre = p.preimage({f});
  auto [lo, hi] = pre.project_interval(0);
  CHECK(*lo == 0);
  CHECK(*hi == 1);
}

TEST_CASE("dimension mismatch is reported") {
  Polyhedron a(2), b(3);
  CHECK_THROWS(a.intersect(b));
}

// max = -min(-c), and vertex enumeration agrees on random integer boxes with cuts
TEST_CASE("random polytopes agree with vertex enumeration") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3), bnd(1, 6);
  for (int round = 0; round < 60; ++round) {
    Polyhedron p = box(2, {{-bnd(rng), bnd(rng)}, {-bnd(rng), bnd(rng)}});
    int a0 = coef(rng), a1 = coef(rng), b = bnd(rng);
    p.add_le({{0, q(a0)}, {1, q(a1)}}, q(b));
    std::vector<Rational> c{q(coef(rng)), q(coef(rng))};
    auto mx = p.optimize(c, true);
    auto mn = p.optimize(std::vector<Rational>{-c[0], -c[1]}, false);
    REQUIRE(mx.status == LpStatus::Optimal);
    CHECK(mx.value == -mn.value);
    // brute force: vertices are intersections of constraint pairs
    const auto& cons = p.constraints();
    bool have = false;
    Rational best;
    for (size_t i = 0; i < cons.size(); ++i)
      for (size_t j = i + 1; j < cons.size(); ++j) {
        const auto& u = cons[i];
        const auto& v = cons[j];
        Rational det = u.a[0] * v.a[1] - u.a[1] * v.a[0];
        if (det == 0) continue;
        Rational x = (u.b * v.a[1] - u.a[1] * v.b) / det;
        Rational y = (u.a[0] * v.b - u.b * v.a[0]) / det;
        if (!p.contains_point({x, y})) continue;
        Rational val = c[0] * x + c[1] * y;
        if (!have || val > best) best = val;
        have = true;
      }
    REQUIRE(have);
    CHECK(best == mx.value);
  }
}

TEST_CASE("elimination matches LP projection") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(-4, 4), bnd(0, 8);
  for (int round = 0; round < 40; ++round) {
    Polyhedron p(3);
    for (size_t i = 0; i < 3; ++i) {
      p.add_le({{i, q(1)}}, q(bnd(rng) + 1));
      p.add_le({{i, q(-1)}}, q(bnd(rng) + 1));
    }
    for (int k = 0; k < 3; ++k)
      p.add_le({{0, q(coef(rng))}, {1, q(coef(rng))}, {2, q(coef(rng))}}, q(bnd(rng)));
    if (p.is_empty()) continue;
    auto e = p.eliminate(2).eliminate(1);
    auto a = p.project_interval(0);
    auto b = e.project_interval(0);
    CHECK(*a.first == *b.first);
    CHECK(*a.second == *b.second);
  }
}
