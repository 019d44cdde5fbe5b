#include <doctest.h>

#include "featrange/ha.hpp"

using namespace featrange;

TEST_CASE("minimal model") {
  auto h = parse_model("var x; location A { inv: 0<=x<=10; flow: x' = [1,1]; } init A { x in [0,1]; }");
  CHECK(h.locations.size() == 1);
  REQUIRE(h.edges.size() == 1);
  CHECK(h.edges[0].stutter);
  CHECK(h.is_rectangular());
  auto [lo, hi] = h.init.project_interval(0);
  CHECK(*lo == 0);
  CHECK(*hi == 1);
}

TEST_CASE("init outside invariant is rejected") {
  CHECK_THROWS_AS(
      parse_model("var x; location A { inv: x <= 4; flow: x' = [1,1]; } init A { x >= 5 & x <= 6; }"),
      ValidationError);
}

TEST_CASE("dangling edge and undeclared variable") {
  CHECK_THROWS_AS(parse_model("var x; location A { inv: x <= 4; flow: x' = 1; } edge A -> B { } init A { x == 0; }"),
                  ValidationError);
  CHECK_THROWS_AS(parse_model("var x; location A { inv: y <= 4; flow: x' = 1; } init A { x == 0; }"),
                  ValidationError);
  CHECK_THROWS_AS(parse_model("var x; location A { inv: x <= 4; flow: x' = 1; } init A { x == 0 "), SyntaxError);
}

TEST_CASE("buck closed dynamics parse exactly") {
  const char* text = R"(
var x1 x2;
location Closed {
  inv: -15 <= x1 <= 15 & -0.002 <= x2 <= 0.002;
  flow: x1' = 38095.23*x2 - 40100.25*x1; x2' = -21052.63*x1 + 21052.63*12;
}
init Closed { x1 = 0 & x2 = 0; }
)";
  auto h = parse_model(text);
  const auto& f = h.locations[0].flow;
  REQUIRE(f[1].kind == Flow::Kind::Affine);
  CHECK(f[1].expr.a[0] == *parse_rational("-21052.63"));
  CHECK(f[1].expr.c == *parse_rational("252631.56"));
  CHECK(f[0].expr.a[0] == *parse_rational("-40100.25"));
  CHECK(f[0].expr.a[1] == *parse_rational("38095.23"));

  // hybridized interval equals the extreme values at the four box vertices
  auto r = hybridize(h);
  CHECK(r.is_rectangular());
  for (size_t v = 0; v < 2; ++v) {
    bool first = true;
    Rational lo, hi;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        std::vector<Rational> pt{Rational(15 * sx), *parse_rational("0.002") * sy};
        Rational val = f[v].expr.eval(pt);
        if (first || val < lo) lo = val;
        if (first || val > hi) hi = val;
        first = false;
      }
    CHECK(r.locations[0].flow[v].lo == lo);
    CHECK(r.locations[0].flow[v].hi == hi);
  }
}

TEST_CASE("hybridize a monotone field") {
  auto h = parse_model("var x; location A { inv: 0<=x<=1; flow: x' = -x + 2; } init A { x == 0; }");
  auto r = hybridize(h);
  CHECK(r.locations[0].flow[0].lo == 1);
  CHECK(r.locations[0].flow[0].hi == 2);
  auto same = hybridize(r);
  CHECK(same.locations[0].flow[0].lo == 1);
}

TEST_CASE("unbounded invariant blocks hybridization") {
  auto h = parse_model("var x; location A { inv: x >= 0; flow: x' = -x; } init A { x == 0; }");
  CHECK_THROWS_AS(hybridize(h), UnboundedInvariant);
}

TEST_CASE("printing round-trips") {
  const char* text = R"(
var x y;
param T 2;
location A { inv: 0 <= x <= 10 & y <= x; flow: x' = [1, 2]; y' = x - 1/3; }
location B { inv: true; flow: x' = 0; y' = [-1, 1]; }
edge A -> B { label go; guard: x >= T; reset: y := 0, x := 2*x + 1; }
init A { x = 0 & y = 0; }
)";
  auto h = parse_model(text);
  auto g = parse_model(to_ha(h));
  CHECK(to_ha(g) == to_ha(h));
  CHECK(g.edges.size() == 3);
  CHECK(g.params.at("T") == 2);
  CHECK(g.edges[0].reset[0].a[0] == 2);
  CHECK(to_dot(h).find("digraph") == 0);
}
