#include <doctest.h>

#include "featrange/fia.hpp"

#include <filesystem>

using namespace featrange;

namespace {

const char* kChargeTime = R"(
feature ChargeTime(Vterm,epsilon);
begin
    var t1, t2;
    (state == PC) && @+(V>=epsilon), t1=$time
        ##[0,$] (state == CV) && @+(V==Vterm), t2=$time
    |-> ChargeTime = t2-t1;
end
)";

std::string corpus(const std::string& name) {
  return std::string(FEATRANGE_SOURCE_DIR) + "/corpus/features/" + name;
}

}  // namespace

TEST_CASE("charge time structure") {
  auto f = parse_feature(kChargeTime);
  CHECK(f.name == "ChargeTime");
  CHECK(f.params == std::vector<std::string>{"Vterm", "epsilon"});
  CHECK(f.locals == std::vector<std::string>{"t1", "t2"});
  REQUIRE(f.seq.size() == 2);
  REQUIRE(f.delays.size() == 1);
  CHECK(f.delays[0].lo.constant == 0);
  CHECK(!f.delays[0].hi);
  REQUIRE(f.seq[0].dnf.size() == 1);
  CHECK(f.seq[0].dnf[0][0].kind == Porv::Kind::LocEq);
  CHECK(f.seq[0].dnf[0][0].loc == "PC");
  REQUIRE(f.seq[1].event);
  CHECK(f.seq[1].event->porv.rel == RelOp::Eq);
  CHECK(f.feature_expr.terms.at("t2") == 1);
  CHECK(f.feature_expr.terms.at("t1") == -1);
}

TEST_CASE("rise time with parametric delay") {
  auto f = parse_feature_file(corpus("riseTime.fia"));
  REQUIRE(f.seq.size() == 2);
  auto& e = f.seq[0].event->porv.expr;
  CHECK(e.terms.at("v") == 1);
  CHECK(e.terms.at("Vterm") == Rational(-1, 10));
  auto g = resolve_params(f, {{"B", Rational(1, 10000)}, {"Vterm", Rational(1)}});
  CHECK(g.grounded());
  CHECK(g.delay_lo(0) == 0);
  CHECK(*g.delay_hi(0) == Rational(1, 10000));
}

TEST_CASE("grounding substitutes exact values") {
  auto f = parse_feature(kChargeTime);
  auto g = resolve_params(f, {{"Vterm", *parse_rational("4.2")}, {"epsilon", *parse_rational("0.1")}});
  CHECK(g.seq[0].event->porv.expr.constant == Rational(-1, 10));
  CHECK(g.seq[1].event->porv.expr.constant == Rational(-21, 5));
  CHECK_THROWS_AS(resolve_params(f, {{"Vterm", Rational(21, 5)}}), MissingBinding);
  std::vector<std::string> warn;
  resolve_params(f, {{"Vterm", 1}, {"epsilon", 1}, {"zz", 2}}, &warn);
  CHECK(warn.size() == 1);
}

TEST_CASE("reversed delay interval is rejected") {
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x; @+(v>=1), x=$time ##[1:0] @+(v>=2) |-> F = x; end"),
                  SemanticError);
}

TEST_CASE("semantic errors") {
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x; @+(v>=1), y=$time |-> F = x; end"), SemanticError);
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x; @+(v>=1), x=$time |-> G = x; end"), SemanticError);
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x, y; @+(v>=1), x=y |-> F = x; end"), SemanticError);
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x; @+(v>=1) && @+(w>=1), x=$time |-> F = x; end"),
                  SemanticError);
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x; @-(v==1), x=$time |-> F = x; end"), SemanticError);
  CHECK_THROWS_AS(parse_feature("feature F(); begin var x; @+(v*w>=1), x=$time |-> F = x; end"), SemanticError);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_feature("feature F();\nbegin var x;\n  @+(v >= ) , x=$time |-> F = x; end");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.pos().line == 3);
    CHECK(!e.expected().empty());
  }
}

TEST_CASE("desugaring") {
  Event neg;
  neg.edge = EventEdge::Neg;
  neg.porv.expr = LinExpr::ident("v");
  neg.porv.expr.constant = -1;
  neg.porv.rel = RelOp::Lt;
  auto d = desugar_event(neg);
  REQUIRE(d.size() == 1);
  CHECK(d[0].edge == EventEdge::Pos);
  CHECK(d[0].porv.rel == RelOp::Ge);
  CHECK(desugar_event(d[0]) == d);

  Event any = neg;
  any.edge = EventEdge::Any;
  any.porv.rel = RelOp::Ge;
  auto a = desugar_event(any);
  REQUIRE(a.size() == 2);
  CHECK(a[0].porv.rel == RelOp::Ge);
  CHECK(a[1].porv.rel == RelOp::Le);
  for (const auto& e : a) CHECK(desugar_event(e) == std::vector<Event>{e});

  Event loc;
  loc.edge = EventEdge::Neg;
  loc.porv.kind = Porv::Kind::LocEq;
  loc.porv.loc = "Open";
  CHECK_THROWS_AS(desugar_event(loc), UnsupportedEvent);
}

TEST_CASE("corpus listings parse and round-trip") {
  for (const auto& entry : std::filesystem::directory_iterator(corpus(""))) {
    if (entry.path().extension() != ".fia") continue;
    CAPTURE(entry.path().string());
    auto f = parse_feature_file(entry.path().string());
    CHECK(f.delays.size() + 1 == f.seq.size());
    auto again = parse_feature(to_string(f));
    CHECK(again == f);
    CHECK(to_string(again) == to_string(f));
  }
}

TEST_CASE("settle time mixes events and state terms") {
  auto f = parse_feature_file(corpus("settleTime.fia"));
  REQUIRE(f.seq.size() == 3);
  CHECK(!f.seq[0].event);
  REQUIRE(f.seq[1].event);
  CHECK(f.seq[1].event->porv.kind == Porv::Kind::LocEq);
  CHECK(f.seq[1].dnf.size() == 1);
  CHECK(f.seq[2].assigns.empty());
}

TEST_CASE("unsafe feature has two disjuncts") {
  auto f = parse_feature_file(corpus("unsafe.fia"));
  REQUIRE(f.seq.size() == 1);
  CHECK(f.seq[0].dnf.size() == 2);
  CHECK(f.seq[0].dnf[0].size() == 3);
  CHECK(f.seq[0].dnf[1].size() == 2);
}

TEST_CASE("unclosed parentheses produce warnings") {
  auto f = parse_feature_file(corpus("chargeTime.fia"));
  CHECK(f.warnings.size() == 2);
  CHECK(f.seq[0].dnf[0][0].loc == "PRECHARGE");
}
