#include <doctest.h>

#include "featrange/fa.hpp"

#include <map>

using namespace featrange;

namespace {

FeatureAutomaton build(const char* text, const std::map<std::string, Rational>& b = {}) {
  return build_feature_automaton(resolve_params(parse_feature(text), b));
}

size_t expected_locations(const FeatureAutomaton& fa) {
  size_t s = fa.n() + 2;
  for (const auto& r : fa.resets) s += r.size() - 1;
  return s;
}

}  // namespace

TEST_CASE("charge time automaton shape") {
  auto fa = build(R"(feature ChargeTime(Vterm,epsilon); begin var t1, t2;
      (state == PC) && @+(V>=epsilon), t1=$time ##[0,$] (state == CV) && @+(V==Vterm), t2=$time
      |-> ChargeTime = t2-t1; end)",
                  {{"Vterm", Rational(21, 5)}, {"epsilon", Rational(1, 10)}});
  CHECK(fa.locs.size() == 6);
  CHECK(fa.locs.size() == expected_locations(fa));
  CHECK(fa.pause_count() == 2);
  // q1 -> q1_1 -> q2 -> q2_1 -> q3 -> qF
  REQUIRE(fa.edges.size() == 5);
  CHECK(fa.edges[0].reset.local == "lt");
  CHECK(fa.edges[1].reset.local == "t1");
  CHECK(fa.edges[1].reset.rhs.terms.at("t") == 1);
  CHECK(!fa.edges[0].delay);
  REQUIRE(fa.edges[2].delay);
  CHECK(*fa.edges[2].sub == 1);
  CHECK(fa.edges[4].dst == fa.final_loc);
  CHECK(fa.edges[4].reset.local == "ChargeTime");
  CHECK(fa.value_vars().size() == 3);
}

TEST_CASE("single sub-expression without assignments") {
  auto fa = build("feature F(); begin @+(x>=1) |-> F = 3; end");
  CHECK(fa.locs.size() == 3);
  CHECK(fa.pause_count() == 0);
  CHECK(fa.edges.size() == 2);
  CHECK(fa.edges.back().reset.rhs.constant == 3);
}

TEST_CASE("ordered resets read earlier assignments") {
  auto fa = build("feature F(); begin var t1, t2; @+(x>=1), t1=$time, t2=t1+1 |-> F = t2; end");
  CHECK(fa.pause_count() == 2);
  CHECK(fa.locs.size() == expected_locations(fa));
  // symbolic execution of the chain from q1 with t = 7, t1 = t2 = 0
  std::map<std::string, Rational> val{{"t", 7}, {"lt", 3}, {"t1", 0}, {"t2", 0}};
  size_t loc = 0;
  while (loc != 1) {
    const FaEdge* e = nullptr;
    for (const auto& c : fa.edges)
      if (c.src == loc) e = &c;
    REQUIRE(e);
    Rational v = e->reset.rhs.constant;
    for (const auto& [n, k] : e->reset.rhs.terms) v += k * val[n];
    val[e->reset.local] = v;
    loc = e->dst;
  }
  CHECK(val["lt"] == 0);
  CHECK(val["t1"] == 7);
  CHECK(val["t2"] == 8);
}

TEST_CASE("timer rates") {
  auto fa = build("feature F(); begin var s; @+(x>=1), s=$time |-> F = s; end");
  CHECK(timer_rate(fa, 0, "t") == 1);
  CHECK(timer_rate(fa, 0, "s") == 0);
  for (size_t i = 0; i < fa.locs.size(); ++i)
    if (fa.locs[i].kind != FaLocation::Kind::Main || fa.locs[i].in_z) CHECK(timer_rate(fa, i, "lt") == 0);
  for (const auto& l : fa.locs)
    if (l.kind == FaLocation::Kind::Pause) {
      size_t outs = 0;
      for (const auto& e : fa.edges)
        if (fa.locs[e.src].name == l.name) {
          ++outs;
          CHECK(!e.sub);
        }
      CHECK(outs == 1);
    }
  CHECK(to_text(fa).find("edge q1 -> q1_1") != std::string::npos);
}

TEST_CASE("ungrounded features are refused") {
  CHECK_THROWS_AS(build_feature_automaton(parse_feature("feature F(a); begin @+(x>=a) |-> F = a; end")),
                  SemanticError);
}
