#include <doctest.h>

#include "featrange/lsha.hpp"

#include <deque>
#include <map>

using namespace featrange;

namespace {

const char* kTrivial = R"(var x;
location A { inv: 0 <= x <= 10; flow: x' = [1, 1]; }
init A { x in [0, 1]; })";

const char* kTwo = R"(var x;
location A { inv: 0 <= x <= 10; flow: x' = 1; }
location B { inv: 0 <= x <= 10; flow: x' = -1; }
edge A -> B { label flip; guard: x >= 8; }
edge B -> A { label flop; guard: x <= 2; }
init A { x in [0, 1]; })";

Lsha product(const char* model, const char* feature, const std::map<std::string, Rational>& b = {}) {
  auto h = parse_model(model);
  auto fa = build_feature_automaton(resolve_params(parse_feature(feature), b));
  return build_lsha(h, fa);
}

// shortest edge count from init to qF, ignoring guards
long hops_to_final(const Lsha& l) {
  std::vector<long> d(l.ha.locations.size(), -1);
  std::deque<size_t> q = {l.ha.init_loc};
  d[l.ha.init_loc] = 0;
  while (!q.empty()) {
    size_t u = q.front();
    q.pop_front();
    for (const auto& e : l.ha.edges)
      if (e.src == u && d[e.dst] < 0) {
        d[e.dst] = d[u] + 1;
        q.push_back(e.dst);
      }
  }
  return d[l.final_loc];
}

size_t count_kind(const Lsha& l, LshaEdgeInfo::Kind k) {
  size_t n = 0;
  for (const auto& e : l.edge_info) n += e.kind == k;
  return n;
}

}  // namespace

TEST_CASE("single crossing on the trivial model") {
  auto l = product(kTrivial, "feature F(); begin var s; @+(x>=5), s=$time |-> F = s; end");
  CHECK(l.ha.dim() == 6);
  CHECK(l.ha.vars[l.f_var] == "F");
  CHECK(count_kind(l, LshaEdgeInfo::Kind::Advance) == 1);
  CHECK(count_kind(l, LshaEdgeInfo::Kind::Chain) == 1);
  CHECK(hops_to_final(l) == 2);
  for (size_t i = 0; i < l.ha.edges.size(); ++i) {
    if (l.edge_info[i].kind != LshaEdgeInfo::Kind::Advance) continue;
    const auto& g = l.ha.edges[i].guard;
    std::vector<Rational> pt(l.ha.dim());
    pt[0] = 5;
    CHECK(g.contains_point(pt));
    pt[0] = 4;
    CHECK_FALSE(g.contains_point(pt));
  }
  auto r = check_bounds(l, parse_model(kTrivial),
                        build_feature_automaton(parse_feature("feature F(); begin var s; @+(x>=5), s=$time |-> F = s; end")));
  CHECK(r.xf == 6);
  CHECK(r.pause == 1);
  CHECK(r.pause_bound == 1);
}

TEST_CASE("downward crossing is impossible with a positive rate") {
  auto l = product(kTrivial, "feature F(); begin var s; @-(x>=5), s=$time |-> F = s; end");
  CHECK(count_kind(l, LshaEdgeInfo::Kind::Advance) == 0);
  CHECK(hops_to_final(l) == -1);
}

TEST_CASE("second level splits on the state condition") {
  auto l = product(kTrivial, "feature G(); begin var a; (x>=2), a=$time ##[1:3] (x>=6) |-> G = a; end");
  size_t match = 0, rest = 0;
  for (const auto& i : l.loc_info) {
    if (i.level != 1 || i.kind != LshaLocInfo::Kind::Cell) continue;
    match += i.role == LshaLocInfo::Role::Match;
    rest += i.role == LshaLocInfo::Role::Rest;
  }
  CHECK(match == 1);
  CHECK(rest == 1);
  // two advances; only level 0 has a chain hop
  CHECK(count_kind(l, LshaEdgeInfo::Kind::Advance) == 2);
  CHECK(hops_to_final(l) == 3);
}

TEST_CASE("zero-rate event is reported") {
  const char* m = R"(var x, y;
location A { inv: 0 <= x <= 10 & 0 <= y <= 1; flow: x' = 1; y' = 0; }
init A { x == 0 & y == 0; })";
  auto l = product(m, "feature F(); begin @+(y>=1) |-> F = 0; end");
  REQUIRE(l.warnings.size() == 1);
  CHECK(l.warnings[0].find("EventUndetectable") == 0);
  CHECK(hops_to_final(l) == -1);
}

TEST_CASE("location entry event") {
  auto l = product(kTwo, "feature E(); begin var s; @+(state==B), s=$time |-> E = s; end");
  size_t adv = 0;
  for (size_t i = 0; i < l.ha.edges.size(); ++i)
    if (l.edge_info[i].kind == LshaEdgeInfo::Kind::Advance) {
      ++adv;
      CHECK(l.edge_info[i].ha_edge == 0);
    }
  CHECK(adv == 1);
  CHECK(hops_to_final(l) == 2);
}

TEST_CASE("unknown identifiers in the feature") {
  CHECK_THROWS_AS(product(kTrivial, "feature F(); begin @+(z>=1) |-> F = 0; end"), SemanticError);
  auto l = product(kTrivial, "feature F(); begin @+(state==Nowhere) |-> F = 0; end");
  REQUIRE(!l.warnings.empty());
  CHECK(l.warnings[0].find("UnknownLocation") == 0);
}

TEST_CASE("affine cells are hybridized") {
  const char* m = R"(var x;
location A { inv: 0 <= x <= 10; flow: x' = -x + 10; }
init A { x == 0; })";
  auto l = product(m, "feature F(); begin var s; @+(x>=5), s=$time |-> F = s; end");
  CHECK(l.hybridized);
  CHECK(l.ha.is_rectangular());
  CHECK(hops_to_final(l) == 2);
}
