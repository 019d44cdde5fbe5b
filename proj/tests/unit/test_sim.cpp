#include <doctest.h>

#include "featrange/sim.hpp"

#include <cmath>
#include <cstdlib>

using namespace featrange;

namespace {

const char* kTrivial = R"(var x;
location A { inv: 0 <= x <= 10; flow: x' = [1, 1]; }
init A { x in [0, 1]; })";

const char* kCross = "feature F(); begin var s; @+(x>=5), s=$time |-> F = s; end";

FeatureDecl grounded(const char* text) { return resolve_params(parse_feature(text), {}); }

// piecewise-constant 0/1 signal sampled every 0.1 on [0, 10]
double pulse(double t, std::initializer_list<std::pair<double, double>> regions) {
  for (auto [a, b] : regions)
    if (t >= a - 1e-9 && t <= b + 1e-9) return 1;
  return 0;
}

}  // namespace

TEST_CASE("unit rate run") {
  auto h = parse_model(R"(var x;
location A { inv: 0 <= x <= 100; flow: x' = 1; }
init A { x == 0; })");
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 10;
  auto tr = simulate(h, 1, cfg);
  REQUIRE(!tr.samples.empty());
  for (const auto& s : tr.samples) CHECK(std::abs(s.x[0] - s.t) < 1e-9);
  CHECK(tr.steps.back().exit[0] == doctest::Approx(10));
  CHECK_FALSE(tr.stuck);
}

TEST_CASE("fixed-min policy on an interval rate") {
  auto h = parse_model(R"(var x;
location A { inv: 0 <= x <= 100; flow: x' = [1, 2]; }
init A { x == 0; })");
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.horizon = 5;
  cfg.rates = SimConfig::Rates::FixedMin;
  auto tr = simulate(h, 3, cfg);
  CHECK(tr.steps.back().exit[0] == doctest::Approx(5));
}

TEST_CASE("invariant exit forces the jump") {
  auto h = parse_model(R"(var x;
location A { inv: 0 <= x <= 2; flow: x' = 1; }
location B { inv: 0 <= x <= 10; flow: x' = -1; }
edge A -> B { guard: x >= 2; }
init A { x == 0; })");
  SimConfig cfg;
  cfg.dt = 0.3;
  cfg.horizon = 3;
  auto tr = simulate(h, 5, cfg);
  REQUIRE(tr.steps.size() == 2);
  CHECK(tr.steps[0].exit[0] == doctest::Approx(2).epsilon(1e-9));
  CHECK(tr.steps[1].t_entry == doctest::Approx(2).epsilon(1e-9));
}

TEST_CASE("stuck run is flagged") {
  auto h = parse_model(R"(var x;
location A { inv: 0 <= x <= 2; flow: x' = 1; }
init A { x == 0; })");
  SimConfig cfg;
  cfg.dt = 0.5;
  cfg.horizon = 5;
  auto tr = simulate(h, 1, cfg);
  CHECK(tr.stuck);
}

TEST_CASE("monitor on the trivial crossing") {
  auto h = parse_model(R"(var x;
location A { inv: 0 <= x <= 10; flow: x' = 1; }
init A { x == 0; })");
  SimConfig cfg;
  cfg.dt = 0.3;
  cfg.horizon = 10;
  auto tr = simulate(h, 1, cfg);
  auto m = monitor(tr, grounded(kCross));
  REQUIRE(m.size() == 1);
  CHECK(std::abs(m[0].value - 5) < 1e-9);
}

TEST_CASE("first-match region pairing") {
  Trace tr;
  tr.vars = {"x", "y"};
  TraceStep st;
  st.loc = "A";
  st.t_entry = 0;
  st.dwell = 10;
  for (int k = 0; k <= 100; ++k) {
    double t = k / 10.0;
    // r1 = [1,2], r4 = [6,7] on x; r2 = [3,3.5], r3 = [4,5], r5 = [8,9] on y
    double x = pulse(t, {{1, 2}, {6, 7}});
    double y = pulse(t, {{3, 3.5}, {4, 5}, {8, 9}});
    tr.samples.push_back({t, 0, {x, y}});
  }
  st.entry = tr.samples.front().x;
  st.exit = tr.samples.back().x;
  tr.steps.push_back(st);
  auto m = monitor(tr, grounded("feature fm(); begin var a, b; (x>=1), a=$time ##[0:$] (y>=1), b=$time |-> fm = b-a; end"));
  REQUIRE(m.size() == 2);
  CHECK(m[0].times[0] == doctest::Approx(1));
  CHECK(m[0].times[1] == doctest::Approx(3));
  CHECK(m[1].times[0] == doctest::Approx(6));
  CHECK(m[1].times[1] == doctest::Approx(8));
  for (const auto& r : m) CHECK(r.times[1] != doctest::Approx(4));
}

TEST_CASE("delay window drops late matches") {
  Trace tr;
  tr.vars = {"x", "y"};
  TraceStep st;
  st.loc = "A";
  st.dwell = 10;
  for (int k = 0; k <= 100; ++k) {
    double t = k / 10.0;
    tr.samples.push_back({t, 0, {pulse(t, {{1, 2}}), pulse(t, {{5, 6}})}});
  }
  st.entry = tr.samples.front().x;
  st.exit = tr.samples.back().x;
  tr.steps.push_back(st);
  auto f = grounded("feature d(); begin var a; (x>=1), a=$time ##[0:2] (y>=1) |-> d = a; end");
  CHECK(monitor(tr, f).empty());
  auto g = grounded("feature d(); begin var a; (x>=1), a=$time ##[3:5] (y>=1) |-> d = a; end");
  // window opens at 4 after the anchor at 1; y holds from 5
  auto m = monitor(tr, g);
  REQUIRE(m.size() == 1);
  CHECK(m[0].times[1] == doctest::Approx(5));
}

TEST_CASE("location entry event") {
  auto h = parse_model(R"(var x;
location A { inv: 0 <= x <= 2; flow: x' = 1; }
location B { inv: 0 <= x <= 10; flow: x' = 1; }
edge A -> B { guard: x >= 2; }
init A { x == 0; })");
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.horizon = 4;
  cfg.p_take = 0;
  auto tr = simulate(h, 2, cfg);
  auto m = monitor(tr, grounded("feature E(); begin var s; @+(state==B), s=$time |-> E = s; end"));
  REQUIRE(m.size() == 1);
  CHECK(m[0].value == doctest::Approx(2));
}

TEST_CASE("empirical range on the trivial model") {
  auto h = parse_model(kTrivial);
  SimConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 10;
  auto e = sample_feature(h, grounded(kCross), 100, 42, cfg);
  REQUIRE(e.min);
  CHECK(*e.min >= 4 - 1e-9);
  CHECK(*e.max <= 5 + 1e-9);
  CHECK(e.matched_runs == 100);
  auto one = sample_feature(h, grounded(kCross), 1, 42, cfg);
  REQUIRE(one.min);
  CHECK(*one.min == *one.max);
}

TEST_CASE("sampling is independent of the worker count") {
  auto h = parse_model(kTrivial);
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.horizon = 10;
  setenv("FEATRANGE_THREADS", "1", 1);
  auto a = sample_feature(h, grounded(kCross), 16, 9, cfg);
  setenv("FEATRANGE_THREADS", "4", 1);
  auto b = sample_feature(h, grounded(kCross), 16, 9, cfg);
  unsetenv("FEATRANGE_THREADS");
  CHECK(a.samples == b.samples);
}
