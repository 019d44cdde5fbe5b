// End-to-end acceptance checks over the corpus. One PASS/FAIL line per criterion.

#include "featrange/report.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace featrange;
using nlohmann::json;

namespace {

const std::string kCorpus = std::string(FEATRANGE_SOURCE_DIR) + "/corpus/";

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Rational rat(const json& j) {
  auto r = parse_rational(j.is_string() ? j.get<std::string>() : j.dump());
  if (!r) throw std::runtime_error("bad number in manifest: " + j.dump());
  return *r;
}

std::map<std::string, Rational> params(const json& j) {
  std::map<std::string, Rational> b;
  for (const auto& [k, v] : j.items()) b[k] = rat(v);
  return b;
}

CompareConfig compare_config(const json& c) {
  CompareConfig cc;
  cc.reach.time_horizon = rat(c["horizon"]);
  cc.search.horizon = rat(c["horizon"]);
  cc.search.K = c["hops"].get<size_t>();
  cc.search.M = rat(c["step_size"]);
  cc.search.epsilon = rat(c["epsilon"]);
  cc.runs = c["runs"].get<size_t>();
  cc.seed = c["seed"].get<uint64_t>();
  cc.sim.dt = c["dt"].get<double>();
  cc.sim.horizon = to_double(cc.reach.time_horizon);
  return cc;
}

Problem record_problem(const json& r) {
  return load_problem(kCorpus + r["model"].get<std::string>(), kCorpus + r["feature"].get<std::string>(),
                      params(r["params"]));
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
}

// 1
void trivial_exact() {
  Clock clk;
  auto p = load_problem(kCorpus + "models/trivial.ha", kCorpus + "features/cross.fia", {});
  ReachConfig rc;
  rc.time_horizon = 10;
  auto r = reach_report(p, rc);
  SearchConfig sc;
  sc.horizon = 10;
  sc.K = 3;
  sc.M = 1;
  sc.epsilon = Rational(1, 10000);
  CornerOracle o(p.product, sc);
  auto c = search_range(o);
  double secs = clk.seconds();
  bool ok = r["match"].get<bool>() && rat(r["exact_min"]) == 4 && rat(r["exact_max"]) == 5 && c && c->min.value >= 4 && c->min.value <= 4 + sc.epsilon &&
            c->max.value >= 5 - sc.epsilon && c->max.value <= 5 && secs < 5;
  std::string detail = "reach [" + r["exact_min"].get<std::string>() + ", " + r["exact_max"].get<std::string>() + "]";
  if (c) detail += ", corner [" + to_exact(c->min.value) + ", " + to_exact(c->max.value) + "]";
  report(1, "trivial model ranges", ok, detail + ", " + fmt(secs) + " s");
}

// 2; keeps the compare reports for later checks
std::map<std::string, json> sandwich(const json& manifest) {
  Clock clk;
  std::map<std::string, json> out;
  bool all = true;
  std::string notes;
  for (const auto& r : manifest["records"]) {
    auto id = r["id"].get<std::string>();
    bool ok = false;
    try {
      auto p = record_problem(r);
      auto j = compare_report(p, compare_config(r["config"]));
      bool corner_expected_error = r.contains("expect") && r["expect"].value("corner", "") == "ResourceExhausted";
      if (corner_expected_error) {
        ok = j["corner"].contains("error") && j["verdicts"]["empirical_in_reach"].get<bool>();
        notes += " " + id + "=empirical-in-reach(corner exhausted)";
      } else {
        ok = j["verdict"] == "PASS";
        notes += " " + id + "=" + j["verdict"].get<std::string>();
      }
      out[id] = j;
    } catch (const std::exception& e) {
      notes += " " + id + "=error(" + e.what() + ")";
    }
    all = all && ok;
  }
  double secs = clk.seconds();
  report(2, "corner and empirical inside reach", all && secs < 300, notes.substr(1) + ", " + fmt(secs) + " s");
  return out;
}

// small random linear hybrid automaton with interval rates
std::string random_model(std::mt19937_64& rng, size_t& nloc) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  nloc = pick(1, 3);
  std::ostringstream os;
  os << "var x y;\n";
  for (size_t i = 0; i < nloc; ++i) {
    int a = pick(1, 3), b = a + pick(0, 2);
    int c = pick(-2, 1), d = c + pick(0, 2);
    os << "location L" << i << " { inv: 0 <= x <= 10 & -10 <= y <= 10; flow: x' = [" << a << "/2, " << b
       << "/2]; y' = [" << c << ", " << d << "]; }\n";
  }
  for (size_t i = 0; i < nloc; ++i) {
    for (size_t k = 0; k < nloc; ++k) {
      if (i == k || pick(0, 2) == 0) continue;
      os << "edge L" << i << " -> L" << k << " { label e" << i << k << "; guard: x >= " << pick(1, 6) << ";";
      if (pick(0, 1)) os << " reset: y := 0;";
      os << " }\n";
    }
  }
  os << "init L0 { 0 <= x <= 1 & 0 <= y <= " << pick(0, 2) << "; }\n";
  return os.str();
}

std::string random_feature(std::mt19937_64& rng, size_t& levels) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  switch (pick(0, 2)) {
    case 0:
      levels = 1;
      return "feature F(); begin var s; @+(x>=" + std::to_string(pick(2, 8)) + "), s=$time |-> F = s; end";
    case 1:
      levels = 1;
      return "feature F(); begin var s; @+(x>=" + std::to_string(pick(2, 8)) + "), s=y |-> F = s; end";
    default:
      levels = 2;
      return "feature F(); begin var s, u; @+(x>=" + std::to_string(pick(1, 4)) + "), s=$time ##[0:$] @+(x>=" +
             std::to_string(pick(5, 9)) + "), u=$time |-> F = u - s; end";
  }
}

// 3
void ets_vs_direct() {
  Clock clk;
  std::mt19937_64 rng(20240607);
  const Rational eps(1, 1000);
  size_t agree = 0, matched = 0, total = 20;
  std::string bad;
  for (size_t i = 0; i < total; ++i) {
    size_t nloc = 0, levels = 0;
    auto model = random_model(rng, nloc);
    auto feature = random_feature(rng, levels);
    size_t K = std::uniform_int_distribution<size_t>(levels + 1, 5)(rng);
    try {
      auto p = make_problem(parse_model(model), parse_feature(feature), {});
      SearchConfig sc;
      sc.horizon = 10;
      sc.K = K;
      sc.M = Rational(1, 2);
      sc.epsilon = eps;
      CornerOracle a(p.product, sc), b(p.product, sc);
      auto e = search_range(a);
      auto d = search_range_direct(b);
      bool ok;
      if (!e || !d) {
        ok = !e && !d;
      } else {
        ++matched;
        ok = abs(e->min.value - d->min.value) <= eps && abs(e->max.value - d->max.value) <= eps;
      }
      if (ok)
        ++agree;
      else
        bad += " #" + std::to_string(i);
    } catch (const std::exception& ex) {
      bad += " #" + std::to_string(i) + "(" + ex.what() + ")";
    }
  }
  double secs = clk.seconds();
  report(3, "interval search agrees with direct optimization", agree == total,
         std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(matched) + " with a match)" +
             (bad.empty() ? "" : ", mismatched:" + bad) + ", " + fmt(secs) + " s");
}

// 4
void product_bounds(const json& manifest) {
  bool all = true;
  std::string notes;
  std::map<std::string, size_t> expected_xf = {{"buck-settle", 7}, {"battery-charge", 7}};
  for (const auto& r : manifest["records"]) {
    auto id = r["id"].get<std::string>();
    try {
      auto p = record_problem(r);
      auto b = check_bounds(p.product, p.model, p.fa);
      bool ok = b.ok() && b.xf == b.xh + b.v + b.c + 1;
      auto it = expected_xf.find(id);
      if (it != expected_xf.end()) ok = ok && b.xf == it->second;
      notes += " " + id + "=" + std::to_string(b.xf) + (it != expected_xf.end() ? "/" + std::to_string(it->second) : "");
      all = all && ok;
    } catch (const std::exception& e) {
      notes += " " + id + "=error(" + e.what() + ")";
      all = false;
    }
  }
  report(4, "product dimension and location bounds", all, "xf per pair:" + notes);
}

double pulse(double t, std::initializer_list<std::pair<double, double>> regions) {
  for (auto [a, b] : regions)
    if (t >= a - 1e-9 && t <= b + 1e-9) return 1;
  return 0;
}

// 5
void region_pairing() {
  Trace tr;
  tr.vars = {"x", "y"};
  TraceStep st;
  st.loc = "A";
  st.t_entry = 0;
  st.dwell = 10;
  for (int k = 0; k <= 100; ++k) {
    double t = k / 10.0;
    tr.samples.push_back({t, 0, {pulse(t, {{1, 2}, {6, 7}}), pulse(t, {{3, 3.5}, {4, 5}, {8, 9}})}});
  }
  st.entry = tr.samples.front().x;
  st.exit = tr.samples.back().x;
  tr.steps.push_back(st);
  auto f = resolve_params(
      parse_feature("feature fm(); begin var a, b; (x>=1), a=$time ##[0:$] (y>=1), b=$time |-> fm = b-a; end"), {});
  auto m = monitor(tr, f);
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  bool ok = m.size() == 2 && near(m[0].times[0], 1) && near(m[0].times[1], 3) && near(m[1].times[0], 6) &&
            near(m[1].times[1], 8);
  std::string detail;
  for (const auto& r : m) {
    if (near(r.times[1], 4)) ok = false;
    detail += " (" + fmt(r.times[0]) + "," + fmt(r.times[1]) + ")";
  }
  report(5, "first-match region pairing", ok, "matches" + (detail.empty() ? std::string(" none") : detail));
}

// 6
void buck_settle(const json& manifest, const std::map<std::string, json>& reports) {
  auto it = reports.find("buck-settle");
  if (it == reports.end()) {
    report(6, "buck settling time reach contains simulation", false, "no report");
    return;
  }
  const auto& j = it->second;
  const auto& rj = j["reach"];
  bool ok = rj["match"].get<bool>() && rj["complete"].get<bool>();
  double lo = ok ? to_double(rat(rj["exact_min"])) : 0, hi = ok ? to_double(rat(rj["exact_max"])) : 0;
  size_t inside = 0, n = 0;
  for (const auto& s : j["empirical"]["samples"]) {
    double v = s.get<double>();
    ++n;
    double tol = 1e-9 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (v >= lo - tol && v <= hi + tol) ++inside;
  }
  ok = ok && n > 0 && inside == n;
  std::string ref;
  for (const auto& r : manifest["records"])
    if (r["id"] == "buck-settle" && r.contains("reference"))
      ref = ", reference [" + r["reference"]["min"].get<std::string>() + ", " +
            r["reference"]["max"].get<std::string>() + "] (not asserted)";
  report(6, "buck settling time reach contains simulation", ok,
         "reach [" + fmt(lo) + ", " + fmt(hi) + "], " + std::to_string(inside) + "/" + std::to_string(n) +
             " samples inside, " + std::to_string(j["empirical"]["runs"].get<size_t>()) + " runs" + ref);
}

// 7
void reactor_corners(const std::map<std::string, json>& reports) {
  auto it = reports.find("reactor-unsafe");
  if (it == reports.end() || it->second["corner"].contains("error") || !it->second["corner"]["match"].get<bool>()) {
    report(7, "reactor corner values", false, "no corner result");
    return;
  }
  const auto& c = it->second["corner"];
  Rational lo = rat(c["min"]["exact"]), hi = rat(c["max"]["exact"]);
  Rational tol(1, 2);
  bool ok = abs(lo - 550) <= tol && abs(hi - 600) <= tol;
  report(7, "reactor corner values", ok, "corner [" + to_literal(lo) + ", " + to_literal(hi) + "]");
}

// 8
void feature_library(const json& manifest) {
  size_t ok = 0, total = 0;
  std::string bad;
  for (const auto& f : manifest["features"]) {
    ++total;
    auto path = f["feature"].get<std::string>();
    try {
      auto g = resolve_params(parse_feature_file(kCorpus + path), params(f["params"]));
      auto fa = build_feature_automaton(g);
      if (!fa.locs.empty()) ++ok;
    } catch (const std::exception& e) {
      bad += " " + path + "(" + e.what() + ")";
    }
  }
  for (const auto& f : manifest["unsupported"]) {
    ++total;
    auto path = f["feature"].get<std::string>();
    auto want = f["error"].get<std::string>();
    try {
      auto g = resolve_params(parse_feature_file(kCorpus + path), params(f["params"]));
      build_feature_automaton(g);
      bad += " " + path + "(accepted)";
    } catch (const Error& e) {
      if (e.kind() == want)
        ++ok;
      else
        bad += " " + path + "(" + e.kind() + ")";
    }
  }
  report(8, "feature library compiles", ok == total,
         std::to_string(ok) + "/" + std::to_string(total) + " as expected" + (bad.empty() ? "" : ";" + bad));
}

}  // namespace

int main() {
  json manifest;
  {
    std::ifstream in(kCorpus + "manifest.json");
    if (!in) {
      std::cerr << "cannot read " << kCorpus << "manifest.json\n";
      return 2;
    }
    manifest = json::parse(in);
  }
  trivial_exact();
  auto reports = sandwich(manifest);
  ets_vs_direct();
  product_bounds(manifest);
  region_pairing();
  buck_settle(manifest, reports);
  reactor_corners(reports);
  feature_library(manifest);
  return failures == 0 ? 0 : 1;
}
