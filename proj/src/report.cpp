#include "featrange/report.hpp"

#include <algorithm>
#include <cmath>

namespace featrange {

Problem make_problem(const HybridAutomaton& h, const FeatureDecl& f, const std::map<std::string, Rational>& bindings,
                     const LshaOptions& opt) {
  Problem p;
  p.model = h;
  p.feature = resolve_params(f, bindings, &p.warnings);
  for (const auto& w : f.warnings) p.warnings.push_back(w);
  p.fa = build_feature_automaton(p.feature);
  p.product = build_lsha(h, p.fa, opt);
  for (const auto& w : p.product.warnings) p.warnings.push_back(w);
  return p;
}

Problem load_problem(const std::string& model_path, const std::string& feature_path,
                     const std::map<std::string, Rational>& bindings, const LshaOptions& opt) {
  return make_problem(parse_model_file(model_path), parse_feature_file(feature_path), bindings, opt);
}

nlohmann::json number_json(const Rational& r) { return {{"decimal", to_decimal(r)}, {"exact", to_exact(r)}}; }

nlohmann::json witness_json(const Lsha& l, const Witness& w) {
  nlohmann::json path = nlohmann::json::array(), dwell = nlohmann::json::array();
  for (size_t e : w.path) path.push_back(l.ha.edges[e].label);
  for (const auto& d : w.dwell) dwell.push_back(to_decimal(d));
  return {{"value", to_decimal(w.value)}, {"exact", to_exact(w.value)},
          {"boundary_degenerate", w.boundary_degenerate}, {"path", path},
          {"dwell", dwell}, {"trace", to_json(w.trace(l))}};
}

nlohmann::json reach_report(const Problem& p, const ReachConfig& cfg) {
  auto r = reach(p.product, cfg);
  nlohmann::json j = {{"feature", p.feature.name}, {"method", "polyhedral-reach"}, {"complete", r.complete()},
                      {"horizon", to_decimal(cfg.time_horizon)}, {"horizon_hit", r.horizon_hit},
                      {"symbolic_states", r.states.size()}, {"hybridized", r.hybridized}};
  auto fr = feature_range(r);
  if (!fr) {
    j["match"] = false;
    j["min"] = j["max"] = j["exact_min"] = j["exact_max"] = nullptr;
  } else {
    j["match"] = true;
    j["min"] = to_decimal(fr->min);
    j["max"] = to_decimal(fr->max);
    j["exact_min"] = to_exact(fr->min);
    j["exact_max"] = to_exact(fr->max);
    j["partial"] = fr->partial;
  }
  auto warnings = p.warnings;
  if (fr) warnings.insert(warnings.end(), fr->warnings.begin(), fr->warnings.end());
  if (r.exhausted) warnings.push_back("ResourceExhausted: symbolic state cap reached");
  j["warnings"] = warnings;
  return j;
}

nlohmann::json corner_report(const Problem& p, const SearchConfig& cfg, bool direct) {
  CornerOracle o(p.product, cfg);
  auto r = direct ? search_range_direct(o) : search_range(o);
  nlohmann::json j = {{"feature", p.feature.name}, {"method", direct ? "direct" : "expand-ets"},
                      {"hops", cfg.K}, {"horizon", to_decimal(cfg.horizon)},
                      {"epsilon", to_decimal(cfg.epsilon)}, {"step_size", to_decimal(cfg.M)}};
  j["paths"] = o.path_count();
  j["oracle_calls"] = o.goals().size();
  if (!r) {
    j["match"] = false;
    j["min"] = j["max"] = nullptr;
  } else {
    j["match"] = true;
    j["min"] = witness_json(p.product, r->min);
    j["max"] = witness_json(p.product, r->max);
  }
  j["warnings"] = p.warnings;
  return j;
}

nlohmann::json sim_report(const Problem& p, size_t runs, uint64_t seed, const SimConfig& cfg) {
  auto e = sample_feature(p.model, p.feature, runs, seed, cfg);
  nlohmann::json j = {{"feature", p.feature.name}, {"method", "simulation"}, {"runs", e.runs},
                      {"matched_runs", e.matched_runs}, {"stuck_runs", e.stuck_runs},
                      {"interrupted", e.interrupted}, {"seed", seed}, {"dt", cfg.dt}, {"horizon", cfg.horizon}};
  j["min"] = e.min ? nlohmann::json(*e.min) : nlohmann::json(nullptr);
  j["max"] = e.max ? nlohmann::json(*e.max) : nlohmann::json(nullptr);
  j["samples"] = e.samples;
  return j;
}

nlohmann::json compare_report(const Problem& p, const CompareConfig& cfg) {
  nlohmann::json j = {{"feature", p.feature.name}};
  j["reach"] = reach_report(p, cfg.reach);
  try {
    j["corner"] = corner_report(p, cfg.search, cfg.direct);
  } catch (const ResourceExhausted& e) {
    j["corner"] = {{"error", "ResourceExhausted"}, {"message", e.what()}};
  }
  j["empirical"] = sim_report(p, cfg.runs, cfg.seed, cfg.sim);

  const auto& R = j["reach"];
  const auto& C = j["corner"];
  const auto& E = j["empirical"];
  auto exact = [](const nlohmann::json& v) { return *parse_rational(v.get<std::string>()); };
  auto tol = [&](double bound) { return cfg.sample_tol * std::max(1.0, std::abs(bound)); };
  nlohmann::json verdicts;
  bool ok = true;

  // empirical inside reach
  if (E["min"].is_null()) {
    verdicts["empirical_in_reach"] = true;
  } else if (!R["match"].get<bool>()) {
    verdicts["empirical_in_reach"] = false;
  } else {
    double lo = to_double(exact(R["exact_min"])), hi = to_double(exact(R["exact_max"]));
    verdicts["empirical_in_reach"] =
        E["min"].get<double>() >= lo - tol(lo) && E["max"].get<double>() <= hi + tol(hi);
  }
  ok = ok && verdicts["empirical_in_reach"].get<bool>();

  if (C.contains("error")) {
    verdicts["corner_in_reach"] = nullptr;
    verdicts["empirical_in_corner"] = nullptr;
    ok = false;
  } else if (!C["match"].get<bool>()) {
    verdicts["corner_in_reach"] = true;
    verdicts["empirical_in_corner"] = E["min"].is_null();
    ok = ok && E["min"].is_null();
  } else {
    Rational cmin = exact(C["min"]["exact"]), cmax = exact(C["max"]["exact"]);
    bool in_reach = R["match"].get<bool>() && cmin >= exact(R["exact_min"]) && cmax <= exact(R["exact_max"]);
    verdicts["corner_in_reach"] = in_reach;
    double lo = to_double(cmin), hi = to_double(cmax);
    bool emp = E["min"].is_null() || (E["min"].get<double>() >= lo - tol(lo) && E["max"].get<double>() <= hi + tol(hi));
    verdicts["empirical_in_corner"] = emp;
    ok = ok && in_reach && emp;
  }
  j["verdicts"] = verdicts;
  j["verdict"] = ok ? "PASS" : "FAIL";
  return j;
}

}  // namespace featrange
