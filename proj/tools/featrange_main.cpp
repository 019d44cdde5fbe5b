// featrange command-line front end.

#include "featrange/cancel.hpp"
#include "featrange/report.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace featrange;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInput = 1, kIncomplete = 2, kInternal = 3 };

struct Options {
  std::string model, feature, out;
  std::vector<std::string> params;
  std::string horizon;
  size_t hops = 15;
  std::string step_size = "1/1000000";
  std::string epsilon = "1/1000000";
  bool direct = false;
  bool no_hybridize = false;
  size_t runs = 100;
  uint64_t seed = 1;
  double dt = 1e-3;
  std::string format = "json";
  size_t max_states = 20000;
  size_t max_paths = 100000;
  size_t max_work = 10000000;
};

Rational rational_arg(const std::string& flag, const std::string& text) {
  auto r = parse_rational(text);
  if (!r) throw ValidationError("--" + flag + ": not a number: " + text);
  return *r;
}

std::map<std::string, Rational> bindings(const Options& o) {
  std::map<std::string, Rational> b;
  for (const auto& p : o.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--param expects NAME=VALUE, got " + p);
    b[p.substr(0, eq)] = rational_arg("param", p.substr(eq + 1));
  }
  return b;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ValidationError(std::string("missing required flag --") + flag);
}

// Flat "key: value" rendering of the same payload.
void render_text(std::ostream& os, const json& j, const std::string& prefix = "") {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "trace") continue;
      render_text(os, v, prefix.empty() ? k : prefix + "." + k);
    }
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (size_t i = 0; i < j.size(); ++i) render_text(os, j[i], prefix + "[" + std::to_string(i) + "]");
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit_text(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ValidationError("cannot write " + o.out);
  f << text;
}

void emit(const Options& o, const json& j) {
  std::ostringstream os;
  if (o.format == "text")
    render_text(os, j);
  else
    os << j.dump(2) << "\n";
  emit_text(o, os.str());
}

LshaOptions lsha_options(const Options& o) {
  LshaOptions l;
  l.hybridize = !o.no_hybridize;
  return l;
}

Problem problem(const Options& o) {
  require(o.model, "model");
  require(o.feature, "feature");
  return load_problem(o.model, o.feature, bindings(o), lsha_options(o));
}

ReachConfig reach_config(const Options& o) {
  ReachConfig c;
  c.time_horizon = rational_arg("horizon", o.horizon);
  c.max_symstates = o.max_states;
  return c;
}

SearchConfig search_config(const Options& o) {
  SearchConfig c;
  c.horizon = rational_arg("horizon", o.horizon);
  c.K = o.hops;
  c.M = rational_arg("step-size", o.step_size);
  c.epsilon = rational_arg("epsilon", o.epsilon);
  c.max_paths = o.max_paths;
  c.max_work = o.max_work;
  return c;
}

SimConfig sim_config(const Options& o) {
  SimConfig c;
  c.dt = o.dt;
  c.horizon = to_double(rational_arg("horizon", o.horizon));
  return c;
}

int run_check(const Options& o) {
  if (o.model.empty() && o.feature.empty()) throw ValidationError("check needs --model and/or --feature");
  json j = json::object();
  if (!o.model.empty()) {
    auto h = parse_model_file(o.model);
    j["model"] = {{"path", o.model}, {"variables", h.vars.size()}, {"locations", h.locations.size()},
                  {"edges", h.edges.size()}, {"status", "ok"}};
  }
  if (!o.feature.empty()) {
    auto f = parse_feature_file(o.feature);
    std::vector<std::string> warnings = f.warnings;
    auto g = resolve_params(f, bindings(o), &warnings);
    auto fa = build_feature_automaton(g);
    j["feature"] = {{"path", o.feature}, {"name", f.name}, {"params", f.params},
                    {"subexpressions", f.seq.size()}, {"fa_locations", fa.locs.size()}, {"status", "ok"}};
    j["warnings"] = warnings;
  }
  if (!o.model.empty() && !o.feature.empty()) {
    auto p = problem(o);
    auto b = check_bounds(p.product, p.model, p.fa);
    j["product"] = {{"locations", p.product.ha.locations.size()}, {"edges", p.product.ha.edges.size()},
                    {"xf", b.xf}, {"xh", b.xh}, {"locals", b.v}, {"timers", b.c},
                    {"pause", b.pause}, {"pause_bound", b.pause_bound}};
    j["warnings"] = p.warnings;
  }
  emit(o, j);
  return kOk;
}

int run_fa(const Options& o) {
  require(o.feature, "feature");
  std::vector<std::string> warnings;
  auto g = resolve_params(parse_feature_file(o.feature), bindings(o), &warnings);
  auto fa = build_feature_automaton(g);
  if (o.format == "json") {
    emit(o, {{"feature", g.name}, {"ha", to_text(fa)}, {"dot", to_dot(fa)}, {"warnings", warnings}});
  } else {
    emit_text(o, to_text(fa) + "\n" + to_dot(fa));
  }
  return kOk;
}

int run_product(const Options& o) {
  auto p = problem(o);
  auto b = check_bounds(p.product, p.model, p.fa);
  if (o.format == "json") {
    emit(o, {{"feature", p.feature.name}, {"ha", to_ha(p.product.ha)}, {"dot", to_dot(p.product.ha, "LSHA")},
             {"xf", b.xf}, {"warnings", p.warnings}});
  } else {
    emit_text(o, to_ha(p.product.ha) + "\n" + to_dot(p.product.ha, "LSHA"));
  }
  return kOk;
}

int run_reach(const Options& o) {
  auto p = problem(o);
  auto j = reach_report(p, reach_config(o));
  emit(o, j);
  return j["complete"].get<bool>() ? kOk : kIncomplete;
}

int run_corner(const Options& o) {
  auto p = problem(o);
  auto cfg = search_config(o);
  try {
    emit(o, corner_report(p, cfg, o.direct));
  } catch (const ResourceExhausted& e) {
    emit(o, {{"feature", p.feature.name}, {"error", "ResourceExhausted"}, {"message", e.what()}});
    return kIncomplete;
  }
  return kOk;
}

int run_sim(const Options& o) {
  auto p = problem(o);
  auto j = sim_report(p, o.runs, o.seed, sim_config(o));
  emit(o, j);
  return j["interrupted"].get<bool>() ? kIncomplete : kOk;
}

int run_compare(const Options& o) {
  auto p = problem(o);
  CompareConfig c;
  c.reach = reach_config(o);
  c.search = search_config(o);
  c.direct = o.direct;
  c.runs = o.runs;
  c.seed = o.seed;
  c.sim = sim_config(o);
  auto j = compare_report(p, c);
  emit(o, j);
  if (j["corner"].contains("error") || !j["reach"]["complete"].get<bool>() || j["empirical"]["interrupted"].get<bool>())
    return kIncomplete;
  return kOk;
}

void on_sigint(int) { request_cancel(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature range analysis for hybrid automata"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* s, bool model, bool feature) {
    if (model) s->add_option("-m,--model", o.model, "model file (.ha)")->check(CLI::ExistingFile);
    if (feature) s->add_option("-f,--feature", o.feature, "feature file (.fia)")->check(CLI::ExistingFile);
    s->add_option("--param", o.params, "parameter binding NAME=VALUE");
    s->add_option("-o,--out", o.out, "output file");
    s->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
    s->add_flag("--no-hybridize", o.no_hybridize, "keep affine flows in the product");
  };
  auto add_horizon = [&](CLI::App* s) { s->add_option("--horizon", o.horizon, "time horizon")->required(); };

  auto* check = app.add_subcommand("check", "validate a model and/or feature");
  add_io(check, true, true);
  auto* fa = app.add_subcommand("fa", "emit the feature automaton");
  add_io(fa, false, true);
  auto* product = app.add_subcommand("product", "emit the level-sequenced product");
  add_io(product, true, true);
  auto* reach_cmd = app.add_subcommand("reach", "guaranteed feature range by reachability");
  add_io(reach_cmd, true, true);
  add_horizon(reach_cmd);
  reach_cmd->add_option("--max-states", o.max_states, "symbolic state cap");

  auto add_search = [&](CLI::App* s) {
    s->add_option("--hops", o.hops, "hop bound K");
    s->add_option("--step-size", o.step_size, "initial step M");
    s->add_option("--epsilon", o.epsilon, "bisection tolerance");
    s->add_flag("--direct", o.direct, "optimize each path directly");
    s->add_option("--max-paths", o.max_paths, "path enumeration cap");
    s->add_option("--max-work", o.max_work, "LP work budget for path enumeration");
  };
  auto add_sim = [&](CLI::App* s) {
    s->add_option("--runs", o.runs, "number of runs");
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--dt", o.dt, "integration step");
  };

  auto* corner = app.add_subcommand("corner", "corner values and witness traces");
  add_io(corner, true, true);
  add_horizon(corner);
  add_search(corner);
  auto* sim = app.add_subcommand("sim", "empirical range by simulation");
  add_io(sim, true, true);
  add_horizon(sim);
  add_sim(sim);
  auto* compare = app.add_subcommand("compare", "reach, corner and simulation side by side");
  add_io(compare, true, true);
  add_horizon(compare);
  add_search(compare);
  add_sim(compare);
  compare->add_option("--max-states", o.max_states, "symbolic state cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  std::signal(SIGINT, on_sigint);
  try {
    if (*check) return run_check(o);
    if (*fa) return run_fa(o);
    if (*product) return run_product(o);
    if (*reach_cmd) return run_reach(o);
    if (*corner) return run_corner(o);
    if (*sim) return run_sim(o);
    if (*compare) return run_compare(o);
  } catch (const ResourceExhausted& e) {
    std::cerr << e.what() << "\n";
    return kIncomplete;
  } catch (const BoundViolation& e) {
    std::cerr << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
