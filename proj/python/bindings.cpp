// Python module: problems built from files or text, reports returned as JSON strings.

#include "featrange/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace featrange;

namespace {

Rational num(const std::string& text) {
  auto r = parse_rational(text);
  if (!r) throw ValidationError("not a number: " + text);
  return *r;
}

std::map<std::string, Rational> bindings(const std::map<std::string, std::string>& params) {
  std::map<std::string, Rational> b;
  for (const auto& [k, v] : params) b[k] = num(v);
  return b;
}

LshaOptions options(bool hybridize) {
  LshaOptions o;
  o.hybridize = hybridize;
  return o;
}

ReachConfig reach_config(const std::string& horizon, size_t max_states) {
  ReachConfig c;
  c.time_horizon = num(horizon);
  c.max_symstates = max_states;
  return c;
}

SearchConfig search_config(const std::string& horizon, size_t hops, const std::string& step, const std::string& eps,
                           size_t max_paths, size_t max_work) {
  SearchConfig c;
  c.horizon = num(horizon);
  c.K = hops;
  c.M = num(step);
  c.epsilon = num(eps);
  c.max_paths = max_paths;
  c.max_work = max_work;
  return c;
}

SimConfig sim_config(const std::string& horizon, double dt) {
  SimConfig c;
  c.dt = dt;
  c.horizon = to_double(num(horizon));
  return c;
}

std::string bounds_json(const Problem& p) {
  auto b = check_bounds(p.product, p.model, p.fa);
  nlohmann::json j = {{"xf", b.xf},     {"xh", b.xh},       {"locals", b.v},
                      {"timers", b.c},  {"pause", b.pause}, {"pause_bound", b.pause_bound},
                      {"locations", p.product.ha.locations.size()}, {"edges", p.product.ha.edges.size()}};
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "feature range analysis for hybrid automata";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SyntaxError>(m, "SyntaxError", base.ptr());
  py::register_exception<ResourceExhausted>(m, "ResourceExhausted", base.ptr());

  py::class_<Problem>(m, "Problem")
      .def_static(
          "from_files",
          [](const std::string& model, const std::string& feature, const std::map<std::string, std::string>& params,
             bool hybridize) { return load_problem(model, feature, bindings(params), options(hybridize)); },
          py::arg("model"), py::arg("feature"), py::arg("params") = std::map<std::string, std::string>{},
          py::arg("hybridize") = true)
      .def_static(
          "from_text",
          [](const std::string& model, const std::string& feature, const std::map<std::string, std::string>& params,
             bool hybridize) {
            return make_problem(parse_model(model), parse_feature(feature), bindings(params), options(hybridize));
          },
          py::arg("model"), py::arg("feature"), py::arg("params") = std::map<std::string, std::string>{},
          py::arg("hybridize") = true)
      .def_property_readonly("feature_name", [](const Problem& p) { return p.feature.name; })
      .def_property_readonly("warnings", [](const Problem& p) { return p.warnings; })
      .def("bounds", &bounds_json)
      .def("product_text", [](const Problem& p) { return to_ha(p.product.ha); })
      .def(
          "reach",
          [](const Problem& p, const std::string& horizon, size_t max_states) {
            return reach_report(p, reach_config(horizon, max_states)).dump();
          },
          py::arg("horizon"), py::arg("max_states") = 20000, py::call_guard<py::gil_scoped_release>())
      .def(
          "corner",
          [](const Problem& p, const std::string& horizon, size_t hops, const std::string& step, const std::string& eps,
             bool direct, size_t max_paths, size_t max_work) {
            return corner_report(p, search_config(horizon, hops, step, eps, max_paths, max_work), direct).dump();
          },
          py::arg("horizon"), py::arg("hops") = 15, py::arg("step_size") = "1/1000000",
          py::arg("epsilon") = "1/1000000", py::arg("direct") = false, py::arg("max_paths") = 100000,
          py::arg("max_work") = 10000000, py::call_guard<py::gil_scoped_release>())
      .def(
          "sim",
          [](const Problem& p, const std::string& horizon, size_t runs, uint64_t seed, double dt) {
            return sim_report(p, runs, seed, sim_config(horizon, dt)).dump();
          },
          py::arg("horizon"), py::arg("runs") = 100, py::arg("seed") = 1, py::arg("dt") = 1e-3,
          py::call_guard<py::gil_scoped_release>())
      .def(
          "compare",
          [](const Problem& p, const std::string& horizon, size_t hops, const std::string& step, const std::string& eps,
             size_t runs, uint64_t seed, double dt, size_t max_states) {
            CompareConfig c;
            c.reach = reach_config(horizon, max_states);
            c.search = search_config(horizon, hops, step, eps, 100000, 10000000);
            c.runs = runs;
            c.seed = seed;
            c.sim = sim_config(horizon, dt);
            return compare_report(p, c).dump();
          },
          py::arg("horizon"), py::arg("hops") = 15, py::arg("step_size") = "1/1000000",
          py::arg("epsilon") = "1/1000000", py::arg("runs") = 100, py::arg("seed") = 1, py::arg("dt") = 1e-3,
          py::arg("max_states") = 20000, py::call_guard<py::gil_scoped_release>());

  m.def(
      "feature_automaton",
      [](const std::string& feature, const std::map<std::string, std::string>& params) {
        return to_text(build_feature_automaton(resolve_params(parse_feature(feature), bindings(params))));
      },
      py::arg("feature"), py::arg("params") = std::map<std::string, std::string>{});
}
