#include "featrange/trace.hpp"

namespace featrange {

nlohmann::json to_json(const Trace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps) {
    nlohmann::json j = {{"loc", s.loc}, {"t_entry", s.t_entry}, {"dwell", s.dwell}, {"entry", s.entry},
                        {"exit", s.exit}};
    j["edge"] = s.edge ? nlohmann::json(s.edge_label.empty() ? "e" + std::to_string(*s.edge) : s.edge_label)
                       : nlohmann::json(nullptr);
    if (s.edge) j["edge_id"] = *s.edge;
    steps.push_back(std::move(j));
  }
  nlohmann::json out = {{"vars", t.vars}, {"steps", steps}};
  if (!t.samples.empty()) {
    nlohmann::json sm = nlohmann::json::array();
    for (const auto& s : t.samples) sm.push_back({{"t", s.t}, {"step", s.step}, {"x", s.x}});
    out["samples"] = std::move(sm);
  }
  if (t.stuck) out["stuck"] = true;
  return out;
}

Trace trace_from_json(const nlohmann::json& j) {
  Trace t;
  if (j.contains("vars")) t.vars = j.at("vars").get<std::vector<std::string>>();
  for (const auto& s : j.at("steps")) {
    TraceStep st;
    st.loc = s.at("loc").get<std::string>();
    st.t_entry = s.at("t_entry").get<double>();
    st.dwell = s.at("dwell").get<double>();
    st.entry = s.at("entry").get<std::vector<double>>();
    st.exit = s.at("exit").get<std::vector<double>>();
    if (!s.at("edge").is_null()) st.edge_label = s.at("edge").get<std::string>();
    if (s.contains("edge_id")) st.edge = s.at("edge_id").get<size_t>();
    t.steps.push_back(std::move(st));
  }
  if (j.contains("samples"))
    for (const auto& s : j.at("samples"))
      t.samples.push_back({s.at("t").get<double>(), s.at("step").get<size_t>(), s.at("x").get<std::vector<double>>()});
  t.stuck = j.value("stuck", false);
  return t;
}

}  // namespace featrange
