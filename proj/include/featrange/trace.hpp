#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace featrange {

struct TraceStep {
  std::string loc;
  size_t loc_id = 0;
  double t_entry = 0, dwell = 0;
  std::vector<double> entry, exit;
  std::optional<size_t> edge;  // edge taken when leaving; none on the last step
  std::string edge_label;
};

struct TraceSample {
  double t = 0;
  size_t step = 0;
  std::vector<double> x;
};

// One run: dwell segments joined by jumps, plus optional dense samples.
struct Trace {
  std::vector<std::string> vars;
  std::vector<TraceStep> steps;
  std::vector<TraceSample> samples;
  bool stuck = false;
};

nlohmann::json to_json(const Trace& t);
Trace trace_from_json(const nlohmann::json& j);

}  // namespace featrange
