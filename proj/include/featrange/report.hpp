#pragma once

#include "featrange/corner.hpp"
#include "featrange/reach.hpp"
#include "featrange/sim.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace featrange {

// A model, a grounded feature and their product.
struct Problem {
  HybridAutomaton model;
  FeatureDecl feature;
  FeatureAutomaton fa;
  Lsha product;
  std::vector<std::string> warnings;
};

Problem make_problem(const HybridAutomaton& h, const FeatureDecl& f, const std::map<std::string, Rational>& bindings,
                     const LshaOptions& opt = {});
Problem load_problem(const std::string& model_path, const std::string& feature_path,
                     const std::map<std::string, Rational>& bindings, const LshaOptions& opt = {});

nlohmann::json number_json(const Rational& r);  // {"decimal", "exact"}
nlohmann::json witness_json(const Lsha& l, const Witness& w);

nlohmann::json reach_report(const Problem& p, const ReachConfig& cfg);
// Throws ResourceExhausted from the oracle.
nlohmann::json corner_report(const Problem& p, const SearchConfig& cfg, bool direct);
nlohmann::json sim_report(const Problem& p, size_t runs, uint64_t seed, const SimConfig& cfg);

struct CompareConfig {
  ReachConfig reach;
  SearchConfig search;
  bool direct = false;
  size_t runs = 100;
  uint64_t seed = 1;
  SimConfig sim;
  double sample_tol = 1e-9;  // scaled by max(1, |bound|)
};

// reach, corner and empirical ranges plus the containment verdicts
nlohmann::json compare_report(const Problem& p, const CompareConfig& cfg);

}  // namespace featrange
