#pragma once

#include "featrange/fia.hpp"
#include "featrange/ha.hpp"
#include "featrange/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace featrange {

struct SimConfig {
  enum class Rates { Uniform, FixedMin, FixedMax };
  double dt = 1e-3;
  double horizon = 1;
  Rates rates = Rates::Uniform;
  double p_take = 0.5;  // chance per sample of taking an enabled edge
  double tol = 1e-9;
  bool dense = true;    // keep per-dt samples
  size_t max_jumps = 100000;
};

// One random run of `h`; a stuck run is truncated and flagged.
Trace simulate(const HybridAutomaton& h, uint64_t seed, const SimConfig& cfg);

struct MatchRecord {
  std::vector<double> times;   // instant of each sub-expression match
  std::vector<size_t> steps;   // trace step holding each instant
  std::map<std::string, double> locals;
  double value = 0;
};

// First-match region monitor. `consts` resolves identifiers that are model parameters.
std::vector<MatchRecord> monitor(const Trace& tr, const FeatureDecl& grounded,
                                 const std::map<std::string, Rational>& consts = {}, double tol = 1e-9);

struct Empirical {
  std::optional<double> min, max;
  std::vector<double> samples;
  size_t runs = 0, matched_runs = 0, stuck_runs = 0;
  bool interrupted = false;
};

// Under-approximation of the feature range from `runs` random simulations.
// Worker count honours FEATRANGE_THREADS.
Empirical sample_feature(const HybridAutomaton& h, const FeatureDecl& grounded, size_t runs, uint64_t seed,
                         const SimConfig& cfg);

size_t worker_count();

}  // namespace featrange
