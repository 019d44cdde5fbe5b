#pragma once

#include "featrange/lsha.hpp"

#include <optional>
#include <string>
#include <vector>

namespace featrange {

struct SymbolicState {
  size_t loc = 0;
  Polyhedron region;
};

struct ReachConfig {
  Rational time_horizon;         // cap on the global clock; required
  size_t max_symstates = 20000;  // safety valve
};

struct ReachResult {
  std::vector<SymbolicState> states;
  std::vector<size_t> feature_states;  // indices into states, all at the final location
  size_t f_var = 0;
  bool fixpoint_reached = false;
  bool horizon_hit = false;
  bool exhausted = false;  // max_symstates fired; min/max claims are not sound
  bool hybridized = false;
  size_t iterations = 0;

  bool complete() const { return fixpoint_reached && !exhausted; }
};

// Time successors of `region` under rectangular rates, kept inside `inv`.
// budget = nullopt lets time run unbounded.
Polyhedron time_elapse(const Polyhedron& region, const std::vector<Flow>& rates, const Polyhedron& inv,
                       const std::optional<Rational>& budget);

// Jump along `e`; nullopt when the guard or target invariant cannot be met.
std::optional<SymbolicState> discrete_post(const HybridAutomaton& h, const SymbolicState& s, const Edge& e);

// Per location, the variables that no future invariant, guard or reset reads
// before overwriting them. `observed` variables are never dead.
std::vector<std::vector<bool>> dead_variables(const HybridAutomaton& h, const std::vector<size_t>& observed);

// Worklist reachability with `clock` capped at cfg.time_horizon in every location.
// With `observed` set, dead variables are projected out on entry to each location.
ReachResult reach(const HybridAutomaton& h, size_t clock, const ReachConfig& cfg,
                  const std::optional<std::vector<size_t>>& observed = std::nullopt);
ReachResult reach(const Lsha& l, const ReachConfig& cfg);

struct FeatureRange {
  Rational min, max;
  bool partial = false;  // horizon or state cap hit
  std::vector<std::string> warnings;
};

// Interval hull of F over the final-location states; nullopt is NoMatch.
std::optional<FeatureRange> feature_range(const ReachResult& r);

}  // namespace featrange
