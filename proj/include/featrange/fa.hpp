#pragma once

#include "featrange/fia.hpp"

#include <optional>
#include <string>
#include <vector>

namespace featrange {

// Reserved timer names inside the feature automaton.
inline constexpr const char* kTimer = "t";
inline constexpr const char* kLocTimer = "lt";

struct FaLocation {
  enum class Kind { Main, Pause, Final };
  Kind kind = Kind::Main;
  std::string name;
  size_t step = 0;   // q_{step+1} for Main; owning sub-expression for Pause
  size_t hop = 0;    // position in the reset chain for Pause (1-based)
  bool in_z = false;
};

struct FaEdge {
  size_t src = 0, dst = 0;
  std::optional<size_t> sub;    // guarded by s_{sub+1}; absent means true
  std::optional<size_t> delay;  // timing guard lt ∈ τ_{delay+1}
  Assign reset;                 // exactly one ordered reset per hop
};

struct FeatureAutomaton {
  FeatureDecl decl;  // grounded
  std::vector<FaLocation> locs;
  std::vector<FaEdge> edges;
  size_t final_loc = 0;
  // 𝓐_i with lt := 0 prepended
  std::vector<std::vector<Assign>> resets;

  size_t n() const { return decl.seq.size(); }
  // V = locals ∪ {F_name}
  std::vector<std::string> value_vars() const;
  // C = {t, lt}
  static std::vector<std::string> timers() { return {kTimer, kLocTimer}; }
  size_t pause_count() const;
  size_t max_reset_len() const;
  // Edge leaving q_{i+1} that checks s_{i+1}.
  size_t advance_edge(size_t i) const;
};

FeatureAutomaton build_feature_automaton(const FeatureDecl& grounded);

// d/dt of `var` at location `loc`: timers run outside Z, everything else is constant.
Rational timer_rate(const FeatureAutomaton& fa, size_t loc, const std::string& var);

std::string to_text(const FeatureAutomaton& fa);
std::string to_dot(const FeatureAutomaton& fa);

}  // namespace featrange
