#pragma once

#include "featrange/fa.hpp"
#include "featrange/ha.hpp"

#include <string>
#include <vector>

namespace featrange {

struct LshaLocInfo {
  enum class Kind { Cell, Pause, Final };
  enum class Role { Plain, Match, Rest, Below, Above };
  Kind kind = Kind::Cell;
  Role role = Role::Plain;
  size_t ha_loc = 0;  // owning HA location (pause: where the chain returns)
  size_t level = 0;
  size_t step = 0;    // pause: sub-expression index
  size_t hop = 0;     // pause: position in the chain
};

struct LshaEdgeInfo {
  enum class Kind { Ha, Advance, Boundary, Chain, Stutter };
  Kind kind = Kind::Ha;
  size_t level = 0;
  long ha_edge = -1;  // source HA edge for Ha and location-entry Advance edges
};

struct LshaOptions {
  bool hybridize = true;  // affine cells are replaced by rate intervals
};

struct Lsha {
  HybridAutomaton ha;  // over X_F = X_H, locals, F, t, lt, level
  std::vector<LshaLocInfo> loc_info;
  std::vector<LshaEdgeInfo> edge_info;
  size_t final_loc = 0;
  size_t n_ha_vars = 0;
  size_t f_var = 0, t_var = 0, lt_var = 0, level_var = 0;
  std::vector<size_t> local_vars;
  size_t levels = 0;  // n
  bool hybridized = false;
  std::vector<std::string> warnings;

  bool is_pause(size_t loc) const { return loc_info[loc].kind != LshaLocInfo::Kind::Cell; }
};

Lsha build_lsha(const HybridAutomaton& h, const FeatureAutomaton& fa, const LshaOptions& opt = {});

struct BoundsReport {
  size_t xf = 0, xh = 0, v = 0, c = 0;
  size_t k = 0, base_locations = 0;
  size_t pause = 0, pause_bound = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Structural bounds of the product; throws BoundViolation when one fails.
BoundsReport check_bounds(const Lsha& l, const HybridAutomaton& h, const FeatureAutomaton& fa);

}  // namespace featrange
