#pragma once

#include "featrange/lsha.hpp"
#include "featrange/trace.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace featrange {

// Constraint on the feature value at the final location.
struct Goal {
  enum class Kind { Lt, Ge, Between };
  Kind kind = Kind::Ge;
  Rational c, l, r;

  static Goal lt(const Rational& c);
  static Goal ge(const Rational& c);
  static Goal between(const Rational& l, const Rational& r);
  bool admits(const Rational& v) const;
  std::string to_string() const;
};

struct SearchConfig {
  Rational M = Rational(1, 1000000);
  Rational epsilon = Rational(1, 1000000);
  size_t K = 15;
  Rational horizon;
  size_t max_paths = 100000;  // DFS node cap per table build
  // cap on Σ rows·columns over the prefix emptiness checks
  size_t max_work = 10000000;
};

struct Witness {
  Rational value;
  std::vector<size_t> path;  // product edge ids
  std::vector<size_t> locs;  // path.size() + 1 visited locations
  std::vector<Rational> dwell;
  std::vector<std::vector<Rational>> entry, exit;
  bool boundary_degenerate = false;  // sits on the closure of a strict constraint

  Trace trace(const Lsha& l) const;
};

// Bounded-hop feasibility over the product. Paths are enumerated once in
// lexicographic edge-id order and cached with their feature interval.
class CornerOracle {
 public:
  CornerOracle(const Lsha& l, SearchConfig cfg);
  ~CornerOracle();
  CornerOracle(CornerOracle&&) noexcept;

  std::optional<Witness> query(const Goal& g);
  // exact optimum over all enumerated paths
  std::optional<Witness> extreme(bool maximize);

  const SearchConfig& config() const { return cfg_; }
  const std::vector<Goal>& goals() const { return goals_; }
  size_t path_count();
  size_t nodes_explored();
  size_t work_done();

 private:
  struct Table;
  void ensure();

  const Lsha& l_;
  SearchConfig cfg_;
  std::vector<Goal> goals_;
  std::unique_ptr<Table> table_;
};

std::optional<Witness> oracle(const Lsha& l, const Goal& g, const SearchConfig& cfg);

enum class Dir { Min, Max };

Witness expand(CornerOracle& o, const Rational& f, Witness T, Dir dir);
Witness ets(CornerOracle& o, Rational lo, Rational hi, const Rational& f, Witness T, Dir dir);

struct CornerResult {
  Witness min, max;
};

// Pivot on F < 0 / F >= 0, then expand both ways. nullopt is NoMatch.
std::optional<CornerResult> search_range(CornerOracle& o);
std::optional<CornerResult> search_range_direct(CornerOracle& o);

// Exact check of a witness against the product; returns the first problem found.
std::optional<std::string> replay_witness(const Lsha& l, const Witness& w, const Rational& horizon);

}  // namespace featrange
