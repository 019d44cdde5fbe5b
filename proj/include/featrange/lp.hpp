#pragma once

#include "featrange/linear.hpp"

#include <vector>

namespace featrange {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;          // objective value when Optimal
  std::vector<Rational> x; // a feasible point (a vertex when one exists)
};

// Exact two-phase simplex over free variables x ∈ Q^n.
// With obj == nullptr only feasibility is decided.
LpResult lp_solve(size_t n, const std::vector<LinCon>& cons, const std::vector<Rational>* obj,
                  bool maximize = true);

inline LpResult lp_feasible(size_t n, const std::vector<LinCon>& cons) {
  return lp_solve(n, cons, nullptr);
}

}  // namespace featrange
