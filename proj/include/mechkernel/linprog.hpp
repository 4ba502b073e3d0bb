#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mechkernel/rational.hpp"

namespace mechkernel {

enum class LpSense { Le, Ge, Eq };

struct LpConstraint {
  RatVec coeffs;
  LpSense sense = LpSense::Eq;
  Rational rhs = 0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVec solution;      // decision-variable values when Optimal
  Rational objective;   // objective value when Optimal
};

inline constexpr std::size_t kDefaultSolverCap = 10000;

// Minimizes objective·x subject to the constraints and x >= 0, using an exact
// two-phase tableau simplex with Bland's rule. Throws CapExceeded when the
// total variable count (decision + slack + artificial) exceeds var_cap.
LpResult solve_lp(const RatVec& objective, const std::vector<LpConstraint>& constraints,
                  std::size_t var_cap = kDefaultSolverCap);

// Feasibility check with witness: returns a point satisfying all constraints
// with x >= 0, or nullopt when the system is infeasible.
std::optional<RatVec> find_feasible(std::size_t num_vars,
                                    const std::vector<LpConstraint>& constraints,
                                    std::size_t var_cap = kDefaultSolverCap);

}  // namespace mechkernel
