#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mechkernel/feasible_priors.hpp"
#include "mechkernel/kernel_algebra.hpp"
#include "mechkernel/matrix.hpp"

namespace mechkernel {

// Direct mechanisms (outcome kernels over a shared outcome space) the
// designer's choice is tested against.
struct CompetitorFamily {
  std::vector<StochasticKernel> members;
  std::string provenance = "user-supplied";  // or "domain-generated"
};

// Exact expectation of the designer's payoff under belief pi.
Rational designer_value(const StochasticKernel& delta, const Prior& pi, const Matrix& u0);

// A justifying belief in the polytope under which delta weakly beats every
// family member, or nullopt when none exists.
std::optional<Prior> is_self_confirming(const StochasticKernel& delta,
                                        const PriorPolytope& polytope,
                                        const CompetitorFamily& family, const Matrix& u0,
                                        std::size_t solver_cap = kDefaultSolverCap);

Rational maxmin_value(const StochasticKernel& delta, const PriorPolytope& polytope,
                      const Matrix& u0, std::size_t solver_cap = kDefaultSolverCap);

enum class RobustStatus { Robust, NotRobust, Inconclusive };

struct FailingGrain {
  Rational epsilon;
  std::vector<std::vector<std::size_t>> agent_atoms;  // the grain set A
};

struct RobustVerdict {
  RobustStatus status = RobustStatus::Inconclusive;
  Rational level = 0;                   // largest fully verified passing epsilon
  std::optional<Prior> witness_belief;  // justifying belief for the unrestricted polytope
  std::optional<FailingGrain> failing_grain;
  bool incomplete = false;  // some epsilon level hit the grain budget
  std::size_t grains_examined = 0;
};

inline constexpr std::size_t kDefaultGrainBudget = 100000;

// Default schedule: powers of 1/2 down through the first power at or below
// the smallest positive atom of pi0.
std::vector<Rational> default_epsilon_schedule(const Prior& pi0);

// For each epsilon (descending), enumerates grain sets A with
// pi0^i(A^i) < epsilon per agent, in |A|-ascending then lexicographic order,
// and checks is_self_confirming on every restricted polytope. The first fully
// verified epsilon yields Robust; a failing grain set is a NotRobust witness
// at that level; hitting the budget leaves the level inconclusive.
RobustVerdict is_robustly_self_confirming(
    const StochasticKernel& delta, const StochasticKernel& base_kernel, const Prior& pi0,
    const CompetitorFamily& family, const Matrix& u0,
    std::vector<Rational> epsilon_schedule = {}, std::size_t grain_budget = kDefaultGrainBudget,
    std::vector<std::size_t> agent_sizes = {}, std::size_t solver_cap = kDefaultSolverCap);

}  // namespace mechkernel
