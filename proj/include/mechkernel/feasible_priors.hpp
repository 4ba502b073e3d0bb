#pragma once

#include <cstddef>
#include <vector>

#include "mechkernel/kernel_algebra.hpp"
#include "mechkernel/linprog.hpp"
#include "mechkernel/matrix.hpp"
#include "mechkernel/revelation.hpp"

namespace mechkernel {

// Pins one agent's marginal on a set of that agent's types: for each listed
// atom, sum of pi over joint types with matching component equals the pinned
// value.
struct AgreementConstraint {
  std::size_t agent = 0;
  std::vector<std::size_t> atoms;  // type indices within Theta^i, ascending
  RatVec pins;                     // pinned marginal values, aligned with atoms
};

// {pi in Delta(Theta) : K pi = b, marginal pins hold}. The generating prior
// pi0 is kept as the nonemptiness witness; b = K pi0 by construction.
struct PriorPolytope {
  std::vector<std::string> ambient_labels;
  std::vector<std::size_t> agent_sizes;  // product structure of Theta; {n} when single-agent
  Matrix equality_matrix;
  RatVec rhs;
  std::vector<AgreementConstraint> agreements;
  Prior pi0;

  std::size_t ambient() const { return ambient_labels.size(); }
  // All equality rows (kernel rows then pin rows, in declaration order)
  // stacked into one system; excludes the simplex constraints.
  Matrix all_equalities(RatVec& rhs_out) const;
  // Full LP constraint set: equalities plus the sum-to-1 row.
  std::vector<LpConstraint> lp_constraints() const;
};

struct GrainSet {
  std::vector<std::vector<std::size_t>> agent_atoms;  // A^i as type indices, ascending
  Rational epsilon;
};

struct VertexSet {
  std::vector<Prior> vertices;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultAmbientCap = 20;
inline constexpr std::size_t kDefaultVertexCap = 10000;

PriorPolytope feasible_set(const StochasticKernel& k, const Prior& pi0,
                           std::vector<std::size_t> agent_sizes = {});

// Marginal of a joint prior for one agent under the given product structure.
RatVec marginal(const RatVec& joint, const std::vector<std::size_t>& agent_sizes,
                std::size_t agent);

PriorPolytope restrict_grain(const PriorPolytope& p, const GrainSet& grain, const Prior& pi0);

// Lemma-style perturbed filter: types in A^i are revealed alongside a default
// signal; all other types pass through the original filter. The feasible set
// of the result equals restrict_grain of the input's feasible set.
FictitiousDirect build_grain_filter(const FictitiousDirect& fd, const GrainSet& grain,
                                    const Prior& pi0);

bool membership(const PriorPolytope& p, const Prior& pi);

VertexSet vertices(const PriorPolytope& p, std::size_t cap = kDefaultVertexCap,
                   std::size_t ambient_cap = kDefaultAmbientCap);

// Affine dimension: coordinates identically zero on the polytope are found by
// per-coordinate maximization, then the dimension is ambient minus the rank
// of the equalities plus those forced-zero rows.
std::size_t dimension(const PriorPolytope& p, std::size_t solver_cap = kDefaultSolverCap);

}  // namespace mechkernel
