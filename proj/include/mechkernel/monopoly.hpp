#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "mechkernel/feasible_priors.hpp"
#include "mechkernel/kernel_algebra.hpp"
#include "mechkernel/rational.hpp"
#include "mechkernel/revelation.hpp"
#include "mechkernel/self_confirming.hpp"

namespace mechkernel {

// Posted-price monopoly on a finite value grid: buyer value theta in grid,
// true prior pi0, and a (possibly randomized) price distribution over grid
// points.
struct MonopolyInstance {
  RatVec grid;        // strictly increasing values in [0,1]
  Prior pi0;          // over grid, labels match grid values
  RatVec price_pmf;   // p-tilde, aligned with grid

  MonopolyInstance(RatVec grid, RatVec pi0_atoms, RatVec price_pmf);

  std::size_t size() const { return grid.size(); }
  std::vector<std::size_t> support() const;  // indices with positive price mass
  std::size_t grid_index(const Rational& p) const;  // throws when p is off-grid
};

// pi([p,1]) at each support price of p-tilde.
struct TailProfile {
  std::vector<Rational> prices;
  RatVec tails;
};

std::vector<std::string> grid_labels(const RatVec& grid);

// Two-outcome posted-price mechanism: trade at p when theta >= p
// (tie-breaking favors trade), no trade otherwise.
StochasticKernel posted_price_kernel(const MonopolyInstance& inst, const Rational& p);

// Randomized-price mechanism over the shared outcome space
// {trade at p : p in grid} + {no trade}; also the seller's observation
// kernel, so its feasible set is the tail polytope.
StochasticKernel randomized_price_kernel(const MonopolyInstance& inst);

// Pure price embedded in the shared outcome space, for family comparisons.
StochasticKernel posted_price_full_outcomes(const MonopolyInstance& inst, const Rational& p);

Rational revenue(const MonopolyInstance& inst, const Rational& p, const Prior& pi);

TailProfile tail_profile(const MonopolyInstance& inst, const Prior& pi);

// {pi on grid : pi([p,1]) = pi0([p,1]) for every support price}.
PriorPolytope feasible_tail_polytope(const MonopolyInstance& inst);

// Grid prices whose revenue under pi weakly dominates both neighbors
// (one-sided at the boundary); ties count.
std::vector<Rational> local_maximizers(const MonopolyInstance& inst, const Prior& pi);

struct CharacterizationVerdict {
  bool cond_equal_revenue = false;  // (i) all support prices earn the same revenue under pi0
  bool cond_local_max = false;      // (ii) all support prices are local maximizers under pi0
  bool holds() const { return cond_equal_revenue && cond_local_max; }
};

CharacterizationVerdict check_characterization(const MonopolyInstance& inst);

enum class OracleStatus { True, False, Inconclusive };

struct OracleVerdict {
  OracleStatus status = OracleStatus::Inconclusive;
  Rational epsilon = 0;
  std::vector<std::size_t> witness;     // minimal failing grain set (grid indices)
  std::optional<Prior> justifying;      // belief for the empty grain when True
  std::size_t sets_examined = 0;
};

inline constexpr std::size_t kDefaultGrainCap = 100000;

// Brute-force robustness oracle: enumerates grain sets A subset of grid with
// pi0(A) < epsilon (size-ascending, then lexicographic) and solves exact
// feasibility for a belief in the restricted tail polytope under which every
// support price is weakly revenue-best among all grid prices. False with the
// minimal witness when some restriction kills all justifying beliefs;
// Inconclusive when the cap is hit first.
OracleVerdict oracle_robust_sc(const MonopolyInstance& inst, const Rational& epsilon,
                               std::size_t grain_cap = kDefaultGrainCap,
                               std::size_t solver_cap = kDefaultSolverCap);

// Lemma-style tail comparison: pi([p,1]) >= pi0([p,1]) at every support
// price. Requires pi to be feasible.
bool equal_tail_check(const MonopolyInstance& inst, const Prior& pi);

// Single-agent game over the shared outcome space: buyer utility
// theta - p on trade, designer utility p.
std::shared_ptr<const GameInstance> monopoly_game(const MonopolyInstance& inst);

// All pure grid prices as competitors in the shared outcome space.
CompetitorFamily monopoly_family(const MonopolyInstance& inst);

}  // namespace mechkernel
