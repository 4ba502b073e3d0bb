#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mechkernel/kernel_algebra.hpp"
#include "mechkernel/matrix.hpp"

namespace mechkernel {

// Finite Bayesian implementation instance: labeled type spaces, message
// spaces, outcomes, and utility tables over O x Theta. Joint indices are
// mixed-radix with agent 0 most significant, matching kronecker_joint.
struct GameInstance {
  std::vector<std::vector<std::string>> type_spaces;
  std::vector<std::vector<std::string>> message_spaces;
  std::vector<std::string> outcome_space;
  std::vector<Matrix> agent_utilities;  // one |O| x prod|Theta^i| table per agent
  Matrix designer_utility;              // |O| x prod|Theta^i|

  GameInstance(std::vector<std::vector<std::string>> type_spaces,
               std::vector<std::vector<std::string>> message_spaces,
               std::vector<std::string> outcome_space,
               std::vector<Matrix> agent_utilities, Matrix designer_utility);

  std::size_t agent_count() const { return type_spaces.size(); }
  std::size_t joint_type_count() const;
  std::size_t joint_message_count() const;
  std::vector<std::string> joint_type_labels() const;
  std::vector<std::string> joint_message_labels() const;

  std::size_t joint_type_index(const std::vector<std::size_t>& per_agent) const;
  std::vector<std::size_t> unpack_type_index(std::size_t joint) const;
  std::size_t joint_message_index(const std::vector<std::size_t>& per_agent) const;
  std::vector<std::size_t> unpack_message_index(std::size_t joint) const;
};

// A mechanism together with the strategy profile played in it.
struct AugmentedMechanism {
  std::shared_ptr<const GameInstance> game;
  StochasticKernel outcome_kernel;          // rows O, cols joint M
  std::vector<StochasticKernel> strategies;  // per agent: rows M^i, cols Theta^i

  AugmentedMechanism(std::shared_ptr<const GameInstance> game,
                     StochasticKernel outcome_kernel,
                     std::vector<StochasticKernel> strategies);

  StochasticKernel joint_strategy() const;
  bool is_deterministic() const;
};

// Direct mechanism delta paired with per-agent information filters.
struct FictitiousDirect {
  std::shared_ptr<const GameInstance> game;
  StochasticKernel delta;                  // rows O, cols joint Theta
  std::vector<StochasticKernel> filters;   // per agent: cols Theta^i, rows signal set
  bool strong_filter = false;
  // Weak-filter certificate: strategies f with f^i kernel-equivalent to the
  // filter and omega.f = delta (present when built from a mechanism).
  std::optional<std::vector<StochasticKernel>> weak_certificate;

  StochasticKernel joint_filter() const;
};

struct Violation {
  std::size_t agent = 0;
  std::vector<std::size_t> type_profile;     // per-agent type indices
  // Full per-agent message profile with the deviating message in the agent's
  // slot; empty for ex post checks, where opponents mix sigma^{-i}(theta^{-i}).
  std::vector<std::size_t> message_profile;
  std::size_t deviation = 0;  // the profitable message for `agent`
};

inline constexpr std::size_t kViolationCap = 100;

struct EquilibriumReport {
  bool holds = true;
  std::vector<Violation> violations;  // first kViolationCap in enumeration order
  bool truncated = false;
};

StochasticKernel induced_allocation(const AugmentedMechanism& am);
EquilibriumReport is_dominant_strategy_eq(const AugmentedMechanism& am);
EquilibriumReport is_ex_post_eq(const AugmentedMechanism& am);

// Deterministic representation: each type maps to the lowest-index type
// sending the same message. Requires a deterministic mechanism.
FictitiousDirect represent_deterministic(const AugmentedMechanism& am);

// Weak revelation principle: per-agent square filters with ker Phi^i equal to
// ker Sigma^i, certificate f = sigma.
FictitiousDirect synthesize_weak_filter(const AugmentedMechanism& am);

bool check_equivalence(const AugmentedMechanism& am, const FictitiousDirect& fd);

enum class SearchOutcome { Found, ClassExhausted, BudgetExhausted };

struct StrongSearchResult {
  SearchOutcome outcome = SearchOutcome::ClassExhausted;
  std::optional<FictitiousDirect> witness;
  std::size_t candidates_tried = 0;
};

// Enumerates candidate square filters with entries k/d for denominators up to
// max_denominator (d = 1 is the deterministic class), in deterministic order,
// and returns the first candidate whose joint kernel matches ker Sigma and is
// Blackwell more informative than delta.
StrongSearchResult search_strong_representation(const AugmentedMechanism& am,
                                                std::size_t budget = 100000,
                                                unsigned max_denominator = 2,
                                                std::size_t solver_cap = kDefaultSolverCap);

}  // namespace mechkernel
