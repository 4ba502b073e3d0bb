#include "mechkernel/self_confirming.hpp"

#include <algorithm>
#include <utility>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

// Per-coordinate designer payoff of a direct mechanism: c(theta) =
// sum_o delta(o|theta) u0(o, theta).
RatVec value_coefficients(const StochasticKernel& delta, const Matrix& u0) {
  if (u0.rows() != delta.rows() || u0.cols() != delta.cols()) {
    throw DimensionMismatch("designer utility table does not match mechanism kernel");
  }
  RatVec c(delta.cols());
  for (std::size_t t = 0; t < delta.cols(); ++t) {
    for (std::size_t o = 0; o < delta.rows(); ++o) {
      if (delta.at(o, t) != 0) c[t] += delta.at(o, t) * u0.at(o, t);
    }
  }
  return c;
}

// All subsets of one agent's type space with pi0-mass strictly below epsilon,
// ordered by size then lexicographically.
std::vector<std::vector<std::size_t>> agent_grain_candidates(const RatVec& marginal_pi0,
                                                             const Rational& epsilon) {
  const std::size_t n = marginal_pi0.size();
  std::vector<std::vector<std::size_t>> out;
  if (n >= 24) throw CapExceeded("grain enumeration: agent type space too large");
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    Rational mass = 0;
    std::vector<std::size_t> atoms;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t(1) << i)) {
        mass += marginal_pi0[i];
        atoms.push_back(i);
      }
    }
    if (mass < epsilon) out.push_back(std::move(atoms));
  }
  std::sort(out.begin(), out.end(),
            [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return out;
}

std::size_t total_atoms(const std::vector<std::vector<std::size_t>>& grain) {
  std::size_t total = 0;
  for (const auto& g : grain) total += g.size();
  return total;
}

}  // namespace

Rational designer_value(const StochasticKernel& delta, const Prior& pi, const Matrix& u0) {
  if (pi.size() != delta.cols()) {
    throw DimensionMismatch("designer_value: prior does not match mechanism domain");
  }
  const RatVec c = value_coefficients(delta, u0);
  Rational v = 0;
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (pi.atoms[t] != 0) v += pi.atoms[t] * c[t];
  }
  return v;
}

std::optional<Prior> is_self_confirming(const StochasticKernel& delta,
                                        const PriorPolytope& polytope,
                                        const CompetitorFamily& family, const Matrix& u0,
                                        std::size_t solver_cap) {
  if (delta.cols() != polytope.ambient()) {
    throw DimensionMismatch("is_self_confirming: mechanism domain does not match polytope");
  }
  const RatVec own = value_coefficients(delta, u0);
  std::vector<LpConstraint> constraints = polytope.lp_constraints();
  for (const StochasticKernel& rival : family.members) {
    if (rival.rows() != delta.rows() || rival.cols() != delta.cols()) {
      throw DimensionMismatch("is_self_confirming: family member shape differs from delta");
    }
    const RatVec theirs = value_coefficients(rival, u0);
    LpConstraint c;
    c.coeffs.resize(own.size());
    for (std::size_t t = 0; t < own.size(); ++t) c.coeffs[t] = own[t] - theirs[t];
    c.sense = LpSense::Ge;
    c.rhs = 0;
    constraints.push_back(std::move(c));
  }
  const std::optional<RatVec> sol =
      find_feasible(polytope.ambient(), constraints, solver_cap);
  if (!sol) return std::nullopt;
  return Prior(polytope.ambient_labels, *sol);
}

Rational maxmin_value(const StochasticKernel& delta, const PriorPolytope& polytope,
                      const Matrix& u0, std::size_t solver_cap) {
  if (delta.cols() != polytope.ambient()) {
    throw DimensionMismatch("maxmin_value: mechanism domain does not match polytope");
  }
  const LpResult r =
      solve_lp(value_coefficients(delta, u0), polytope.lp_constraints(), solver_cap);
  if (r.status != LpStatus::Optimal) {
    throw InvalidInput("maxmin_value: polytope is empty");
  }
  return r.objective;
}

std::vector<Rational> default_epsilon_schedule(const Prior& pi0) {
  Rational smallest = 1;
  for (const Rational& a : pi0.atoms) {
    if (a > 0 && a < smallest) smallest = a;
  }
  std::vector<Rational> schedule;
  Rational eps(1, 2);
  for (;;) {
    schedule.push_back(eps);
    if (eps <= smallest) break;
    eps /= 2;
  }
  return schedule;
}

RobustVerdict is_robustly_self_confirming(const StochasticKernel& delta,
                                          const StochasticKernel& base_kernel, const Prior& pi0,
                                          const CompetitorFamily& family, const Matrix& u0,
                                          std::vector<Rational> epsilon_schedule,
                                          std::size_t grain_budget,
                                          std::vector<std::size_t> agent_sizes,
                                          std::size_t solver_cap) {
  if (epsilon_schedule.empty()) epsilon_schedule = default_epsilon_schedule(pi0);
  std::sort(epsilon_schedule.begin(), epsilon_schedule.end(), std::greater<>());
  epsilon_schedule.erase(std::unique(epsilon_schedule.begin(), epsilon_schedule.end()),
                         epsilon_schedule.end());
  if (agent_sizes.empty()) agent_sizes = {pi0.size()};

  const PriorPolytope base = feasible_set(base_kernel, pi0, agent_sizes);
  std::vector<RatVec> marginals;
  for (std::size_t i = 0; i < agent_sizes.size(); ++i) {
    marginals.push_back(marginal(pi0.atoms, agent_sizes, i));
  }

  RobustVerdict verdict;
  bool last_level_failed = false;
  bool last_level_capped = false;

  for (const Rational& eps : epsilon_schedule) {
    if (eps <= 0) throw InvalidInput("epsilon schedule entries must be positive");
    std::vector<std::vector<std::vector<std::size_t>>> per_agent;
    std::size_t combos = 1;
    for (const RatVec& m : marginals) {
      per_agent.push_back(agent_grain_candidates(m, eps));
      combos *= per_agent.back().size();
    }
    if (combos > 2000000) {
      verdict.incomplete = true;
      last_level_failed = false;
      last_level_capped = true;
      continue;
    }

    std::vector<std::vector<std::vector<std::size_t>>> grains;
    grains.reserve(combos);
    std::vector<std::size_t> pick(per_agent.size(), 0);
    for (;;) {
      std::vector<std::vector<std::size_t>> g;
      for (std::size_t i = 0; i < per_agent.size(); ++i) g.push_back(per_agent[i][pick[i]]);
      grains.push_back(std::move(g));
      std::size_t pos = per_agent.size();
      bool done = true;
      while (pos-- > 0) {
        if (++pick[pos] < per_agent[pos].size()) {
          done = false;
          break;
        }
        pick[pos] = 0;
      }
      if (done) break;
    }
    std::sort(grains.begin(), grains.end(),
              [](const auto& a, const auto& b) {
                const std::size_t ta = total_atoms(a);
                const std::size_t tb = total_atoms(b);
                if (ta != tb) return ta < tb;
                return a < b;
              });

    last_level_failed = false;
    last_level_capped = false;
    std::optional<Prior> unrestricted_witness;
    for (const auto& atoms : grains) {
      if (verdict.grains_examined >= grain_budget) {
        last_level_capped = true;
        verdict.incomplete = true;
        break;
      }
      ++verdict.grains_examined;
      const GrainSet grain{atoms, eps};
      const PriorPolytope restricted = restrict_grain(base, grain, pi0);
      const std::optional<Prior> witness =
          is_self_confirming(delta, restricted, family, u0, solver_cap);
      if (!witness) {
        verdict.failing_grain = FailingGrain{eps, atoms};
        last_level_failed = true;
        break;
      }
      if (total_atoms(atoms) == 0) unrestricted_witness = witness;
    }
    if (!last_level_failed && !last_level_capped) {
      verdict.status = RobustStatus::Robust;
      verdict.level = eps;
      verdict.witness_belief = std::move(unrestricted_witness);
      return verdict;
    }
  }

  if (last_level_failed) {
    verdict.status = RobustStatus::NotRobust;
  } else {
    verdict.status = RobustStatus::Inconclusive;
    verdict.incomplete = true;
  }
  return verdict;
}

}  // namespace mechkernel
