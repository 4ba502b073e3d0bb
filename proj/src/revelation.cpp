#include "mechkernel/revelation.hpp"

#include <algorithm>
#include <utility>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

std::size_t product_size(const std::vector<std::vector<std::string>>& spaces) {
  std::size_t total = 1;
  for (const auto& s : spaces) total *= s.size();
  return total;
}

std::vector<std::string> product_of(const std::vector<std::vector<std::string>>& spaces) {
  std::vector<std::string> labels = spaces.front();
  for (std::size_t i = 1; i < spaces.size(); ++i) {
    labels = product_labels(labels, spaces[i]);
  }
  return labels;
}

std::size_t pack_index(const std::vector<std::size_t>& per_agent,
                       const std::vector<std::vector<std::string>>& spaces) {
  if (per_agent.size() != spaces.size()) {
    throw DimensionMismatch("joint index: profile length does not match agent count");
  }
  std::size_t joint = 0;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    if (per_agent[i] >= spaces[i].size()) throw InvalidInput("joint index: component out of range");
    joint = joint * spaces[i].size() + per_agent[i];
  }
  return joint;
}

std::vector<std::size_t> unpack_index(std::size_t joint,
                                      const std::vector<std::vector<std::string>>& spaces) {
  std::vector<std::size_t> per_agent(spaces.size());
  for (std::size_t i = spaces.size(); i-- > 0;) {
    per_agent[i] = joint % spaces[i].size();
    joint /= spaces[i].size();
  }
  return per_agent;
}

// Expected utility of agent `i` at joint type `jt` when the joint message is
// `jm`: sum over outcomes of omega(o|jm) u^i(o, jt).
Rational message_value(const AugmentedMechanism& am, std::size_t agent, std::size_t jt,
                       std::size_t jm) {
  const Matrix& u = am.game->agent_utilities[agent];
  Rational v = 0;
  for (std::size_t o = 0; o < am.outcome_kernel.rows(); ++o) {
    if (am.outcome_kernel.at(o, jm) != 0) v += am.outcome_kernel.at(o, jm) * u.at(o, jt);
  }
  return v;
}

void record_violation(EquilibriumReport& report, Violation v) {
  report.holds = false;
  if (report.violations.size() < kViolationCap) {
    report.violations.push_back(std::move(v));
  } else {
    report.truncated = true;
  }
}

// All length-`parts` vectors of nonnegative integers summing to `total`, in
// lexicographic order.
std::vector<std::vector<unsigned>> compositions(unsigned total, std::size_t parts) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(parts, 0);
  auto rec = [&](auto&& self, std::size_t pos, unsigned remaining) -> void {
    if (pos + 1 == parts) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  if (parts > 0) rec(rec, 0, total);
  return out;
}

}  // namespace

GameInstance::GameInstance(std::vector<std::vector<std::string>> type_spaces_in,
                           std::vector<std::vector<std::string>> message_spaces_in,
                           std::vector<std::string> outcome_space_in,
                           std::vector<Matrix> agent_utilities_in, Matrix designer_utility_in)
    : type_spaces(std::move(type_spaces_in)),
      message_spaces(std::move(message_spaces_in)),
      outcome_space(std::move(outcome_space_in)),
      agent_utilities(std::move(agent_utilities_in)),
      designer_utility(std::move(designer_utility_in)) {
  if (type_spaces.empty()) throw InvalidInput("game: need at least one agent");
  if (message_spaces.size() != type_spaces.size()) {
    throw DimensionMismatch("game: message space count does not match agent count");
  }
  for (const auto& s : type_spaces) {
    if (s.empty()) throw InvalidInput("game: empty type space");
  }
  for (const auto& s : message_spaces) {
    if (s.empty()) throw InvalidInput("game: empty message space");
  }
  if (outcome_space.empty()) throw InvalidInput("game: empty outcome space");
  if (agent_utilities.size() != type_spaces.size()) {
    throw DimensionMismatch("game: utility table count does not match agent count");
  }
  const std::size_t jt = joint_type_count();
  for (const Matrix& u : agent_utilities) {
    if (u.rows() != outcome_space.size() || u.cols() != jt) {
      throw DimensionMismatch("game: agent utility table shape");
    }
  }
  if (designer_utility.rows() != outcome_space.size() || designer_utility.cols() != jt) {
    throw DimensionMismatch("game: designer utility table shape");
  }
}

std::size_t GameInstance::joint_type_count() const { return product_size(type_spaces); }
std::size_t GameInstance::joint_message_count() const { return product_size(message_spaces); }
std::vector<std::string> GameInstance::joint_type_labels() const { return product_of(type_spaces); }
std::vector<std::string> GameInstance::joint_message_labels() const {
  return product_of(message_spaces);
}

std::size_t GameInstance::joint_type_index(const std::vector<std::size_t>& per_agent) const {
  return pack_index(per_agent, type_spaces);
}
std::vector<std::size_t> GameInstance::unpack_type_index(std::size_t joint) const {
  return unpack_index(joint, type_spaces);
}
std::size_t GameInstance::joint_message_index(const std::vector<std::size_t>& per_agent) const {
  return pack_index(per_agent, message_spaces);
}
std::vector<std::size_t> GameInstance::unpack_message_index(std::size_t joint) const {
  return unpack_index(joint, message_spaces);
}

AugmentedMechanism::AugmentedMechanism(std::shared_ptr<const GameInstance> game_in,
                                       StochasticKernel outcome_kernel_in,
                                       std::vector<StochasticKernel> strategies_in)
    : game(std::move(game_in)),
      outcome_kernel(std::move(outcome_kernel_in)),
      strategies(std::move(strategies_in)) {
  if (!game) throw InvalidInput("mechanism: missing game");
  if (outcome_kernel.rows() != game->outcome_space.size() ||
      outcome_kernel.cols() != game->joint_message_count()) {
    throw DimensionMismatch("mechanism: outcome kernel shape");
  }
  if (strategies.size() != game->agent_count()) {
    throw DimensionMismatch("mechanism: strategy count does not match agent count");
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (strategies[i].rows() != game->message_spaces[i].size() ||
        strategies[i].cols() != game->type_spaces[i].size()) {
      throw DimensionMismatch("mechanism: strategy kernel shape for agent " + std::to_string(i));
    }
  }
}

StochasticKernel AugmentedMechanism::joint_strategy() const { return kronecker_joint(strategies); }

bool AugmentedMechanism::is_deterministic() const {
  if (!outcome_kernel.is_deterministic()) return false;
  return std::all_of(strategies.begin(), strategies.end(),
                     [](const StochasticKernel& s) { return s.is_deterministic(); });
}

StochasticKernel FictitiousDirect::joint_filter() const { return kronecker_joint(filters); }

StochasticKernel induced_allocation(const AugmentedMechanism& am) {
  return compound(am.outcome_kernel, am.joint_strategy());
}

EquilibriumReport is_dominant_strategy_eq(const AugmentedMechanism& am) {
  const GameInstance& g = *am.game;
  EquilibriumReport report;
  for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
    const StochasticKernel& own = am.strategies[agent];
    const std::size_t own_msgs = g.message_spaces[agent].size();
    for (std::size_t jt = 0; jt < g.joint_type_count(); ++jt) {
      const std::vector<std::size_t> types = g.unpack_type_index(jt);
      // Enumerate pure opponent profiles via the joint message index with the
      // agent's slot fixed to 0, advancing every other slot.
      for (std::size_t jm = 0; jm < g.joint_message_count(); ++jm) {
        std::vector<std::size_t> profile = g.unpack_message_index(jm);
        if (profile[agent] != 0) continue;
        RatVec value(own_msgs);
        for (std::size_t m = 0; m < own_msgs; ++m) {
          profile[agent] = m;
          value[m] = message_value(am, agent, jt, g.joint_message_index(profile));
        }
        Rational played = 0;
        for (std::size_t m = 0; m < own_msgs; ++m) {
          if (own.at(m, types[agent]) != 0) played += own.at(m, types[agent]) * value[m];
        }
        for (std::size_t dev = 0; dev < own_msgs; ++dev) {
          if (value[dev] > played) {
            profile[agent] = dev;
            record_violation(report, Violation{agent, types, profile, dev});
          }
        }
      }
    }
  }
  return report;
}

EquilibriumReport is_ex_post_eq(const AugmentedMechanism& am) {
  const GameInstance& g = *am.game;
  EquilibriumReport report;
  for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
    const StochasticKernel& own = am.strategies[agent];
    const std::size_t own_msgs = g.message_spaces[agent].size();
    for (std::size_t jt = 0; jt < g.joint_type_count(); ++jt) {
      const std::vector<std::size_t> types = g.unpack_type_index(jt);
      // value[m] = expected utility of sending m while opponents play
      // sigma^{-i}(theta^{-i}).
      RatVec value(own_msgs);
      for (std::size_t jm = 0; jm < g.joint_message_count(); ++jm) {
        const std::vector<std::size_t> profile = g.unpack_message_index(jm);
        Rational weight = 1;
        for (std::size_t j = 0; j < g.agent_count() && weight != 0; ++j) {
          if (j == agent) continue;
          weight *= am.strategies[j].at(profile[j], types[j]);
        }
        if (weight == 0) continue;
        value[profile[agent]] += weight * message_value(am, agent, jt, jm);
      }
      Rational played = 0;
      for (std::size_t m = 0; m < own_msgs; ++m) {
        if (own.at(m, types[agent]) != 0) played += own.at(m, types[agent]) * value[m];
      }
      for (std::size_t dev = 0; dev < own_msgs; ++dev) {
        if (value[dev] > played) {
          record_violation(report, Violation{agent, types, {}, dev});
        }
      }
    }
  }
  return report;
}

FictitiousDirect represent_deterministic(const AugmentedMechanism& am) {
  if (!am.is_deterministic()) {
    throw InvalidInput("represent_deterministic: mechanism is not deterministic");
  }
  const GameInstance& g = *am.game;
  std::vector<StochasticKernel> filters;
  for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
    const StochasticKernel& sigma = am.strategies[agent];
    const std::size_t n = sigma.cols();
    // message sent by each type (deterministic kernel: one 1 per column)
    std::vector<std::size_t> sent(n);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < sigma.rows(); ++r) {
        if (sigma.at(r, c) == 1) {
          sent[c] = r;
          break;
        }
      }
    }
    Matrix phi(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t rep = c;
      for (std::size_t c2 = 0; c2 < c; ++c2) {
        if (sent[c2] == sent[c]) {
          rep = c2;
          break;
        }
      }
      phi.at(rep, c) = 1;
    }
    filters.emplace_back(std::move(phi), g.type_spaces[agent], g.type_spaces[agent]);
  }
  FictitiousDirect fd{am.game, induced_allocation(am), std::move(filters), true,
                      am.strategies};
  return fd;
}

FictitiousDirect synthesize_weak_filter(const AugmentedMechanism& am) {
  const GameInstance& g = *am.game;
  std::vector<StochasticKernel> filters;
  for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
    const Matrix& sigma = am.strategies[agent].matrix();
    const std::size_t msgs = sigma.rows();
    const std::size_t types = sigma.cols();
    Matrix phi(types, types);
    if (msgs <= types) {
      // Case 1: embed messages as the first |M| type labels, zero rows below.
      for (std::size_t r = 0; r < msgs; ++r) {
        for (std::size_t c = 0; c < types; ++c) phi.at(r, c) = sigma.at(r, c);
      }
    } else if (sigma.rank() == types) {
      // Case 2: strategy already separates everything a filter could.
      phi = Matrix::identity(types);
    } else {
      // Case 3: greedily selected maximal independent rows first (others keep
      // relative order); keep the first |Theta|-1 rows, fold the rest into the
      // last row so columns still sum to 1.
      std::vector<std::size_t> order;
      std::vector<bool> selected(msgs, false);
      Matrix chosen(0, types);
      for (std::size_t r = 0; r < msgs; ++r) {
        Matrix row(1, types);
        for (std::size_t c = 0; c < types; ++c) row.at(0, c) = sigma.at(r, c);
        Matrix trial = chosen.rows() == 0 ? row : chosen.stack_below(row);
        if (trial.rank() > chosen.rank()) {
          chosen = std::move(trial);
          order.push_back(r);
          selected[r] = true;
        }
      }
      for (std::size_t r = 0; r < msgs; ++r) {
        if (!selected[r]) order.push_back(r);
      }
      for (std::size_t out = 0; out + 1 < types; ++out) {
        for (std::size_t c = 0; c < types; ++c) phi.at(out, c) = sigma.at(order[out], c);
      }
      for (std::size_t pos = types - 1; pos < msgs; ++pos) {
        for (std::size_t c = 0; c < types; ++c) {
          phi.at(types - 1, c) += sigma.at(order[pos], c);
        }
      }
    }
    filters.emplace_back(std::move(phi), g.type_spaces[agent], g.type_spaces[agent]);
  }
  FictitiousDirect fd{am.game, induced_allocation(am), std::move(filters), false,
                      am.strategies};
  return fd;
}

bool check_equivalence(const AugmentedMechanism& am, const FictitiousDirect& fd) {
  if (fd.game && am.game != fd.game) {
    throw InvalidInput("check_equivalence: instances built from different games");
  }
  if (induced_allocation(am).matrix() != fd.delta.matrix()) return false;
  return kernel_equivalent(am.joint_strategy(), fd.joint_filter());
}

StrongSearchResult search_strong_representation(const AugmentedMechanism& am, std::size_t budget,
                                                unsigned max_denominator,
                                                std::size_t solver_cap) {
  const GameInstance& g = *am.game;
  const StochasticKernel delta = induced_allocation(am);
  StrongSearchResult result;

  for (unsigned denom = 1; denom <= max_denominator; ++denom) {
    // Per-agent candidate filters: square, entries k/denom, columns summing
    // to 1, enumerated in lexicographic column order.
    std::vector<std::vector<Matrix>> agent_candidates;
    for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
      const std::size_t n = g.type_spaces[agent].size();
      const std::vector<std::vector<unsigned>> cols = compositions(denom, n);
      std::vector<Matrix> mats;
      std::vector<std::size_t> pick(n, 0);
      for (;;) {
        Matrix m(n, n);
        for (std::size_t c = 0; c < n; ++c) {
          for (std::size_t r = 0; r < n; ++r) {
            m.at(r, c) = ratio(cols[pick[c]][r], denom);
          }
        }
        mats.push_back(std::move(m));
        std::size_t pos = n;
        while (pos-- > 0) {
          if (++pick[pos] < cols.size()) break;
          pick[pos] = 0;
          if (pos == 0) {
            pos = std::size_t(-1);
            break;
          }
        }
        if (pos == std::size_t(-1)) break;
      }
      agent_candidates.push_back(std::move(mats));
    }

    std::vector<std::size_t> pick(g.agent_count(), 0);
    for (;;) {
      if (result.candidates_tried >= budget) {
        result.outcome = SearchOutcome::BudgetExhausted;
        return result;
      }
      ++result.candidates_tried;

      std::vector<StochasticKernel> filters;
      bool kernels_match = true;
      for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
        StochasticKernel phi(agent_candidates[agent][pick[agent]], g.type_spaces[agent],
                             g.type_spaces[agent]);
        if (!kernel_equivalent(phi, am.strategies[agent])) {
          kernels_match = false;
          break;
        }
        filters.push_back(std::move(phi));
      }
      if (kernels_match) {
        const StochasticKernel joint =
            filters.size() == 1 ? filters[0] : kronecker_joint(filters);
        if (blackwell_more_informative(joint, delta, solver_cap)) {
          result.outcome = SearchOutcome::Found;
          result.witness = FictitiousDirect{am.game, delta, std::move(filters), true,
                                            am.strategies};
          return result;
        }
      }

      std::size_t pos = g.agent_count();
      bool done = true;
      while (pos-- > 0) {
        if (++pick[pos] < agent_candidates[pos].size()) {
          done = false;
          break;
        }
        pick[pos] = 0;
      }
      if (done) break;
    }
  }
  result.outcome = SearchOutcome::ClassExhausted;
  return result;
}

}  // namespace mechkernel
