#include "mechkernel/monopoly.hpp"

#include <algorithm>
#include <utility>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

Rational tail_sum(const MonopolyInstance& inst, const RatVec& atoms, std::size_t from) {
  Rational t = 0;
  for (std::size_t j = from; j < inst.size(); ++j) t += atoms[j];
  return t;
}

std::vector<std::string> outcome_labels(const MonopolyInstance& inst) {
  std::vector<std::string> labels;
  labels.reserve(inst.size() + 1);
  for (const Rational& p : inst.grid) labels.push_back("(1," + to_string(p) + ")");
  labels.push_back("(0,0)");
  return labels;
}

// Next size-ascending, then lexicographic, subset of {0..n-1} after `atoms`;
// false when exhausted.
bool next_grain(std::vector<std::size_t>& atoms, std::size_t n) {
  const std::size_t k = atoms.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (atoms[i] + (k - i) < n) {
      ++atoms[i];
      for (std::size_t j = i + 1; j < k; ++j) atoms[j] = atoms[j - 1] + 1;
      return true;
    }
    if (i == 0) break;
  }
  if (k >= n) return false;
  atoms.resize(k + 1);
  for (std::size_t j = 0; j <= k; ++j) atoms[j] = j;
  return true;
}

}  // namespace

MonopolyInstance::MonopolyInstance(RatVec grid_in, RatVec pi0_atoms, RatVec price_pmf_in)
    : grid(std::move(grid_in)),
      pi0(grid_labels(grid), std::move(pi0_atoms)),
      price_pmf(std::move(price_pmf_in)) {
  if (grid.empty()) throw InvalidInput("monopoly: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0 || grid[i] > 1) throw InvalidInput("monopoly: grid value outside [0,1]");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw InvalidInput("monopoly: grid not strictly increasing");
    }
  }
  if (price_pmf.size() != grid.size()) {
    throw DimensionMismatch("monopoly: price pmf length does not match grid");
  }
  Rational total = 0;
  for (const Rational& v : price_pmf) {
    if (v < 0) throw InvalidInput("monopoly: negative price probability");
    total += v;
  }
  if (total != 1) throw InvalidInput("monopoly: price pmf does not sum to 1");
}

std::vector<std::size_t> MonopolyInstance::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < price_pmf.size(); ++i) {
    if (price_pmf[i] > 0) s.push_back(i);
  }
  return s;
}

std::size_t MonopolyInstance::grid_index(const Rational& p) const {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == p) return i;
  }
  throw InvalidInput("monopoly: price " + to_string(p) + " is not a grid point");
}

std::vector<std::string> grid_labels(const RatVec& grid) {
  std::vector<std::string> labels;
  labels.reserve(grid.size());
  for (const Rational& v : grid) labels.push_back(to_string(v));
  return labels;
}

StochasticKernel posted_price_kernel(const MonopolyInstance& inst, const Rational& p) {
  inst.grid_index(p);
  Matrix m(2, inst.size());
  for (std::size_t j = 0; j < inst.size(); ++j) {
    m.at(inst.grid[j] >= p ? 0 : 1, j) = 1;
  }
  return StochasticKernel(std::move(m), {"(1," + to_string(p) + ")", "(0,0)"},
                          grid_labels(inst.grid));
}

StochasticKernel randomized_price_kernel(const MonopolyInstance& inst) {
  const std::size_t n = inst.size();
  Matrix m(n + 1, n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational no_trade = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.grid[j] >= inst.grid[i]) {
        m.at(i, j) = inst.price_pmf[i];
      } else {
        no_trade += inst.price_pmf[i];
      }
    }
    m.at(n, j) = no_trade;
  }
  return StochasticKernel(std::move(m), outcome_labels(inst), grid_labels(inst.grid));
}

StochasticKernel posted_price_full_outcomes(const MonopolyInstance& inst, const Rational& p) {
  const std::size_t row = inst.grid_index(p);
  const std::size_t n = inst.size();
  Matrix m(n + 1, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.grid[j] >= p) {
      m.at(row, j) = 1;
    } else {
      m.at(n, j) = 1;
    }
  }
  return StochasticKernel(std::move(m), outcome_labels(inst), grid_labels(inst.grid));
}

Rational revenue(const MonopolyInstance& inst, const Rational& p, const Prior& pi) {
  const std::size_t idx = inst.grid_index(p);
  if (pi.size() != inst.size()) {
    throw DimensionMismatch("revenue: prior does not match grid");
  }
  return p * tail_sum(inst, pi.atoms, idx);
}

TailProfile tail_profile(const MonopolyInstance& inst, const Prior& pi) {
  if (pi.size() != inst.size()) {
    throw DimensionMismatch("tail_profile: prior does not match grid");
  }
  TailProfile t;
  for (std::size_t idx : inst.support()) {
    t.prices.push_back(inst.grid[idx]);
    t.tails.push_back(tail_sum(inst, pi.atoms, idx));
  }
  return t;
}

PriorPolytope feasible_tail_polytope(const MonopolyInstance& inst) {
  const std::vector<std::size_t> supp = inst.support();
  const std::size_t n = inst.size();
  Matrix k(supp.size(), n);
  RatVec b(supp.size());
  for (std::size_t r = 0; r < supp.size(); ++r) {
    for (std::size_t j = supp[r]; j < n; ++j) k.at(r, j) = 1;
    b[r] = tail_sum(inst, inst.pi0.atoms, supp[r]);
  }
  return PriorPolytope{grid_labels(inst.grid), {n}, std::move(k), std::move(b), {}, inst.pi0};
}

std::vector<Rational> local_maximizers(const MonopolyInstance& inst, const Prior& pi) {
  const std::size_t n = inst.size();
  RatVec rev(n);
  for (std::size_t j = 0; j < n; ++j) rev[j] = inst.grid[j] * tail_sum(inst, pi.atoms, j);
  std::vector<Rational> out;
  for (std::size_t j = 0; j < n; ++j) {
    const bool left_ok = (j == 0) || rev[j] >= rev[j - 1];
    const bool right_ok = (j + 1 == n) || rev[j] >= rev[j + 1];
    if (left_ok && right_ok) out.push_back(inst.grid[j]);
  }
  return out;
}

CharacterizationVerdict check_characterization(const MonopolyInstance& inst) {
  CharacterizationVerdict v;
  const std::vector<std::size_t> supp = inst.support();
  v.cond_equal_revenue = true;
  for (std::size_t k = 1; k < supp.size(); ++k) {
    if (revenue(inst, inst.grid[supp[k]], inst.pi0) !=
        revenue(inst, inst.grid[supp[0]], inst.pi0)) {
      v.cond_equal_revenue = false;
      break;
    }
  }
  const std::vector<Rational> maxima = local_maximizers(inst, inst.pi0);
  v.cond_local_max = true;
  for (std::size_t idx : supp) {
    if (std::find(maxima.begin(), maxima.end(), inst.grid[idx]) == maxima.end()) {
      v.cond_local_max = false;
      break;
    }
  }
  return v;
}

OracleVerdict oracle_robust_sc(const MonopolyInstance& inst, const Rational& epsilon,
                               std::size_t grain_cap, std::size_t solver_cap) {
  if (epsilon <= 0) throw InvalidInput("oracle: epsilon must be positive");
  const std::size_t n = inst.size();
  if (n > 24) throw CapExceeded("oracle: grid too large for exhaustive grain enumeration");
  const std::vector<std::size_t> supp = inst.support();

  // Lowest revenue among support prices under pi0: a justifying belief must
  // keep every grid price at or below it.
  Rational r_min;
  for (std::size_t k = 0; k < supp.size(); ++k) {
    const Rational r = revenue(inst, inst.grid[supp[k]], inst.pi0);
    if (k == 0 || r < r_min) r_min = r;
  }

  OracleVerdict verdict;
  verdict.epsilon = epsilon;

  std::vector<std::size_t> atoms;  // current grain set, starts empty
  bool first = true;
  while (first || next_grain(atoms, n)) {
    first = false;
    Rational mass = 0;
    for (std::size_t a : atoms) mass += inst.pi0.atoms[a];
    if (mass >= epsilon) continue;
    if (verdict.sets_examined >= grain_cap) {
      verdict.status = OracleStatus::Inconclusive;
      return verdict;
    }
    ++verdict.sets_examined;

    std::vector<LpConstraint> constraints;
    LpConstraint sum;
    sum.coeffs.assign(n, Rational(1));
    sum.sense = LpSense::Eq;
    sum.rhs = 1;
    constraints.push_back(std::move(sum));
    for (std::size_t s : supp) {
      LpConstraint c;
      c.coeffs.assign(n, Rational(0));
      for (std::size_t j = s; j < n; ++j) c.coeffs[j] = 1;
      c.sense = LpSense::Eq;
      c.rhs = tail_sum(inst, inst.pi0.atoms, s);
      constraints.push_back(std::move(c));
    }
    for (std::size_t a : atoms) {
      LpConstraint c;
      c.coeffs.assign(n, Rational(0));
      c.coeffs[a] = 1;
      c.sense = LpSense::Eq;
      c.rhs = inst.pi0.atoms[a];
      constraints.push_back(std::move(c));
    }
    for (std::size_t q = 0; q < n; ++q) {
      LpConstraint c;
      c.coeffs.assign(n, Rational(0));
      for (std::size_t j = q; j < n; ++j) c.coeffs[j] = inst.grid[q];
      c.sense = LpSense::Le;
      c.rhs = r_min;
      constraints.push_back(std::move(c));
    }

    const std::optional<RatVec> sol = find_feasible(n, constraints, solver_cap);
    if (!sol) {
      verdict.status = OracleStatus::False;
      verdict.witness = atoms;
      return verdict;
    }
    if (atoms.empty()) verdict.justifying = Prior(grid_labels(inst.grid), *sol);
  }
  verdict.status = OracleStatus::True;
  return verdict;
}

bool equal_tail_check(const MonopolyInstance& inst, const Prior& pi) {
  if (!membership(feasible_tail_polytope(inst), pi)) {
    throw InvalidInput("equal_tail_check: prior is not in the feasible tail polytope");
  }
  for (std::size_t s : inst.support()) {
    if (tail_sum(inst, pi.atoms, s) < tail_sum(inst, inst.pi0.atoms, s)) return false;
  }
  return true;
}

std::shared_ptr<const GameInstance> monopoly_game(const MonopolyInstance& inst) {
  const std::size_t n = inst.size();
  const std::vector<std::string> types = grid_labels(inst.grid);
  const std::vector<std::string> outcomes = outcome_labels(inst);
  Matrix buyer(n + 1, n);
  Matrix seller(n + 1, n);
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t t = 0; t < n; ++t) {
      buyer.at(o, t) = inst.grid[t] - inst.grid[o];
      seller.at(o, t) = inst.grid[o];
    }
  }
  return std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{types},
      std::vector<std::vector<std::string>>{types}, outcomes,
      std::vector<Matrix>{std::move(buyer)}, std::move(seller));
}

CompetitorFamily monopoly_family(const MonopolyInstance& inst) {
  CompetitorFamily family;
  family.provenance = "domain-generated";
  for (const Rational& p : inst.grid) {
    family.members.push_back(posted_price_full_outcomes(inst, p));
  }
  return family;
}

}  // namespace mechkernel
