#include "mechkernel/feasible_priors.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

std::vector<std::size_t> unpack(std::size_t joint, const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> out(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    out[i] = joint % sizes[i];
    joint /= sizes[i];
  }
  return out;
}

void check_product_structure(const std::vector<std::size_t>& sizes, std::size_t ambient) {
  std::size_t prod = 1;
  for (std::size_t s : sizes) {
    if (s == 0) throw InvalidInput("polytope: zero-size agent type space");
    prod *= s;
  }
  if (prod != ambient) {
    throw DimensionMismatch("polytope: product structure does not match ambient size");
  }
}

}  // namespace

Matrix PriorPolytope::all_equalities(RatVec& rhs_out) const {
  std::size_t pin_rows = 0;
  for (const AgreementConstraint& a : agreements) pin_rows += a.atoms.size();
  Matrix e(equality_matrix.rows() + pin_rows, ambient());
  rhs_out.assign(e.rows(), Rational(0));
  for (std::size_t r = 0; r < equality_matrix.rows(); ++r) {
    for (std::size_t c = 0; c < ambient(); ++c) e.at(r, c) = equality_matrix.at(r, c);
    rhs_out[r] = rhs[r];
  }
  std::size_t row = equality_matrix.rows();
  for (const AgreementConstraint& a : agreements) {
    for (std::size_t k = 0; k < a.atoms.size(); ++k) {
      for (std::size_t j = 0; j < ambient(); ++j) {
        if (unpack(j, agent_sizes)[a.agent] == a.atoms[k]) e.at(row, j) = 1;
      }
      rhs_out[row] = a.pins[k];
      ++row;
    }
  }
  return e;
}

std::vector<LpConstraint> PriorPolytope::lp_constraints() const {
  RatVec b;
  const Matrix e = all_equalities(b);
  std::vector<LpConstraint> out;
  out.reserve(e.rows() + 1);
  for (std::size_t r = 0; r < e.rows(); ++r) {
    LpConstraint c;
    c.coeffs.resize(ambient());
    for (std::size_t j = 0; j < ambient(); ++j) c.coeffs[j] = e.at(r, j);
    c.sense = LpSense::Eq;
    c.rhs = b[r];
    out.push_back(std::move(c));
  }
  LpConstraint sum;
  sum.coeffs.assign(ambient(), Rational(1));
  sum.sense = LpSense::Eq;
  sum.rhs = 1;
  out.push_back(std::move(sum));
  return out;
}

PriorPolytope feasible_set(const StochasticKernel& k, const Prior& pi0,
                           std::vector<std::size_t> agent_sizes) {
  if (k.cols() != pi0.size()) {
    throw DimensionMismatch("feasible_set: kernel domain does not match prior");
  }
  if (agent_sizes.empty()) agent_sizes = {pi0.size()};
  check_product_structure(agent_sizes, pi0.size());
  return PriorPolytope{pi0.labels, std::move(agent_sizes),      k.matrix(),
                       k.matrix().multiply(pi0.atoms), {}, pi0};
}

RatVec marginal(const RatVec& joint, const std::vector<std::size_t>& agent_sizes,
                std::size_t agent) {
  if (agent >= agent_sizes.size()) throw InvalidInput("marginal: agent index out of range");
  RatVec out(agent_sizes[agent]);
  for (std::size_t j = 0; j < joint.size(); ++j) {
    out[unpack(j, agent_sizes)[agent]] += joint[j];
  }
  return out;
}

PriorPolytope restrict_grain(const PriorPolytope& p, const GrainSet& grain, const Prior& pi0) {
  if (grain.agent_atoms.size() != p.agent_sizes.size()) {
    throw DimensionMismatch("restrict_grain: grain agent count does not match polytope");
  }
  if (pi0.size() != p.ambient()) {
    throw DimensionMismatch("restrict_grain: prior does not match polytope ambient");
  }
  PriorPolytope out = p;
  for (std::size_t agent = 0; agent < grain.agent_atoms.size(); ++agent) {
    const RatVec marg = marginal(pi0.atoms, p.agent_sizes, agent);
    Rational mass = 0;
    AgreementConstraint ac;
    ac.agent = agent;
    for (std::size_t atom : grain.agent_atoms[agent]) {
      if (atom >= p.agent_sizes[agent]) throw InvalidInput("restrict_grain: atom out of range");
      mass += marg[atom];
      ac.atoms.push_back(atom);
      ac.pins.push_back(marg[atom]);
    }
    if (mass >= grain.epsilon) {
      throw InvalidInput("restrict_grain: grain set mass violates epsilon bound");
    }
    if (!ac.atoms.empty()) out.agreements.push_back(std::move(ac));
  }
  return out;
}

FictitiousDirect build_grain_filter(const FictitiousDirect& fd, const GrainSet& grain,
                                    const Prior& pi0) {
  if (!fd.game) throw InvalidInput("build_grain_filter: missing game");
  const GameInstance& g = *fd.game;
  if (grain.agent_atoms.size() != g.agent_count()) {
    throw DimensionMismatch("build_grain_filter: grain agent count does not match game");
  }
  std::vector<std::size_t> sizes;
  for (const auto& s : g.type_spaces) sizes.push_back(s.size());
  if (pi0.size() != g.joint_type_count()) {
    throw DimensionMismatch("build_grain_filter: prior does not match joint type space");
  }

  std::vector<StochasticKernel> filters;
  for (std::size_t agent = 0; agent < g.agent_count(); ++agent) {
    const StochasticKernel& phi = fd.filters[agent];
    const std::size_t n = g.type_spaces[agent].size();
    if (phi.rows() != n || phi.cols() != n) {
      throw InvalidInput("build_grain_filter: filter codomain must be the agent's type space");
    }
    const std::vector<std::size_t>& atoms = grain.agent_atoms[agent];
    std::vector<bool> revealed(n, false);
    for (std::size_t a : atoms) {
      if (a >= n) throw InvalidInput("build_grain_filter: atom out of range");
      revealed[a] = true;
    }
    std::size_t fallback = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!revealed[t]) {
        fallback = t;
        break;
      }
    }
    if (fallback == n) {
      throw InvalidInput("build_grain_filter: grain set covers the whole type space");
    }
    const RatVec marg = marginal(pi0.atoms, sizes, agent);
    Rational mass = 0;
    for (std::size_t a : atoms) mass += marg[a];
    if (mass >= grain.epsilon) {
      throw InvalidInput("build_grain_filter: grain set mass violates epsilon bound");
    }

    // Codomain Theta^i x Theta^i: revealed types go to (fallback, theta);
    // everything else is the original signal paired with fallback.
    Matrix m(n * n, n);
    for (std::size_t t = 0; t < n; ++t) {
      if (revealed[t]) {
        m.at(fallback * n + t, t) = 1;
      } else {
        for (std::size_t s = 0; s < n; ++s) {
          if (phi.at(s, t) != 0) m.at(s * n + fallback, t) = phi.at(s, t);
        }
      }
    }
    filters.emplace_back(std::move(m),
                         product_labels(g.type_spaces[agent], g.type_spaces[agent]),
                         g.type_spaces[agent]);
  }
  return FictitiousDirect{fd.game, fd.delta, std::move(filters), fd.strong_filter, std::nullopt};
}

bool membership(const PriorPolytope& p, const Prior& pi) {
  if (pi.size() != p.ambient()) {
    throw DimensionMismatch("membership: prior does not match polytope ambient");
  }
  RatVec b;
  const Matrix e = p.all_equalities(b);
  const RatVec image = e.multiply(pi.atoms);
  return image == b;
}

VertexSet vertices(const PriorPolytope& p, std::size_t cap, std::size_t ambient_cap) {
  const std::size_t n = p.ambient();
  if (n > ambient_cap) {
    throw CapExceeded("vertices: ambient dimension exceeds enumeration cap");
  }
  RatVec b;
  Matrix e = p.all_equalities(b);
  // Append the simplex sum row so basic solutions are normalized.
  Matrix sum_row(1, n);
  for (std::size_t j = 0; j < n; ++j) sum_row.at(0, j) = 1;
  e = e.stack_below(sum_row);
  b.push_back(1);

  const std::size_t r = e.rank();
  VertexSet out;

  // Basic feasible solutions: every size-r column subset whose submatrix has
  // full column rank and solves consistently with a nonnegative solution.
  std::vector<std::size_t> subset(r);
  std::iota(subset.begin(), subset.end(), 0);
  if (r == 0 || r > n) return out;
  for (;;) {
    Matrix sub(e.rows(), r);
    for (std::size_t c = 0; c < r; ++c) {
      for (std::size_t row = 0; row < e.rows(); ++row) sub.at(row, c) = e.at(row, subset[c]);
    }
    if (const std::optional<RatVec> sol = sub.solve(b)) {
      bool nonneg = true;
      for (const Rational& v : *sol) {
        if (v < 0) {
          nonneg = false;
          break;
        }
      }
      if (nonneg) {
        RatVec full(n, Rational(0));
        for (std::size_t c = 0; c < r; ++c) full[subset[c]] = (*sol)[c];
        bool seen = false;
        for (const Prior& existing : out.vertices) {
          if (existing.atoms == full) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          if (out.vertices.size() >= cap) {
            out.truncated = true;
            return out;
          }
          out.vertices.emplace_back(p.ambient_labels, std::move(full));
        }
      }
    }
    // next lexicographic subset
    std::size_t i = r;
    while (i-- > 0) {
      if (subset[i] + (r - i) < n) {
        ++subset[i];
        for (std::size_t j = i + 1; j < r; ++j) subset[j] = subset[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
  }
}

std::size_t dimension(const PriorPolytope& p, std::size_t solver_cap) {
  const std::size_t n = p.ambient();
  const std::vector<LpConstraint> constraints = p.lp_constraints();
  std::vector<std::size_t> forced_zero;
  for (std::size_t i = 0; i < n; ++i) {
    RatVec obj(n, Rational(0));
    obj[i] = -1;  // maximize coordinate i
    const LpResult r = solve_lp(obj, constraints, solver_cap);
    if (r.status != LpStatus::Optimal) {
      throw InvalidInput("dimension: polytope is empty or unbounded");
    }
    if (r.objective == 0) forced_zero.push_back(i);
  }
  RatVec b;
  Matrix e = p.all_equalities(b);
  Matrix sum_row(1, n);
  for (std::size_t j = 0; j < n; ++j) sum_row.at(0, j) = 1;
  e = e.stack_below(sum_row);
  if (!forced_zero.empty()) {
    Matrix zeros(forced_zero.size(), n);
    for (std::size_t k = 0; k < forced_zero.size(); ++k) zeros.at(k, forced_zero[k]) = 1;
    e = e.stack_below(zeros);
  }
  return n - e.rank();
}

}  // namespace mechkernel
