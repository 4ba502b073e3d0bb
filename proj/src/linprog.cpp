#include "mechkernel/linprog.hpp"

#include <limits>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense tableau: `rows[i]` holds the constraint coefficients followed by the
// rhs in the last slot; `reduced` holds reduced costs with the negated
// objective value in the last slot. Invariant: reduced[basis[i]] == 0.
struct Tableau {
  std::size_t width = 0;  // variable count (rhs column excluded)
  std::vector<RatVec> rows;
  RatVec reduced;
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c) {
    RatVec& prow = rows[r];
    const Rational p = prow[c];
    for (Rational& v : prow) v /= p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j <= width; ++j) rows[i][j] -= f * prow[j];
    }
    if (reduced[c] != 0) {
      const Rational f = reduced[c];
      for (std::size_t j = 0; j <= width; ++j) reduced[j] -= f * prow[j];
    }
    basis[r] = c;
  }

  // Runs simplex to optimality. Returns false when the objective is unbounded
  // below. Bland's rule guarantees termination.
  bool iterate(std::size_t first_blocked_col) {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < first_blocked_col; ++j) {
        if (reduced[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == kNone) return true;
      std::size_t leave = kNone;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rational ratio = rows[i][width] / rows[i][enter];
        if (leave == kNone || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == kNone) return false;
      pivot(leave, enter);
    }
  }

  void install_costs(const RatVec& costs) {
    reduced.assign(width + 1, Rational(0));
    for (std::size_t j = 0; j < costs.size(); ++j) reduced[j] = costs[j];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (reduced[basis[i]] == 0) continue;
      const Rational f = reduced[basis[i]];
      for (std::size_t j = 0; j <= width; ++j) reduced[j] -= f * rows[i][j];
    }
  }
};

}  // namespace

LpResult solve_lp(const RatVec& objective, const std::vector<LpConstraint>& constraints,
                  std::size_t var_cap) {
  const std::size_t n = objective.size();
  const std::size_t m = constraints.size();
  for (const LpConstraint& c : constraints) {
    if (c.coeffs.size() != n) {
      throw DimensionMismatch("LP constraint width does not match objective");
    }
  }

  std::size_t num_slack = 0;
  for (const LpConstraint& c : constraints) {
    if (c.sense != LpSense::Eq) ++num_slack;
  }
  // Worst case every row also needs an artificial variable.
  if (n + num_slack + m > var_cap) {
    throw CapExceeded("LP variable count exceeds solver cap");
  }

  // Normalize to rhs >= 0, then lay out columns as
  // [decision | slack/surplus | artificial].
  std::vector<RatVec> coeffs(m);
  std::vector<LpSense> senses(m);
  RatVec rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    coeffs[i] = constraints[i].coeffs;
    senses[i] = constraints[i].sense;
    rhs[i] = constraints[i].rhs;
    if (rhs[i] < 0) {
      for (Rational& v : coeffs[i]) v = -v;
      rhs[i] = -rhs[i];
      if (senses[i] == LpSense::Le) {
        senses[i] = LpSense::Ge;
      } else if (senses[i] == LpSense::Ge) {
        senses[i] = LpSense::Le;
      }
    }
  }

  std::size_t num_artificial = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(senses[i] == LpSense::Le)) ++num_artificial;
  }

  Tableau t;
  t.width = n + num_slack + num_artificial;
  t.rows.assign(m, RatVec(t.width + 1, Rational(0)));
  t.basis.assign(m, kNone);

  const std::size_t slack_base = n;
  const std::size_t art_base = n + num_slack;
  std::size_t slack_at = 0;
  std::size_t art_at = 0;
  for (std::size_t i = 0; i < m; ++i) {
    RatVec& row = t.rows[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = coeffs[i][j];
    row[t.width] = rhs[i];
    switch (senses[i]) {
      case LpSense::Le:
        row[slack_base + slack_at] = 1;
        t.basis[i] = slack_base + slack_at;
        ++slack_at;
        break;
      case LpSense::Ge:
        row[slack_base + slack_at] = -1;
        ++slack_at;
        row[art_base + art_at] = 1;
        t.basis[i] = art_base + art_at;
        ++art_at;
        break;
      case LpSense::Eq:
        row[art_base + art_at] = 1;
        t.basis[i] = art_base + art_at;
        ++art_at;
        break;
    }
  }

  LpResult result;

  if (num_artificial > 0) {
    RatVec phase1(t.width, Rational(0));
    for (std::size_t j = art_base; j < t.width; ++j) phase1[j] = 1;
    t.install_costs(phase1);
    t.iterate(t.width);  // phase-1 objective is bounded below by zero
    if (t.reduced[t.width] != 0) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Pivot any artificial still in the basis onto a structural column; a row
    // with no such column is redundant and can carry the zero-valued
    // artificial through phase 2 (artificial columns are blocked below).
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < art_base) continue;
      for (std::size_t j = 0; j < art_base; ++j) {
        if (t.rows[i][j] != 0) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  RatVec phase2(t.width, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = objective[j];
  t.install_costs(phase2);
  if (!t.iterate(art_base)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.solution.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) result.solution[t.basis[i]] = t.rows[i][t.width];
  }
  result.objective = -t.reduced[t.width];
  return result;
}

std::optional<RatVec> find_feasible(std::size_t num_vars,
                                    const std::vector<LpConstraint>& constraints,
                                    std::size_t var_cap) {
  const LpResult r = solve_lp(RatVec(num_vars, Rational(0)), constraints, var_cap);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return r.solution;
}

}  // namespace mechkernel
