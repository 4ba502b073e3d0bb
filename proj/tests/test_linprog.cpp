#include <doctest.h>

#include "mechkernel/errors.hpp"
#include "mechkernel/linprog.hpp"
#include "support/generators.hpp"

using namespace mechkernel;
using testgen::Q;
using testgen::vec;

namespace {

bool satisfies(const RatVec& x, const LpConstraint& c) {
  Rational lhs = 0;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) lhs += c.coeffs[i] * x[i];
  switch (c.sense) {
    case LpSense::Le: return lhs <= c.rhs;
    case LpSense::Ge: return lhs >= c.rhs;
    case LpSense::Eq: return lhs == c.rhs;
  }
  return false;
}

}  // namespace

TEST_CASE("simplex finds the exact optimum of a small program") {
  // min -y subject to x + y = 1, x - y >= 0, x,y >= 0: optimum at x = y = 1/2.
  const std::vector<LpConstraint> cs = {
      {vec({"1", "1"}), LpSense::Eq, Q("1")},
      {vec({"1", "-1"}), LpSense::Ge, Q("0")},
  };
  const LpResult r = solve_lp(vec({"0", "-1"}), cs);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == Q("-1/2"));
  CHECK(r.solution == vec({"1/2", "1/2"}));
}

TEST_CASE("infeasible and unbounded programs are classified") {
  const std::vector<LpConstraint> infeasible = {
      {vec({"1"}), LpSense::Ge, Q("1")},
      {vec({"1"}), LpSense::Le, Q("0")},
  };
  CHECK(solve_lp(vec({"1"}), infeasible).status == LpStatus::Infeasible);
  CHECK_FALSE(find_feasible(1, infeasible).has_value());

  const std::vector<LpConstraint> open = {{vec({"1"}), LpSense::Ge, Q("1")}};
  CHECK(solve_lp(vec({"-1"}), open).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate pivoting terminates with Bland's rule") {
  // Classic cycling-prone instance (Beale); Bland's rule must terminate.
  const std::vector<LpConstraint> cs = {
      {vec({"1/4", "-60", "-1/25", "9"}), LpSense::Le, Q("0")},
      {vec({"1/2", "-90", "-1/50", "3"}), LpSense::Le, Q("0")},
      {vec({"0", "0", "1", "0"}), LpSense::Le, Q("1")},
  };
  const LpResult r = solve_lp(vec({"-3/4", "150", "-1/50", "6"}), cs);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == Q("-1/20"));
  CHECK(r.solution == vec({"1/25", "0", "1", "0"}));
}

TEST_CASE("fractional data stays exact through the tableau") {
  // min x1 + x2 with 2/3 x1 + 1/7 x2 = 5/21: vertex solutions are
  // (5/14, 0) and (0, 5/3); the optimum picks the smaller sum.
  const std::vector<LpConstraint> cs = {
      {vec({"2/3", "1/7"}), LpSense::Eq, Q("5/21")},
  };
  const LpResult r = solve_lp(vec({"1", "1"}), cs);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == Q("5/14"));
  CHECK(r.solution == vec({"5/14", "0"}));
}

TEST_CASE("feasibility witnesses satisfy every constraint exactly") {
  testgen::Rng rng(77);
  int feasible_count = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = testgen::pick(rng, 1, 4);
    const std::size_t m = testgen::pick(rng, 1, 4);
    std::vector<LpConstraint> cs;
    for (std::size_t i = 0; i < m; ++i) {
      LpConstraint c;
      for (std::size_t j = 0; j < n; ++j) {
        c.coeffs.push_back(ratio(static_cast<long>(testgen::pick(rng, 0, 8)) - 4, 2));
      }
      c.sense = static_cast<LpSense>(testgen::pick(rng, 0, 2));
      c.rhs = ratio(static_cast<long>(testgen::pick(rng, 0, 6)) - 3, 1);
      cs.push_back(std::move(c));
    }
    const auto witness = find_feasible(n, cs);
    if (!witness) continue;
    ++feasible_count;
    REQUIRE(witness->size() == n);
    for (const LpConstraint& c : cs) {
      CHECK(satisfies(*witness, c));
    }
    for (const Rational& x : *witness) CHECK(x >= 0);
  }
  CHECK(feasible_count > 5);
}

TEST_CASE("optimal solutions are feasible and beat random feasible points") {
  testgen::Rng rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testgen::pick(rng, 1, 3);
    std::vector<LpConstraint> cs;
    // box constraints keep everything bounded
    for (std::size_t j = 0; j < n; ++j) {
      LpConstraint box;
      box.coeffs.assign(n, Rational(0));
      box.coeffs[j] = 1;
      box.sense = LpSense::Le;
      box.rhs = Rational(static_cast<long>(testgen::pick(rng, 1, 4)));
      cs.push_back(std::move(box));
    }
    LpConstraint extra;
    for (std::size_t j = 0; j < n; ++j) {
      extra.coeffs.push_back(Rational(static_cast<long>(testgen::pick(rng, 0, 2))));
    }
    extra.sense = LpSense::Ge;
    extra.rhs = Rational(1);
    cs.push_back(extra);

    RatVec obj;
    for (std::size_t j = 0; j < n; ++j) {
      obj.push_back(ratio(static_cast<long>(testgen::pick(rng, 0, 8)) - 4, 1));
    }
    const LpResult r = solve_lp(obj, cs);
    if (r.status != LpStatus::Optimal) continue;
    for (const LpConstraint& c : cs) CHECK(satisfies(r.solution, c));
    // sample feasible corners of the box and compare objective values
    for (int probe = 0; probe < 5; ++probe) {
      RatVec candidate;
      for (std::size_t j = 0; j < n; ++j) {
        candidate.push_back(testgen::pick(rng, 0, 1) == 0 ? Rational(0) : cs[j].rhs);
      }
      bool ok = true;
      for (const LpConstraint& c : cs) ok = ok && satisfies(candidate, c);
      if (!ok) continue;
      Rational value = 0;
      for (std::size_t j = 0; j < n; ++j) value += obj[j] * candidate[j];
      CHECK(r.objective <= value);
    }
  }
}

TEST_CASE("variable cap raises CapExceeded") {
  std::vector<LpConstraint> cs;
  for (int i = 0; i < 5; ++i) {
    LpConstraint c;
    c.coeffs.assign(6, Rational(1));
    c.sense = LpSense::Le;
    c.rhs = Rational(1);
    cs.push_back(std::move(c));
  }
  CHECK_THROWS_AS(solve_lp(RatVec(6, Rational(1)), cs, 4), CapExceeded);
}
