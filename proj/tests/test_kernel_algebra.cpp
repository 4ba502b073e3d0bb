#include <doctest.h>

#include "mechkernel/errors.hpp"
#include "mechkernel/kernel_algebra.hpp"
#include "support/generators.hpp"

using namespace mechkernel;
using testgen::mat;
using testgen::vec;

namespace {

// The strict-informativeness pair: G smooths the identity, H pools states
// 1 and 2 apart while never emitting its third signal.
StochasticKernel kernel_g() {
  return StochasticKernel(mat(3, 3,
                              {"0.8", "0.1", "0.1",
                               "0.1", "0.8", "0.1",
                               "0.1", "0.1", "0.8"}));
}

StochasticKernel kernel_h() {
  return StochasticKernel(mat(3, 3,
                              {"1", "0", "0.5",
                               "0", "1", "0.5",
                               "0", "0", "0"}));
}

}  // namespace

TEST_CASE("kernel construction validates shape and column sums") {
  CHECK_THROWS_AS(StochasticKernel(mat(2, 2, {"1/2", "0", "1/4", "1"})), InvalidInput);
  CHECK_THROWS_AS(StochasticKernel(mat(2, 2, {"3/2", "0", "-1/2", "1"})), InvalidInput);
  CHECK_THROWS_AS(StochasticKernel(mat(2, 1, {"1", "0"}), {"a"}, {"x"}), DimensionMismatch);
  const StochasticKernel id = StochasticKernel::identity(3);
  CHECK(id.is_deterministic());
  CHECK_FALSE(kernel_g().is_deterministic());
  const StochasticKernel pool = StochasticKernel::pooling(3, 4, 1);
  for (std::size_t c = 0; c < 4; ++c) CHECK(pool.at(1, c) == 1);
}

TEST_CASE("average pushes a prior through a kernel") {
  const Prior mu0(vec({"1/3", "1/3", "1/3"}));
  const Prior mu_bar(vec({"1/2", "1/2", "0"}));
  CHECK(average(kernel_h(), mu0).atoms == vec({"1/2", "1/2", "0"}));
  CHECK(average(kernel_h(), mu_bar).atoms == vec({"1/2", "1/2", "0"}));
  CHECK(average(kernel_g(), mu_bar).atoms == vec({"9/20", "9/20", "1/10"}));
  CHECK(average(kernel_g(), mu0).atoms == vec({"1/3", "1/3", "1/3"}));
}

TEST_CASE("compound composes and average is associative over it") {
  const StochasticKernel b = StochasticKernel(mat(2, 3, {"1", "1/2", "0", "0", "1/2", "1"}));
  const StochasticKernel g = kernel_g();
  const StochasticKernel bg = compound(b, g);
  CHECK(bg.rows() == 2);
  CHECK(bg.cols() == 3);

  testgen::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testgen::pick(rng, 1, 4);
    const std::size_t m = testgen::pick(rng, 1, 4);
    const std::size_t k = testgen::pick(rng, 1, 4);
    const StochasticKernel outer = testgen::random_kernel(rng, k, m);
    const StochasticKernel inner = testgen::random_kernel(rng, m, n);
    const Prior mu = testgen::random_prior(rng, n);
    CHECK(average(compound(outer, inner), mu).atoms ==
          average(outer, average(inner, mu)).atoms);
  }
}

TEST_CASE("kronecker_joint builds the product experiment") {
  testgen::Rng seed3(3);
  const StochasticKernel a = testgen::random_kernel(seed3, 2, 2);
  CHECK(kronecker_joint({a}) == a);
  const StochasticKernel id2 = StochasticKernel::identity(2);
  const StochasticKernel id4 = kronecker_joint({id2, id2});
  CHECK(id4.matrix() == Matrix::identity(4));
  CHECK(id4.col_labels()[1] == "0,1");

  testgen::Rng rng(4);
  const StochasticKernel k1 = testgen::random_kernel(rng, 2, 2);
  const StochasticKernel k2 = testgen::random_kernel(rng, 3, 2);
  const StochasticKernel joint = kronecker_joint({k1, k2});
  REQUIRE(joint.rows() == 6);
  REQUIRE(joint.cols() == 4);
  for (std::size_t i1 = 0; i1 < 2; ++i1) {
    for (std::size_t i2 = 0; i2 < 3; ++i2) {
      for (std::size_t j1 = 0; j1 < 2; ++j1) {
        for (std::size_t j2 = 0; j2 < 2; ++j2) {
          CHECK(joint.at(i1 * 3 + i2, j1 * 2 + j2) == k1.at(i1, j1) * k2.at(i2, j2));
        }
      }
    }
  }
}

TEST_CASE("null_space dimensions and zero-sum property") {
  CHECK(null_space(StochasticKernel::identity(4)).empty());
  CHECK(null_space(kernel_g()).empty());  // invertible
  const auto basis = null_space(StochasticKernel::pooling(3, 3, 0));
  CHECK(basis.size() == 2);
  for (const RatVec& v : basis) {
    Rational sum = 0;
    for (const Rational& x : v) sum += x;
    CHECK(sum == 0);
  }
}

TEST_CASE("kernel order separates G and H") {
  const StochasticKernel g = kernel_g();
  const StochasticKernel h = kernel_h();
  CHECK(kernel_more_informative(g, h));
  CHECK_FALSE(kernel_more_informative(h, g));
  CHECK_FALSE(kernel_equivalent(g, h));
  CHECK(kernel_more_informative(g, g));
  CHECK(kernel_equivalent(h, h));
  CHECK_THROWS_AS(kernel_more_informative(g, StochasticKernel::identity(2)),
                  DimensionMismatch);
}

TEST_CASE("Blackwell order is decided with an exact witness") {
  const StochasticKernel g = kernel_g();
  const StochasticKernel h = kernel_h();
  // The unique algebraic candidate H G^{-1} has negative entries, so no
  // stochastic garbling exists even though g dominates h in the kernel order.
  CHECK_FALSE(blackwell_more_informative(g, h).has_value());

  const auto self = blackwell_more_informative(h, h);
  REQUIRE(self.has_value());
  CHECK(compound(*self, h) == h);

  const auto from_id = blackwell_more_informative(StochasticKernel::identity(3), h);
  REQUIRE(from_id.has_value());
  CHECK(compound(*from_id, StochasticKernel::identity(3)).matrix() == h.matrix());
}

TEST_CASE("garblings certify Blackwell dominance and imply the kernel order") {
  testgen::Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = testgen::pick(rng, 1, 3);
    const std::size_t m = testgen::pick(rng, 2, 4);
    const std::size_t z = testgen::pick(rng, 1, 3);
    const StochasticKernel g = testgen::random_kernel(rng, m, n);
    const StochasticKernel b = testgen::random_kernel(rng, z, m);
    const StochasticKernel h = compound(b, g);
    const auto witness = blackwell_more_informative(g, h);
    REQUIRE(witness.has_value());
    CHECK(compound(*witness, g).matrix() == h.matrix());
    CHECK(kernel_more_informative(g, h));
  }
}

TEST_CASE("kernel equivalence matches the averaging definition on random priors") {
  testgen::Rng rng(314);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = testgen::pick(rng, 2, 3);
    const StochasticKernel g = testgen::random_kernel(rng, testgen::pick(rng, 1, 3), n);
    const StochasticKernel h = testgen::random_kernel(rng, testgen::pick(rng, 1, 3), n);
    const bool decided = kernel_equivalent(g, h);
    bool sampled = true;
    for (int probe = 0; probe < 50; ++probe) {
      const Prior mu = testgen::random_prior(rng, n);
      const Prior mu0 = testgen::random_prior(rng, n);
      const bool g_same = average(g, mu).atoms == average(g, mu0).atoms;
      const bool h_same = average(h, mu).atoms == average(h, mu0).atoms;
      if (g_same != h_same) {
        sampled = false;
        break;
      }
    }
    // equivalence implies agreement on every sampled pair; a sampled
    // disagreement refutes equivalence
    if (decided) CHECK(sampled);
    if (!sampled) CHECK_FALSE(decided);
  }
}

TEST_CASE("per-agent kernel equality lifts to the Kronecker joint") {
  testgen::Rng rng(2718);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<StochasticKernel> gs, hs;
    const std::size_t agents = testgen::pick(rng, 1, 2);
    for (std::size_t i = 0; i < agents; ++i) {
      const std::size_t n = testgen::pick(rng, 1, 3);
      const StochasticKernel gi = testgen::random_kernel(rng, testgen::pick(rng, 2, 3), n);
      // row-duplication garbles nothing: stacking a repeated row keeps the kernel
      Matrix doubled(gi.rows() + 1, n);
      for (std::size_t r = 0; r < gi.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c) doubled.at(r, c) = gi.at(r, c);
      }
      for (std::size_t c = 0; c < n; ++c) {
        doubled.at(gi.rows(), c) = doubled.at(gi.rows() - 1, c);
        doubled.at(gi.rows() - 1, c) = 0;
      }
      gs.push_back(gi);
      hs.push_back(StochasticKernel(std::move(doubled)));
      REQUIRE(kernel_equivalent(gs.back(), hs.back()));
    }
    CHECK(kernel_equivalent(kronecker_joint(gs), kronecker_joint(hs)));
  }
}
