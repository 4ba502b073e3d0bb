#include <doctest.h>

#include <memory>

#include "mechkernel/errors.hpp"
#include "mechkernel/revelation.hpp"
#include "support/generators.hpp"

using namespace mechkernel;
using testgen::mat;
using testgen::vec;

namespace {

// Single buyer reporting a type; trade happens only on the high report.
std::shared_ptr<const GameInstance> posted_game() {
  return std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{{"low", "high"}},
      std::vector<std::vector<std::string>>{{"say_low", "say_high"}},
      std::vector<std::string>{"no_trade", "trade"},
      std::vector<Matrix>{mat(2, 2, {"0", "0", "-1/2", "1/2"})},
      mat(2, 2, {"0", "0", "1/2", "1/2"}));
}

AugmentedMechanism truthful_posted() {
  auto game = posted_game();
  StochasticKernel omega(mat(2, 2, {"1", "0", "0", "1"}), game->outcome_space,
                         game->joint_message_labels());
  StochasticKernel sigma(Matrix::identity(2), game->message_spaces[0], game->type_spaces[0]);
  return AugmentedMechanism(game, omega, {sigma});
}

}  // namespace

TEST_CASE("mechanism constructor validates shapes") {
  auto game = posted_game();
  StochasticKernel omega(mat(2, 2, {"1", "0", "0", "1"}));
  CHECK_THROWS_AS(AugmentedMechanism(game, omega, {}), DimensionMismatch);
  StochasticKernel bad_sigma(Matrix::identity(3));
  CHECK_THROWS_AS(AugmentedMechanism(game, omega, {bad_sigma}), DimensionMismatch);
}

TEST_CASE("induced allocation composes outcome kernel with the joint strategy") {
  const AugmentedMechanism am = truthful_posted();
  const StochasticKernel delta = induced_allocation(am);
  CHECK(delta.matrix() == Matrix::identity(2));
  CHECK(delta.row_labels() == std::vector<std::string>{"no_trade", "trade"});
}

TEST_CASE("dominant strategy equilibrium detected and violations reported") {
  const AugmentedMechanism truthful = truthful_posted();
  CHECK(is_dominant_strategy_eq(truthful).holds);
  CHECK(is_ex_post_eq(truthful).holds);

  // flip the strategy: low claims high and vice versa; both types deviate
  auto game = posted_game();
  StochasticKernel omega(mat(2, 2, {"1", "0", "0", "1"}), game->outcome_space,
                         game->joint_message_labels());
  StochasticKernel flipped(mat(2, 2, {"0", "1", "1", "0"}), game->message_spaces[0],
                           game->type_spaces[0]);
  const AugmentedMechanism bad(game, omega, {flipped});
  const EquilibriumReport report = is_dominant_strategy_eq(bad);
  CHECK_FALSE(report.holds);
  REQUIRE(report.violations.size() == 2);
  CHECK(report.violations[0].agent == 0);
  CHECK(report.violations[0].type_profile == std::vector<std::size_t>{0});
  CHECK(report.violations[0].deviation == 0);  // low should say low
  CHECK_FALSE(report.truncated);
  CHECK_FALSE(is_ex_post_eq(bad).holds);
}

TEST_CASE("violation list truncates at the cap") {
  // agent 0's payoff increases in the outcome index, but it always plays the
  // first message; every (type, higher message, rival message) pair violates
  auto game = std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{testgen::tagged_labels("t", 4),
                                            testgen::tagged_labels("s", 1)},
      std::vector<std::vector<std::string>>{testgen::tagged_labels("m", 6),
                                            testgen::tagged_labels("w", 6)},
      testgen::tagged_labels("o", 6),
      std::vector<Matrix>{[] {
                            Matrix u(6, 4);
                            for (std::size_t o = 0; o < 6; ++o) {
                              for (std::size_t t = 0; t < 4; ++t) {
                                u.at(o, t) = Rational(static_cast<long>(o));
                              }
                            }
                            return u;
                          }(),
                          Matrix(6, 4)},
      Matrix(6, 4));
  Matrix omega_mat(6, 36);
  for (std::size_t m0 = 0; m0 < 6; ++m0) {
    for (std::size_t m1 = 0; m1 < 6; ++m1) omega_mat.at(m0, m0 * 6 + m1) = 1;
  }
  StochasticKernel omega(std::move(omega_mat));
  std::vector<StochasticKernel> strategies{StochasticKernel::pooling(6, 4, 0),
                                           StochasticKernel::pooling(6, 1, 0)};
  const AugmentedMechanism am(game, omega, strategies);
  const EquilibriumReport report = is_dominant_strategy_eq(am);
  CHECK_FALSE(report.holds);
  CHECK(report.truncated);
  CHECK(report.violations.size() == kViolationCap);
}

TEST_CASE("deterministic representation merges message fibers") {
  auto game = std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{{"t0", "t1", "t2"}},
      std::vector<std::vector<std::string>>{{"a", "b"}},
      std::vector<std::string>{"o0", "o1"},
      std::vector<Matrix>{mat(2, 3, {"1", "0", "0", "0", "1", "1"})},
      mat(2, 3, {"1", "0", "0", "0", "1", "1"}));
  StochasticKernel omega(Matrix::identity(2), game->outcome_space,
                         game->joint_message_labels());
  // t0 and t2 send a, t1 sends b
  StochasticKernel sigma(mat(2, 3, {"1", "0", "1", "0", "1", "0"}), game->message_spaces[0],
                         game->type_spaces[0]);
  const AugmentedMechanism am(game, omega, {sigma});
  const FictitiousDirect fd = represent_deterministic(am);
  CHECK(fd.strong_filter);
  REQUIRE(fd.filters.size() == 1);
  // lowest-index representative: t2 maps onto t0
  CHECK(fd.filters[0].matrix() == mat(3, 3, {"1", "0", "1", "0", "1", "0", "0", "0", "0"}));
  CHECK(compound(fd.delta, fd.filters[0]).matrix() == fd.delta.matrix());
  CHECK(check_equivalence(am, fd));

  // stochastic mechanisms are rejected
  StochasticKernel mixing(mat(2, 3, {"1/2", "0", "1", "1/2", "1", "0"}),
                          game->message_spaces[0], game->type_spaces[0]);
  CHECK_THROWS_AS(represent_deterministic(AugmentedMechanism(game, omega, {mixing})),
                  InvalidInput);
}

TEST_CASE("weak filter case 1: fewer messages than types embeds the strategy") {
  auto game = std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{{"t0", "t1", "t2"}},
      std::vector<std::vector<std::string>>{{"a", "b"}},
      std::vector<std::string>{"o0", "o1"},
      std::vector<Matrix>{mat(2, 3, {"1", "1", "0", "0", "0", "1"})},
      mat(2, 3, {"1", "1", "0", "0", "0", "1"}));
  StochasticKernel omega(Matrix::identity(2), game->outcome_space,
                         game->joint_message_labels());
  StochasticKernel sigma(mat(2, 3, {"1", "1", "0", "0", "0", "1"}), game->message_spaces[0],
                         game->type_spaces[0]);
  const AugmentedMechanism am(game, omega, {sigma});
  const FictitiousDirect fd = synthesize_weak_filter(am);
  CHECK_FALSE(fd.strong_filter);
  CHECK(fd.filters[0].matrix() ==
        mat(3, 3, {"1", "1", "0", "0", "0", "1", "0", "0", "0"}));
  CHECK(kernel_equivalent(fd.filters[0], sigma));
  CHECK(check_equivalence(am, fd));
  REQUIRE(fd.weak_certificate.has_value());
  CHECK((*fd.weak_certificate)[0] == sigma);
}

TEST_CASE("weak filter case 2: full-rank strategy yields the identity filter") {
  auto game = std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{{"t0", "t1"}},
      std::vector<std::vector<std::string>>{{"a", "b", "c"}},
      std::vector<std::string>{"o0"}, std::vector<Matrix>{Matrix(1, 2)}, Matrix(1, 2));
  StochasticKernel omega(mat(1, 3, {"1", "1", "1"}), game->outcome_space,
                         game->joint_message_labels());
  StochasticKernel sigma(mat(3, 2, {"1/2", "0", "1/2", "1/2", "0", "1/2"}),
                         game->message_spaces[0], game->type_spaces[0]);
  const AugmentedMechanism am(game, omega, {sigma});
  const FictitiousDirect fd = synthesize_weak_filter(am);
  CHECK(fd.filters[0].matrix() == Matrix::identity(2));
  CHECK(check_equivalence(am, fd));
}

TEST_CASE("weak filter case 3: dependent rows fold into the last filter row") {
  auto game = std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{{"t0", "t1"}},
      std::vector<std::vector<std::string>>{{"a", "b", "c"}},
      std::vector<std::string>{"o0"}, std::vector<Matrix>{Matrix(1, 2)}, Matrix(1, 2));
  StochasticKernel omega(mat(1, 3, {"1", "1", "1"}), game->outcome_space,
                         game->joint_message_labels());
  StochasticKernel sigma(mat(3, 2, {"1/2", "1/2", "1/4", "1/4", "1/4", "1/4"}),
                         game->message_spaces[0], game->type_spaces[0]);
  const AugmentedMechanism am(game, omega, {sigma});
  const FictitiousDirect fd = synthesize_weak_filter(am);
  CHECK(fd.filters[0].matrix() == mat(2, 2, {"1/2", "1/2", "1/2", "1/2"}));
  CHECK(kernel_equivalent(fd.filters[0], sigma));
  CHECK(check_equivalence(am, fd));
}

TEST_CASE("weak synthesis round-trips on random mechanisms") {
  testgen::Rng rng(501);
  for (int trial = 0; trial < 40; ++trial) {
    testgen::MechanismShape shape;
    shape.agents = testgen::pick(rng, 1, 2);
    shape.max_types = 3;
    shape.max_messages = 4;
    const AugmentedMechanism am = testgen::random_mechanism(rng, shape);
    const FictitiousDirect fd = synthesize_weak_filter(am);
    for (std::size_t i = 0; i < am.strategies.size(); ++i) {
      CHECK(kernel_equivalent(fd.filters[i], am.strategies[i]));
    }
    CHECK(check_equivalence(am, fd));
  }
}

TEST_CASE("dominance implies ex post robustness on random mechanisms") {
  testgen::Rng rng(4242);
  int dominant_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    testgen::MechanismShape shape;
    shape.agents = testgen::pick(rng, 1, 2);
    shape.max_types = 2;
    shape.max_messages = 2;
    shape.max_outcomes = trial % 2 == 0 ? 1 : 2;  // constant games are trivially dominant
    const AugmentedMechanism am = testgen::random_mechanism(rng, shape);
    const EquilibriumReport dom = is_dominant_strategy_eq(am);
    if (dom.holds) {
      ++dominant_seen;
      CHECK(is_ex_post_eq(am).holds);
    }
  }
  CHECK(dominant_seen > 5);
}

TEST_CASE("strong representation search outcomes") {
  // ker sigma = span{(1,1,-2)}: no deterministic filter matches, but a
  // half-integer one does
  auto game = std::make_shared<GameInstance>(
      std::vector<std::vector<std::string>>{{"t0", "t1", "t2"}},
      std::vector<std::vector<std::string>>{{"a", "b"}},
      std::vector<std::string>{"o0", "o1"},
      std::vector<Matrix>{mat(2, 3, {"1", "0", "0", "0", "1", "1"})},
      mat(2, 3, {"1", "0", "0", "0", "1", "1"}));
  StochasticKernel omega(Matrix::identity(2), game->outcome_space,
                         game->joint_message_labels());
  StochasticKernel sigma(mat(2, 3, {"1", "0", "1/2", "0", "1", "1/2"}),
                         game->message_spaces[0], game->type_spaces[0]);
  const AugmentedMechanism am(game, omega, {sigma});

  const StrongSearchResult deterministic_only = search_strong_representation(am, 100000, 1);
  CHECK(deterministic_only.outcome == SearchOutcome::ClassExhausted);
  CHECK(deterministic_only.candidates_tried == 27);

  const StrongSearchResult with_halves = search_strong_representation(am, 100000, 2);
  REQUIRE(with_halves.outcome == SearchOutcome::Found);
  REQUIRE(with_halves.witness.has_value());
  const FictitiousDirect& fd = *with_halves.witness;
  CHECK(fd.strong_filter);
  CHECK(kernel_equivalent(fd.filters[0], sigma));
  CHECK(blackwell_more_informative(fd.filters[0], fd.delta).has_value());

  const StrongSearchResult starved = search_strong_representation(am, 1, 2);
  CHECK(starved.outcome == SearchOutcome::BudgetExhausted);
  CHECK(starved.candidates_tried == 1);
}
