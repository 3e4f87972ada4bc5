#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "ftgame/environments.hpp"
#include "ftgame/game.hpp"
#include "test_util.hpp"

using namespace ftgame;
using namespace ftgame::testutil;

TEST_CASE("validate_game accepts the identity case") {
  CHECK_NOTHROW(validate_game(loop_game(0.0, 0.0, 0.5)));
}

TEST_CASE("validate_game reports bad row sums") {
  auto game = loop_game(0.0, 0.0, 0.5);
  game.transition[0][0][0] = 0.9;
  CHECK_THROWS_WITH_AS(validate_game(game),
                       doctest::Contains("row sum 0.9"),
                       std::invalid_argument);
}

TEST_CASE("validate_game rejects discount 1") {
  auto game = loop_game(0.0, 0.0, 0.5);
  game.discount = 1.0;
  CHECK_THROWS_WITH_AS(validate_game(game),
                       doctest::Contains("discount must be < 1"),
                       std::invalid_argument);
}

TEST_CASE("validate_game rejects non-finite rewards") {
  auto game = loop_game(0.0, 0.0, 0.5);
  game.reward[0][0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_game(game), std::invalid_argument);
}

TEST_CASE("transition_sample follows a degenerate distribution") {
  StochasticGame game;
  game.n_states = 3;
  game.n_actions = 1;
  game.transition = {{{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}}};
  game.reward = {{0.0}, {0.0}, {0.0}};
  game.bequest = {0.0, 0.0, 0.0};
  game.discount = 0.5;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) CHECK(transition_sample(game, 0, 0, rng) == 2);
}

TEST_CASE("transition_sample matches a uniform law") {
  StochasticGame game;
  game.n_states = 4;
  game.n_actions = 1;
  game.transition.assign(
      1, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.25)));
  game.reward.assign(4, {0.0});
  game.bequest.assign(4, 0.0);
  game.discount = 0.5;

  std::mt19937_64 rng(42);
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[transition_sample(game, 0, 0, rng)]++;
  for (int t = 0; t < 4; ++t)
    CHECK(std::abs(counts[t] / static_cast<double>(n) - 0.25) < 0.01);
}

TEST_CASE("transition_sample is reproducible bit-for-bit") {
  auto game = make_random_game(6, 3, 1.0, 11);
  std::mt19937_64 rng_a(123), rng_b(123);
  for (int i = 0; i < 200; ++i) {
    int s = i % game.n_states;
    int a = i % game.n_actions;
    CHECK(transition_sample(game, s, a, rng_a) ==
          transition_sample(game, s, a, rng_b));
  }
}

TEST_CASE("transition_sample rejects bad indices") {
  auto game = loop_game(0.0, 0.0, 0.5);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(transition_sample(game, 0, 3, rng), std::out_of_range);
  CHECK_THROWS_AS(transition_sample(game, 5, 0, rng), std::out_of_range);
}

TEST_CASE("evaluate_pair: stopping everywhere returns the bequest") {
  auto game = two_state_chain();
  auto report = evaluate_pair(game, zero_policy(2), all_stop(2), 1e-12, 100);
  CHECK(report.iterations == 1);
  CHECK(report.value[0] == 0.4);
  CHECK(report.value[1] == 5.0);
}

TEST_CASE("evaluate_pair: never stopping recovers the geometric series") {
  auto game = loop_game(1.0, 0.0, 0.5);
  auto report =
      evaluate_pair(game, zero_policy(1), no_stop(1), 1e-12, 1000000);
  CHECK(report.converged);
  CHECK(report.value[0] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("evaluate_pair on the two-state chain") {
  auto game = two_state_chain();
  StopSet stop = no_stop(2);
  stop.stop[0] = true;
  auto report = evaluate_pair(game, zero_policy(2), stop, 1e-12, 1000000);
  CHECK(report.value[0] == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(report.value[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("evaluate_pair flags non-convergence") {
  auto game = loop_game(1.0, 0.0, 0.99);
  auto report = evaluate_pair(game, zero_policy(1), no_stop(1), 1e-12, 3);
  CHECK_FALSE(report.converged);
  CHECK(report.residual > 1e-12);
}

TEST_CASE("evaluate_pair is monotone in the bequest") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto game = make_random_game(5, 2, 1.0, seed);
    std::mt19937_64 rng(seed + 1000);
    Policy policy;
    policy.action.resize(5);
    StopSet stop;
    stop.stop.resize(5);
    for (int s = 0; s < 5; ++s) {
      policy.action[s] = static_cast<int>(canonical_draw(rng) * 2);
      stop.stop[s] = canonical_draw(rng) < 0.4;
    }
    auto low = evaluate_pair(game, policy, stop, 1e-12, 1000000).value;
    for (int s = 0; s < 5; ++s)
      if (stop.stop[s]) {
        auto raised = game;
        raised.bequest[s] += 0.5;
        auto high = evaluate_pair(raised, policy, stop, 1e-12, 1000000).value;
        for (int t = 0; t < 5; ++t) CHECK(high[t] >= low[t] - 1e-9);
      }
  }
}

TEST_CASE("evaluate_pair with empty stop set equals the linear solve") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto game = make_random_game(6, 1, 1.0, seed);
    auto report =
        evaluate_pair(game, zero_policy(6), no_stop(6), 1e-12, 1000000);

    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(6, 6);
    Eigen::VectorXd r(6);
    for (int s = 0; s < 6; ++s) {
      r(s) = game.reward[s][0];
      for (int t = 0; t < 6; ++t)
        A(s, t) -= game.discount * game.transition[0][s][t];
    }
    Eigen::VectorXd direct = A.partialPivLu().solve(r);
    for (int s = 0; s < 6; ++s)
      CHECK(report.value[s] == doctest::Approx(direct(s)).epsilon(1e-8));
  }
}

TEST_CASE("evaluate_pair supports stochastic policies") {
  auto game = loop_game(0.0, 0.0, 0.5);
  game.n_actions = 2;
  game.transition = {{{1.0}}, {{1.0}}};
  game.reward = {{0.0, 1.0}};
  Policy mixed;
  mixed.probabilities = {{0.5, 0.5}};
  auto report = evaluate_pair(game, mixed, no_stop(1), 1e-12, 1000000);
  CHECK(report.value[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evaluate_random_stoppage: hazard 1 exits immediately") {
  auto game = two_state_chain();
  std::mt19937_64 rng(5);
  auto est = evaluate_random_stoppage(game, zero_policy(2), 0, 1.0, 100, 500,
                                      rng);
  CHECK(est.mean == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(est.stderr_ == doctest::Approx(0.0));
}

TEST_CASE("evaluate_random_stoppage: hazard 0 recovers the series") {
  auto game = loop_game(1.0, 0.0, 0.5);
  std::mt19937_64 rng(5);
  auto est =
      evaluate_random_stoppage(game, zero_policy(1), 0, 0.0, 200, 100, rng);
  CHECK(est.mean == doctest::Approx(2.0).epsilon(1e-9));
}

// Exact expectation of the killed chain by backward recursion:
// W_t(s) = h G(s) + (1-h)(R(s) + gamma sum_s' P W_{t+1}(s')), W_T = G.
static double killed_chain_expectation(const StochasticGame& game,
                                       const Policy& policy, int start,
                                       double hazard, int horizon) {
  std::vector<double> W = game.bequest;
  for (int t = horizon - 1; t >= 0; --t) {
    std::vector<double> next(game.n_states);
    for (int s = 0; s < game.n_states; ++s) {
      int a = policy.action[s];
      double cont = game.reward[s][a];
      double nv = 0.0;
      for (int u = 0; u < game.n_states; ++u)
        nv += game.transition[a][s][u] * W[u];
      cont += game.discount * nv;
      next[s] = hazard * game.bequest[s] + (1.0 - hazard) * cont;
    }
    W = std::move(next);
  }
  return W[start];
}

TEST_CASE("evaluate_random_stoppage matches the killed-chain expectation") {
  auto game = two_state_chain();
  auto policy = zero_policy(2);
  double exact = killed_chain_expectation(game, policy, 0, 0.5, 60);
  std::mt19937_64 rng(9);
  auto est =
      evaluate_random_stoppage(game, policy, 0, 0.5, 60, 200000, rng);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.stderr_);
}

TEST_CASE("evaluate_random_stoppage rejects bad hazard") {
  auto game = loop_game(1.0, 0.0, 0.5);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(
      evaluate_random_stoppage(game, zero_policy(1), 0, 1.5, 10, 10, rng),
      std::invalid_argument);
}
