#include <doctest.h>

#include <stdexcept>

#include "ftgame/environments.hpp"
#include "ftgame/oracle.hpp"
#include "ftgame/solver.hpp"
#include "test_util.hpp"

using namespace ftgame;
using namespace ftgame::testutil;

TEST_CASE("backward_induction horizon 0 returns the bequest") {
  auto game = two_state_chain();
  auto J = backward_induction(game, 0);
  CHECK(J == game.bequest);
}

TEST_CASE("backward_induction one step") {
  auto game = loop_game(1.0, 100.0, 0.5);
  auto J = backward_induction(game, 1);
  CHECK(J[0] == 51.0);  // min(1 + 0.5*100, 100)
}

TEST_CASE("backward_induction converges to the fixed point") {
  auto game = two_state_chain();
  auto J = backward_induction(game, 100);
  CHECK(J[0] == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(J[1] == doctest::Approx(2.0).epsilon(1e-10));
  auto sol = value_iterate(game, 1e-12, 1000000);
  CHECK(sup_norm_diff(J, sol.value) < 1e-9);
}

TEST_CASE("backward_induction respects the tail bound") {
  auto game = make_random_game(4, 2, 1.0, 8);
  auto sol = value_iterate(game, 1e-13, 1000000);
  double max_r = 0.0, max_g = 0.0;
  for (int s = 0; s < 4; ++s) {
    for (int a = 0; a < 2; ++a)
      max_r = std::max(max_r, std::abs(game.reward[s][a]));
    max_g = std::max(max_g, std::abs(game.bequest[s]));
  }
  double c = max_r / (1.0 - game.discount) + max_g;
  for (int n : {5, 10, 20, 40, 80}) {
    double tail = std::pow(game.discount, n) * c / (1.0 - game.discount);
    CHECK(sup_norm_diff(backward_induction(game, n), sol.value) <=
          tail + 1e-9);
  }
}

TEST_CASE("enumerate_minimax on single-strategy games") {
  auto game = loop_game(1.0, 100.0, 0.5);
  auto report = enumerate_minimax(game, 1e-8);
  CHECK(report.gap <= 1e-8);
  CHECK(report.upper_value[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(report.lower_value[0] == doctest::Approx(2.0).epsilon(1e-8));

  auto stopped = loop_game(1.0, 0.0, 0.5);
  report = enumerate_minimax(stopped, 1e-8);
  CHECK(report.upper_value[0] == doctest::Approx(0.0));
  CHECK(report.lower_value[0] == doctest::Approx(0.0));
  CHECK(report.best_stop.stop[0]);
}

TEST_CASE("enumerate_minimax agrees with value iteration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto game = make_random_game(3, 2, 1.0, seed);
    auto report = enumerate_minimax(game, 1e-8);
    auto sol = value_iterate(game, 1e-10, 1000000);
    CHECK(report.gap <= 1e-6);
    CHECK(sup_norm_diff(report.upper_value, sol.value) <= 1e-6);
    CHECK(sup_norm_diff(report.lower_value, sol.value) <= 1e-6);
  }
}

TEST_CASE("enumerate_minimax weak duality holds on every instance") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto game = make_random_game(3, 3, 1.0, seed + 100);
    auto report = enumerate_minimax(game, 1e-8);
    for (int s = 0; s < 3; ++s)
      CHECK(report.upper_value[s] >= report.lower_value[s] - 1e-9);
  }
}

TEST_CASE("enumerate_minimax best pair is self-consistent") {
  auto game = make_random_game(3, 2, 1.0, 77);
  auto report = enumerate_minimax(game, 1e-8);
  auto value = evaluate_pair(game, report.best_policy, report.best_stop,
                             1e-9, 10000000)
                   .value;
  CHECK(sup_norm_diff(value, report.lower_value) <= 1e-8);
}

TEST_CASE("enumerate_minimax refuses oversized instances") {
  auto game = make_random_game(10, 4, 1.0, 1);
  CHECK(enumeration_size(game) == -1);
  CHECK_THROWS_WITH_AS(enumerate_minimax(game, 1e-8),
                       doctest::Contains("too large"), std::invalid_argument);
}

TEST_CASE("best_response_stop extremes") {
  auto game = make_random_game(4, 2, 1.0, 5);
  game.bequest.assign(4, 1e9);
  auto empty = best_response_stop(game, zero_policy(4));
  for (int s = 0; s < 4; ++s) CHECK_FALSE(empty.stop[s]);
  game.bequest.assign(4, -1e9);
  auto full = best_response_stop(game, zero_policy(4));
  for (int s = 0; s < 4; ++s) CHECK(full.stop[s]);
}

TEST_CASE("best_response_stop matches exhaustive enumeration") {
  auto game = make_random_game(4, 2, 1.0, 12);
  Policy policy;
  policy.action = {0, 1, 0, 1};
  auto br = best_response_stop(game, policy);
  auto br_value = evaluate_pair(game, policy, br, 1e-12, 10000000).value;

  for (int code = 0; code < 16; ++code) {
    StopSet stop;
    stop.stop.resize(4);
    for (int s = 0; s < 4; ++s) stop.stop[s] = (code >> s) & 1;
    auto value = evaluate_pair(game, policy, stop, 1e-12, 10000000).value;
    for (int s = 0; s < 4; ++s) CHECK(br_value[s] <= value[s] + 1e-9);
  }
}
