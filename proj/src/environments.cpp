#include "ftgame/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ftgame/solver.hpp"

namespace ftgame {

ValueFunction solve_restricted_mdp(const StochasticGame& game,
                                   const std::vector<int>& allowed, double tol,
                                   int max_iter) {
  if (allowed.empty()) throw std::invalid_argument("allowed set is empty");
  for (int a : allowed)
    if (a < 0 || a >= game.n_actions)
      throw std::out_of_range("allowed action out of range");
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");

  ValueFunction V(game.n_states, 0.0);
  double residual = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    ValueFunction next(game.n_states);
    for (int s = 0; s < game.n_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a : allowed) {
        const auto& row = game.transition[a][s];
        double nv = 0.0;
        for (int t = 0; t < game.n_states; ++t) nv += row[t] * V[t];
        best = std::max(best, game.reward[s][a] + game.discount * nv);
      }
      next[s] = best;
    }
    residual = sup_norm_diff(next, V);
    V = std::move(next);
    if (residual <= tol) break;
  }
  if (residual > tol)
    throw std::runtime_error("restricted MDP solve did not converge");
  return V;
}

namespace {

StochasticGame actuator_chain_base(const ActuatorSpec& spec) {
  if (spec.n_cells < 2)
    throw std::invalid_argument("actuator chain needs at least 2 cells");
  if (spec.move_success < 0.0 || spec.move_success > 1.0)
    throw std::invalid_argument("move_success must lie in [0, 1]");

  const int n = spec.n_cells;
  StochasticGame game;
  game.n_states = n;
  game.n_actions = 2;  // 0 = left, 1 = right
  game.discount = spec.discount;
  game.transition.assign(
      2, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  game.reward.assign(n, std::vector<double>(2, 0.0));
  game.bequest.assign(n, 0.0);

  const double p = spec.move_success;
  for (int s = 0; s < n; ++s) {
    int left = std::max(s - 1, 0);
    int right = std::min(s + 1, n - 1);
    game.transition[0][s][left] += p;
    game.transition[0][s][s] += 1.0 - p;
    game.transition[1][s][right] += p;
    game.transition[1][s][s] += 1.0 - p;
    double step_reward = 0.0;
    if (s == 0) step_reward = spec.base_reward;
    if (s == n - 1) step_reward = spec.goal_reward;
    game.reward[s][0] = step_reward;
    game.reward[s][1] = step_reward;
  }
  return game;
}

}  // namespace

StochasticGame make_actuator_chain(const ActuatorSpec& spec, double tol) {
  if (spec.surviving_actions.empty())
    throw std::invalid_argument("surviving action set is empty");
  if (static_cast<int>(spec.surviving_actions.size()) >= 2)
    throw std::invalid_argument(
        "surviving actions must be a strict subset of {left, right}");

  StochasticGame game = actuator_chain_base(spec);
  game.bequest = solve_restricted_mdp(game, spec.surviving_actions, tol);
  validate_game(game);
  return game;
}

StochasticGame make_hazard_grid(int width, int height,
                                const std::vector<int>& hazard_cells,
                                double hazard_bequest, double goal_reward,
                                double slip, double discount) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("grid dimensions must be >= 1");
  if (slip < 0.0 || slip > 1.0)
    throw std::invalid_argument("slip must lie in [0, 1]");

  const int n = width * height;
  const int goal = n - 1;
  for (int c : hazard_cells)
    if (c < 0 || c >= n) throw std::out_of_range("hazard cell out of range");

  StochasticGame game;
  game.n_states = n;
  game.n_actions = 4;  // N, S, E, W
  game.discount = discount;
  game.transition.assign(
      4, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  game.reward.assign(n, std::vector<double>(4, 0.0));
  game.bequest.assign(n, 1e9);

  auto clamp_move = [&](int s, int dx, int dy) {
    int x = s % width, y = s / width;
    x = std::clamp(x + dx, 0, width - 1);
    y = std::clamp(y + dy, 0, height - 1);
    return y * width + x;
  };
  // action -> (dx, dy); laterals are the two perpendicular moves.
  const int dx[4] = {0, 0, 1, -1};
  const int dy[4] = {-1, 1, 0, 0};

  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < 4; ++a) {
      if (s == goal) {
        game.transition[a][s][s] = 1.0;
        game.reward[s][a] = goal_reward;
        continue;
      }
      game.transition[a][s][clamp_move(s, dx[a], dy[a])] += 1.0 - slip;
      // Lateral slips: swap the axis of motion.
      int la = a < 2 ? 2 : 0;
      game.transition[a][s][clamp_move(s, dx[la], dy[la])] += slip / 2.0;
      game.transition[a][s][clamp_move(s, -dx[la], -dy[la])] += slip / 2.0;
    }
  }
  for (int c : hazard_cells) game.bequest[c] = hazard_bequest;

  validate_game(game);
  return game;
}

StochasticGame make_random_game(int n_states, int n_actions,
                                double reward_scale, std::uint64_t seed,
                                double discount) {
  if (n_states < 1 || n_actions < 1)
    throw std::invalid_argument("sizes must be >= 1");
  if (discount < 0.0 || discount >= 1.0)
    throw std::invalid_argument("discount must lie in [0, 1)");

  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * canonical_draw(rng);
  };

  StochasticGame game;
  game.n_states = n_states;
  game.n_actions = n_actions;
  game.discount = discount;
  game.transition.assign(n_actions,
                         std::vector<std::vector<double>>(
                             n_states, std::vector<double>(n_states, 0.0)));
  game.reward.assign(n_states, std::vector<double>(n_actions, 0.0));
  game.bequest.assign(n_states, 0.0);

  for (int a = 0; a < n_actions; ++a)
    for (int s = 0; s < n_states; ++s) {
      auto& row = game.transition[a][s];
      double sum = 0.0;
      for (int t = 0; t < n_states; ++t) {
        // Positive simplex draw: -log(U) is Exp(1), normalized below.
        row[t] = -std::log(1.0 - canonical_draw(rng));
        sum += row[t];
      }
      for (int t = 0; t < n_states; ++t) row[t] /= sum;
    }

  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a)
      game.reward[s][a] = uniform(-reward_scale, reward_scale);

  // Bequests comparable to achievable continuation values so the stop
  // region is neither empty nor full almost surely.
  const double g_scale = reward_scale / (1.0 - discount);
  for (int s = 0; s < n_states; ++s)
    game.bequest[s] = uniform(-g_scale, g_scale);

  validate_game(game);
  return game;
}

}  // namespace ftgame
