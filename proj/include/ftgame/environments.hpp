#pragma once

#include <cstdint>

#include "ftgame/game.hpp"

namespace ftgame {

/// Chain with a failure mode: on failure the controller keeps only the
/// actions in `surviving_actions`, so the bequest is the optimal value of
/// the restricted MDP.
struct ActuatorSpec {
  int n_cells = 5;
  double move_success = 0.9;       // remaining mass stays put
  double base_reward = 0.4;        // collected each step in cell 0
  double goal_reward = 1.2;        // collected each step in the last cell
  std::vector<int> surviving_actions = {0};  // 0 = left, 1 = right
  double discount = 0.9;
};

/// Optimal value of the MDP restricted to the `allowed` actions
/// (ignoring the bequest / stopper entirely).
ValueFunction solve_restricted_mdp(const StochasticGame& game,
                                   const std::vector<int>& allowed, double tol,
                                   int max_iter = 1000000);

/// Builds the full-action chain and sets G to the restricted optimal
/// value, so the stopper models an actuator failure at the worst time.
StochasticGame make_actuator_chain(const ActuatorSpec& spec,
                                   double tol = 1e-12);

/// width x height grid, 4 actions (N/S/E/W), `slip` probability mass
/// split across the two lateral moves. G = hazard_bequest on hazard
/// cells and a large positive constant elsewhere, so stopping only bites
/// near hazards. The goal (last cell) is absorbing with goal_reward.
StochasticGame make_hazard_grid(int width, int height,
                                const std::vector<int>& hazard_cells,
                                double hazard_bequest, double goal_reward,
                                double slip, double discount);

/// Seeded dense random game; bequests are scaled by 1/(1 - gamma) so
/// stopping is sometimes but not always optimal.
StochasticGame make_random_game(int n_states, int n_actions,
                                double reward_scale, std::uint64_t seed,
                                double discount = 0.9);

}  // namespace ftgame
