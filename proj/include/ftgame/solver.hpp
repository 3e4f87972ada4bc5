#pragma once

#include "ftgame/game.hpp"

namespace ftgame {

/// Equilibrium output of the controller-stopper game.
struct GameSolution {
  ValueFunction value;    // J*: min(continuation, G) fixed point
  ValueFunction q_value;  // Q*: continuation value, fixed point of F
  Policy policy;          // controller best response (greedy, ties -> lowest)
  StopSet stop_set;       // stop where G <= continuation (ties stop)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// max_a [ R[s][a] + gamma * sum_s' P[a][s][s'] J[s'] ].
double continuation_value(const StochasticGame& game, const ValueFunction& J,
                          int s);

/// One sweep of the game operator: (TJ)(s) = min{continuation(s), G(s)}.
ValueFunction bellman_apply(const StochasticGame& game, const ValueFunction& J);

/// Iterates T to its unique fixed point and extracts policy, stop set and
/// continuation value from the final iterate.
GameSolution value_iterate(const StochasticGame& game, const ValueFunction& J0,
                           double tol, int max_iter);

GameSolution value_iterate(const StochasticGame& game, double tol,
                           int max_iter);

/// Greedy controller policy against J; argmax ties break to the lowest
/// action index.
Policy extract_policy(const StochasticGame& game, const ValueFunction& J);

/// Stop region {s : G(s) <= continuation(s)}; ties stop.
StopSet extract_stop_set(const StochasticGame& game, const ValueFunction& J);

/// (FQ)(s) = max_a [ R[s][a] + gamma * sum_s' P[a][s][s'] min(G, Q)(s') ].
ValueFunction apply_F(const StochasticGame& game, const ValueFunction& Q);

/// Fixed point of F (a gamma-contraction); min(Q*, G) = J*.
ValueFunction solve_Q(const StochasticGame& game, double tol, int max_iter);

}  // namespace ftgame
