#include "ftgame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ftgame {

double continuation_value(const StochasticGame& game, const ValueFunction& J,
                          int s) {
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < game.n_actions; ++a) {
    const auto& row = game.transition[a][s];
    double next = 0.0;
    for (int t = 0; t < game.n_states; ++t) next += row[t] * J[t];
    best = std::max(best, game.reward[s][a] + game.discount * next);
  }
  return best;
}

ValueFunction bellman_apply(const StochasticGame& game,
                            const ValueFunction& J) {
  ValueFunction out(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    out[s] = std::min(continuation_value(game, J, s), game.bequest[s]);
  return out;
}

Policy extract_policy(const StochasticGame& game, const ValueFunction& J) {
  Policy policy;
  policy.action.resize(game.n_states, 0);
  for (int s = 0; s < game.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    int best_a = 0;
    for (int a = 0; a < game.n_actions; ++a) {
      const auto& row = game.transition[a][s];
      double next = 0.0;
      for (int t = 0; t < game.n_states; ++t) next += row[t] * J[t];
      double v = game.reward[s][a] + game.discount * next;
      if (v > best) {
        best = v;
        best_a = a;
      }
    }
    policy.action[s] = best_a;
  }
  return policy;
}

StopSet extract_stop_set(const StochasticGame& game, const ValueFunction& J) {
  StopSet stop;
  stop.stop.resize(game.n_states, false);
  for (int s = 0; s < game.n_states; ++s)
    stop.stop[s] = game.bequest[s] <= continuation_value(game, J, s);
  return stop;
}

GameSolution value_iterate(const StochasticGame& game, const ValueFunction& J0,
                           double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  if (static_cast<int>(J0.size()) != game.n_states)
    throw std::invalid_argument("J0 has wrong length");

  GameSolution sol;
  ValueFunction J = J0;
  for (int it = 1; it <= max_iter; ++it) {
    ValueFunction next = bellman_apply(game, J);
    sol.residual = sup_norm_diff(next, J);
    J = std::move(next);
    sol.iterations = it;
    if (sol.residual <= tol) break;
  }
  sol.converged = sol.residual <= tol;
  sol.policy = extract_policy(game, J);
  sol.stop_set = extract_stop_set(game, J);
  // Report one extra application of T so value = min(q_value, G) holds
  // exactly, not just within the residual.
  sol.q_value.resize(game.n_states);
  sol.value.resize(game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    sol.q_value[s] = continuation_value(game, J, s);
    sol.value[s] = std::min(sol.q_value[s], game.bequest[s]);
  }
  return sol;
}

GameSolution value_iterate(const StochasticGame& game, double tol,
                           int max_iter) {
  return value_iterate(game, ValueFunction(game.n_states, 0.0), tol, max_iter);
}

ValueFunction apply_F(const StochasticGame& game, const ValueFunction& Q) {
  ValueFunction clipped(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    clipped[s] = std::min(game.bequest[s], Q[s]);
  ValueFunction out(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    out[s] = continuation_value(game, clipped, s);
  return out;
}

ValueFunction solve_Q(const StochasticGame& game, double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  ValueFunction Q(game.n_states, 0.0);
  for (int it = 1; it <= max_iter; ++it) {
    ValueFunction next = apply_F(game, Q);
    double residual = sup_norm_diff(next, Q);
    Q = std::move(next);
    if (residual <= tol) break;
  }
  return Q;
}

}  // namespace ftgame
