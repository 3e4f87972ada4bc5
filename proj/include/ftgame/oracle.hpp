#pragma once

#include "ftgame/game.hpp"
#include "ftgame/solver.hpp"

namespace ftgame {

/// Brute-force minimax certificate over deterministic stationary
/// strategies on tiny instances.
struct MinimaxReport {
  ValueFunction upper_value;  // min over stop regions of max over policies
  ValueFunction lower_value;  // max over policies of min over stop regions
  double gap = 0.0;           // sup-norm of (upper - lower)
  Policy best_policy;
  StopSet best_stop;
};

/// T^horizon G: finite-horizon minimax backward induction from the bequest.
ValueFunction backward_induction(const StochasticGame& game, int horizon);

/// Exhaustive enumeration of all |A|^|S| deterministic policies against
/// all 2^|S| stop regions. Refuses instances with more than 10^6 pair
/// evaluations.
MinimaxReport enumerate_minimax(const StochasticGame& game, double eval_tol);

/// Number of (policy, region) pairs, or -1 on overflow.
long long enumeration_size(const StochasticGame& game);

/// Stopper best response to a fixed controller policy: the minimizing
/// stop region of the induced one-player stopping problem.
StopSet best_response_stop(const StochasticGame& game, const Policy& policy,
                           double tol = 1e-12, int max_iter = 1000000);

}  // namespace ftgame
