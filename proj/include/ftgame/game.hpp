#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ftgame {

/// Real-valued function over states. Indexed by state id.
using ValueFunction = std::vector<double>;

/// Finite zero-sum game between a controller (picks actions) and a
/// stopper (picks when to halt). Stopping pays the bequest G.
struct StochasticGame {
  int n_states = 0;
  int n_actions = 0;
  std::vector<std::vector<std::vector<double>>> transition;  // [a][s][s']
  std::vector<std::vector<double>> reward;                   // [s][a]
  std::vector<double> bequest;                               // G[s]
  double discount = 0.0;                                     // gamma in [0,1)
};

/// Markov policy for the controller. Deterministic policies store one
/// action index per state; stochastic policies additionally carry the
/// full probability rows (rows must sum to 1).
struct Policy {
  std::vector<int> action;
  std::vector<std::vector<double>> probabilities;  // empty for deterministic

  bool stochastic() const { return !probabilities.empty(); }
};

/// Stationary stopping rule, represented by its stop region. The induced
/// stopping time is the first hit of the region (including t = 0).
struct StopSet {
  std::vector<bool> stop;
};

struct EvaluationReport {
  ValueFunction value;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Throws std::invalid_argument naming the first violated model invariant
/// (row sums, negative probabilities, non-finite rewards, discount range).
/// `prob_tol` is the allowed deviation of each transition row sum from 1.
void validate_game(const StochasticGame& game, double prob_tol = 1e-12);

void validate_policy(const StochasticGame& game, const Policy& policy);

/// Draws s' ~ P[a][s][.]. Deterministic given the rng state.
int transition_sample(const StochasticGame& game, int s, int a,
                      std::mt19937_64& rng);

/// Uniform double in [0,1) derived from the top 53 bits of the generator,
/// so sampled indices do not depend on the standard library's
/// distribution implementation.
double canonical_draw(std::mt19937_64& rng);

/// Exact value of a fixed (policy, stop region) pair by fixed-point
/// iteration of  J(s) = G(s) if stop[s], else sum_a pi(a|s) (R + gamma P J).
EvaluationReport evaluate_pair(const StochasticGame& game,
                               const Policy& policy, const StopSet& stop,
                               double tol, int max_iter);

/// Monte Carlo estimate of the random-exit objective: the process is
/// killed with probability `hazard` at each step (geometric exit time)
/// and truncated at `horizon`, paying the bequest on exit.
struct RolloutEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

RolloutEstimate evaluate_random_stoppage(const StochasticGame& game,
                                         const Policy& policy, int start_state,
                                         double hazard, int horizon,
                                         int n_rollouts, std::mt19937_64& rng);

int sample_action(const Policy& policy, int s, std::mt19937_64& rng);

double sup_norm_diff(const ValueFunction& a, const ValueFunction& b);

}  // namespace ftgame
