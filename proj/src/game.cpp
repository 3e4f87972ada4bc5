#include "ftgame/game.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ftgame {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void validate_game(const StochasticGame& game, double prob_tol) {
  require(game.n_states >= 1, "n_states must be positive");
  require(game.n_actions >= 1, "n_actions must be positive");
  require(game.discount >= 0.0, "discount must be >= 0");
  require(game.discount < 1.0, "discount must be < 1");

  require(static_cast<int>(game.transition.size()) == game.n_actions,
          "transition must have n_actions outer entries");
  for (int a = 0; a < game.n_actions; ++a) {
    require(static_cast<int>(game.transition[a].size()) == game.n_states,
            "transition[" + std::to_string(a) + "] must have n_states rows");
    for (int s = 0; s < game.n_states; ++s) {
      const auto& row = game.transition[a][s];
      require(static_cast<int>(row.size()) == game.n_states,
              "transition row (a=" + std::to_string(a) +
                  ", s=" + std::to_string(s) + ") has wrong length");
      double sum = 0.0;
      for (double p : row) {
        require(std::isfinite(p) && p >= 0.0,
                "transition entry < 0 or non-finite at (a=" +
                    std::to_string(a) + ", s=" + std::to_string(s) + ")");
        sum += p;
      }
      require(std::abs(sum - 1.0) <= prob_tol,
              "transition row sum " + std::to_string(sum) + " != 1 at (a=" +
                  std::to_string(a) + ", s=" + std::to_string(s) + ")");
    }
  }

  require(static_cast<int>(game.reward.size()) == game.n_states,
          "reward must have n_states rows");
  for (int s = 0; s < game.n_states; ++s) {
    require(static_cast<int>(game.reward[s].size()) == game.n_actions,
            "reward row s=" + std::to_string(s) + " has wrong length");
    for (double r : game.reward[s])
      require(std::isfinite(r),
              "reward non-finite at s=" + std::to_string(s));
  }

  require(static_cast<int>(game.bequest.size()) == game.n_states,
          "bequest must have n_states entries");
  for (int s = 0; s < game.n_states; ++s)
    require(std::isfinite(game.bequest[s]),
            "bequest non-finite at s=" + std::to_string(s));
}

void validate_policy(const StochasticGame& game, const Policy& policy) {
  if (policy.stochastic()) {
    require(static_cast<int>(policy.probabilities.size()) == game.n_states,
            "policy must have n_states rows");
    for (int s = 0; s < game.n_states; ++s) {
      const auto& row = policy.probabilities[s];
      require(static_cast<int>(row.size()) == game.n_actions,
              "policy row s=" + std::to_string(s) + " has wrong length");
      double sum = 0.0;
      for (double p : row) {
        require(std::isfinite(p) && p >= 0.0,
                "policy probability < 0 at s=" + std::to_string(s));
        sum += p;
      }
      require(std::abs(sum - 1.0) <= 1e-12,
              "policy row sum " + std::to_string(sum) +
                  " != 1 at s=" + std::to_string(s));
    }
  } else {
    require(static_cast<int>(policy.action.size()) == game.n_states,
            "policy must have n_states action entries");
    for (int s = 0; s < game.n_states; ++s)
      require(policy.action[s] >= 0 && policy.action[s] < game.n_actions,
              "policy action out of range at s=" + std::to_string(s));
  }
}

double canonical_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int transition_sample(const StochasticGame& game, int s, int a,
                      std::mt19937_64& rng) {
  if (a < 0 || a >= game.n_actions)
    throw std::out_of_range("action index out of range");
  if (s < 0 || s >= game.n_states)
    throw std::out_of_range("state index out of range");
  const auto& row = game.transition[a][s];
  double u = canonical_draw(rng);
  double acc = 0.0;
  for (int t = 0; t < game.n_states; ++t) {
    acc += row[t];
    if (u < acc) return t;
  }
  // Row sums to 1 up to rounding; fall back to the last positive entry.
  for (int t = game.n_states - 1; t >= 0; --t)
    if (row[t] > 0.0) return t;
  return game.n_states - 1;
}

int sample_action(const Policy& policy, int s, std::mt19937_64& rng) {
  if (!policy.stochastic()) return policy.action[s];
  const auto& row = policy.probabilities[s];
  double u = canonical_draw(rng);
  double acc = 0.0;
  for (int a = 0; a < static_cast<int>(row.size()); ++a) {
    acc += row[a];
    if (u < acc) return a;
  }
  for (int a = static_cast<int>(row.size()) - 1; a >= 0; --a)
    if (row[a] > 0.0) return a;
  return static_cast<int>(row.size()) - 1;
}

double sup_norm_diff(const ValueFunction& a, const ValueFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace {

// Expected one-step reward and next-value under the policy at s.
double policy_backup(const StochasticGame& game, const Policy& policy,
                     const ValueFunction& J, int s) {
  auto action_backup = [&](int a) {
    double v = game.reward[s][a];
    const auto& row = game.transition[a][s];
    double next = 0.0;
    for (int t = 0; t < game.n_states; ++t) next += row[t] * J[t];
    return v + game.discount * next;
  };
  if (!policy.stochastic()) return action_backup(policy.action[s]);
  double v = 0.0;
  for (int a = 0; a < game.n_actions; ++a) {
    double p = policy.probabilities[s][a];
    if (p > 0.0) v += p * action_backup(a);
  }
  return v;
}

}  // namespace

EvaluationReport evaluate_pair(const StochasticGame& game,
                               const Policy& policy, const StopSet& stop,
                               double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  if (static_cast<int>(stop.stop.size()) != game.n_states)
    throw std::invalid_argument("stop set has wrong length");
  validate_policy(game, policy);

  EvaluationReport report;
  ValueFunction J(game.n_states, 0.0);
  for (int s = 0; s < game.n_states; ++s)
    if (stop.stop[s]) J[s] = game.bequest[s];

  ValueFunction next(game.n_states, 0.0);
  for (int it = 1; it <= max_iter; ++it) {
    for (int s = 0; s < game.n_states; ++s)
      next[s] = stop.stop[s] ? game.bequest[s]
                             : policy_backup(game, policy, J, s);
    report.residual = sup_norm_diff(next, J);
    J.swap(next);
    report.iterations = it;
    if (report.residual <= tol) break;
  }
  report.converged = report.residual <= tol;
  report.value = std::move(J);
  return report;
}

RolloutEstimate evaluate_random_stoppage(const StochasticGame& game,
                                         const Policy& policy, int start_state,
                                         double hazard, int horizon,
                                         int n_rollouts,
                                         std::mt19937_64& rng) {
  if (hazard < 0.0 || hazard > 1.0)
    throw std::invalid_argument("hazard must lie in [0, 1]");
  if (n_rollouts < 1) throw std::invalid_argument("n_rollouts must be >= 1");
  if (start_state < 0 || start_state >= game.n_states)
    throw std::out_of_range("start state out of range");
  validate_policy(game, policy);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n_rollouts; ++i) {
    int s = start_state;
    double payoff = 0.0;
    double disc = 1.0;
    for (int t = 0;; ++t) {
      bool exits = t >= horizon || (hazard > 0.0 && canonical_draw(rng) < hazard);
      if (exits) {
        payoff += disc * game.bequest[s];
        break;
      }
      int a = sample_action(policy, s, rng);
      payoff += disc * game.reward[s][a];
      s = transition_sample(game, s, a, rng);
      disc *= game.discount;
    }
    sum += payoff;
    sum_sq += payoff * payoff;
  }
  RolloutEstimate est;
  est.mean = sum / n_rollouts;
  if (n_rollouts > 1) {
    double var = (sum_sq - sum * sum / n_rollouts) / (n_rollouts - 1);
    est.stderr_ = std::sqrt(std::max(var, 0.0) / n_rollouts);
  }
  return est;
}

}  // namespace ftgame
