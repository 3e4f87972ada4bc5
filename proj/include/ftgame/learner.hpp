#pragma once

#include <cstdint>
#include <string>

#include "ftgame/game.hpp"

namespace ftgame {

/// Linear basis over states; phi[s] is the feature row of state s.
struct FeatureMap {
  int n_features = 0;
  std::vector<std::vector<double>> phi;  // [s][k]

  std::vector<double> row(int s) const { return phi.at(s); }
};

/// Builds a feature map from a textual spec: "onehot", "constant", or
/// "poly:k" (powers 0..k of the state index normalized to [0,1]).
FeatureMap make_features(const std::string& spec, int n_states);

FeatureMap make_features(std::vector<std::vector<double>> matrix);

/// Throws if the feature matrix is rank deficient, naming the dependent
/// columns.
void check_full_rank(const FeatureMap& map);

/// Robbins-Monro schedule alpha_t = a / (b + t).
struct StepSchedule {
  double a = 1.0;
  double b = 100.0;

  double at(long step) const { return a / (b + static_cast<double>(step)); }
};

struct LearnerState {
  std::vector<double> weights;
  long step = 0;
  StepSchedule schedule;
};

struct LearnConfig {
  long n_steps = 0;
  int restart_period = 100;  // expected steps between restarts
  StepSchedule step_size;
  std::uint64_t seed = 0;
  int snapshot_stride = 1000;  // record weights every this many updates
};

struct LearnDiagnostics {
  std::vector<long> snapshot_steps;
  std::vector<std::vector<double>> weight_snapshots;
  std::vector<double> td_errors;  // TD error at each snapshot step
  std::vector<long> visits;       // per-state update counts
  std::vector<double> final_weights;
  double bellman_error = 0.0;  // sup norm of F(Phi r) - Phi r at the end
  bool diverged = false;
};

struct StateDistribution {
  std::vector<double> mu;
};

double phi_dot(const FeatureMap& map, const std::vector<double>& r, int s);

ValueFunction apply_features(const FeatureMap& map,
                             const std::vector<double>& r);

/// Greedy action w.r.t. the approximate continuation target
/// R[s][a] + gamma * sum_s' P[a][s][s'] min(G, Phi r)(s'); lowest index wins.
int greedy_action(const StochasticGame& game, const FeatureMap& map,
                  const std::vector<double>& r, int s);

/// One weight update along a simulated transition:
///   r <- r + alpha_t phi(s) (R[s][a*] + gamma min{(Phi r)(s'), G(s')} - (Phi r)(s))
/// where a* is the greedy action at s, so the expected target over
/// s' ~ P[a*][s][.] equals (F Phi r)(s).
LearnerState td_update(const LearnerState& learner, const FeatureMap& map,
                       const StochasticGame& game, int s, int s_next);

/// Simulates the uniform-action behavior chain (restarting to a uniform
/// state with probability 1/restart_period each step) and applies
/// td_update along it. The target next-state is drawn from the greedy
/// action's kernel; the exploration chain itself never stops.
std::pair<LearnerState, LearnDiagnostics> run_learning(
    const StochasticGame& game, const FeatureMap& map,
    const LearnConfig& config);

/// Stationary distribution of the behavior kernel mixed with a uniform
/// restart: P_mix = (1 - mix) P_behavior + mix * U. Uniform behavior when
/// `behavior` is empty.
StateDistribution stationary_distribution(const StochasticGame& game,
                                          const Policy* behavior, double tol,
                                          double mix = 0.01,
                                          int max_iter = 1000000);

double weighted_norm(const ValueFunction& f, const StateDistribution& mu);

double weighted_dot(const ValueFunction& f, const ValueFunction& g,
                    const StateDistribution& mu);

/// mu-weighted least-squares projection of Q onto the span of the basis.
ValueFunction project(const FeatureMap& map, const StateDistribution& mu,
                      const ValueFunction& Q);

/// Weights of the projection (the solve behind `project`).
std::vector<double> project_weights(const FeatureMap& map,
                                    const StateDistribution& mu,
                                    const ValueFunction& Q);

/// Iterates r <- weights of Pi F(Phi r) to the projected fixed point
/// Pi F(Phi r*) = Phi r*.
LearnerState projected_fixed_point(const StochasticGame& game,
                                   const FeatureMap& map,
                                   const StateDistribution& mu, double tol,
                                   int max_iter,
                                   const std::vector<double>* r0 = nullptr);

/// Stopping rule G(s) <= (Phi r)(s) plus the greedy controller policy.
std::pair<Policy, StopSet> greedy_from_weights(const StochasticGame& game,
                                               const FeatureMap& map,
                                               const std::vector<double>& r);

/// Both approximation bounds: the weighted distance of Phi r* from Q*
/// against (1 - gamma^2)^{-1/2} ||Pi Q* - Q*||_mu, and the expected value
/// loss of the greedy pair against 2 ((1-gamma) sqrt(1-gamma^2))^{-1}
/// ||Pi Q* - Q*||_mu.
struct BoundReport {
  double weight_error = 0.0;      // ||Phi r* - Q*||_mu
  double weight_bound = 0.0;
  double value_loss = 0.0;        // E_mu[J* - J^{greedy pair}]
  double value_bound = 0.0;
  double projection_error = 0.0;  // ||Pi Q* - Q*||_mu
  bool weight_ok = false;
  bool value_ok = false;
};

BoundReport error_bounds(const StochasticGame& game, const FeatureMap& map,
                         const StateDistribution& mu,
                         const ValueFunction& q_star,
                         const LearnerState& r_star, double tol = 1e-12,
                         int max_iter = 1000000);

}  // namespace ftgame
