#include "ftgame/learner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ftgame/solver.hpp"

namespace ftgame {

FeatureMap make_features(const std::string& spec, int n_states) {
  FeatureMap map;
  if (spec == "onehot") {
    map.n_features = n_states;
    map.phi.assign(n_states, std::vector<double>(n_states, 0.0));
    for (int s = 0; s < n_states; ++s) map.phi[s][s] = 1.0;
  } else if (spec == "constant") {
    map.n_features = 1;
    map.phi.assign(n_states, {1.0});
  } else if (spec.rfind("poly:", 0) == 0) {
    int degree = std::stoi(spec.substr(5));
    if (degree < 0) throw std::invalid_argument("poly degree must be >= 0");
    map.n_features = degree + 1;
    map.phi.assign(n_states, std::vector<double>(degree + 1, 0.0));
    double denom = n_states > 1 ? static_cast<double>(n_states - 1) : 1.0;
    for (int s = 0; s < n_states; ++s) {
      double x = static_cast<double>(s) / denom;
      double p = 1.0;
      for (int k = 0; k <= degree; ++k) {
        map.phi[s][k] = p;
        p *= x;
      }
    }
  } else {
    throw std::invalid_argument("unknown feature spec: " + spec);
  }
  return map;
}

FeatureMap make_features(std::vector<std::vector<double>> matrix) {
  FeatureMap map;
  if (matrix.empty()) throw std::invalid_argument("empty feature matrix");
  map.n_features = static_cast<int>(matrix[0].size());
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != map.n_features)
      throw std::invalid_argument("ragged feature matrix");
    for (double v : row)
      if (!std::isfinite(v))
        throw std::invalid_argument("non-finite feature value");
  }
  map.phi = std::move(matrix);
  return map;
}

namespace {

Eigen::MatrixXd to_matrix(const FeatureMap& map) {
  Eigen::MatrixXd phi(map.phi.size(), map.n_features);
  for (int s = 0; s < static_cast<int>(map.phi.size()); ++s)
    for (int k = 0; k < map.n_features; ++k) phi(s, k) = map.phi[s][k];
  return phi;
}

}  // namespace

void check_full_rank(const FeatureMap& map) {
  Eigen::MatrixXd phi = to_matrix(map);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
  qr.setThreshold(1e-10);
  if (qr.rank() < map.n_features) {
    std::string cols;
    const auto& perm = qr.colsPermutation().indices();
    for (int k = qr.rank(); k < map.n_features; ++k) {
      if (!cols.empty()) cols += ", ";
      cols += std::to_string(perm[k]);
    }
    throw std::invalid_argument(
        "feature matrix is rank deficient; dependent columns: " + cols);
  }
}

double phi_dot(const FeatureMap& map, const std::vector<double>& r, int s) {
  const auto& row = map.phi[s];
  double v = 0.0;
  for (int k = 0; k < map.n_features; ++k) v += row[k] * r[k];
  return v;
}

ValueFunction apply_features(const FeatureMap& map,
                             const std::vector<double>& r) {
  ValueFunction out(map.phi.size());
  for (std::size_t s = 0; s < map.phi.size(); ++s)
    out[s] = phi_dot(map, r, static_cast<int>(s));
  return out;
}

int greedy_action(const StochasticGame& game, const FeatureMap& map,
                  const std::vector<double>& r, int s) {
  double best = -std::numeric_limits<double>::infinity();
  int best_a = 0;
  for (int a = 0; a < game.n_actions; ++a) {
    const auto& row = game.transition[a][s];
    double next = 0.0;
    for (int t = 0; t < game.n_states; ++t)
      next += row[t] * std::min(game.bequest[t], phi_dot(map, r, t));
    double v = game.reward[s][a] + game.discount * next;
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  return best_a;
}

LearnerState td_update(const LearnerState& learner, const FeatureMap& map,
                       const StochasticGame& game, int s, int s_next) {
  if (s < 0 || s >= game.n_states || s_next < 0 || s_next >= game.n_states)
    throw std::out_of_range("state index out of range");

  int a = greedy_action(game, map, learner.weights, s);
  double target =
      game.reward[s][a] +
      game.discount *
          std::min(phi_dot(map, learner.weights, s_next),
                   game.bequest[s_next]);
  double td = target - phi_dot(map, learner.weights, s);
  double alpha = learner.schedule.at(learner.step);

  LearnerState out = learner;
  for (int k = 0; k < map.n_features; ++k)
    out.weights[k] += alpha * map.phi[s][k] * td;
  out.step = learner.step + 1;
  return out;
}

std::pair<LearnerState, LearnDiagnostics> run_learning(
    const StochasticGame& game, const FeatureMap& map,
    const LearnConfig& config) {
  if (config.restart_period < 1)
    throw std::invalid_argument("restart_period must be >= 1");
  check_full_rank(map);

  LearnerState learner;
  learner.weights.assign(map.n_features, 0.0);
  learner.schedule = config.step_size;

  LearnDiagnostics diag;
  diag.visits.assign(game.n_states, 0);

  std::mt19937_64 rng(config.seed);
  const double restart_prob = 1.0 / config.restart_period;
  const double guard = 1e6 * (1.0 + 0.0);

  int s = static_cast<int>(canonical_draw(rng) * game.n_states);
  s = std::min(s, game.n_states - 1);

  for (long t = 0; t < config.n_steps; ++t) {
    // Target sample: next state under the greedy action, so the expected
    // target equals (F Phi r)(s).
    int a_star = greedy_action(game, map, learner.weights, s);
    int s_target = transition_sample(game, s, a_star, rng);
    double td_before = game.reward[s][a_star] +
                       game.discount *
                           std::min(phi_dot(map, learner.weights, s_target),
                                    game.bequest[s_target]) -
                       phi_dot(map, learner.weights, s);
    learner = td_update(learner, map, game, s, s_target);
    diag.visits[s] += 1;

    if (config.snapshot_stride > 0 &&
        (t % config.snapshot_stride == 0 || t + 1 == config.n_steps)) {
      diag.snapshot_steps.push_back(t);
      diag.weight_snapshots.push_back(learner.weights);
      diag.td_errors.push_back(td_before);
    }

    double norm = 0.0;
    for (double w : learner.weights) norm = std::max(norm, std::abs(w));
    if (norm > guard) {
      diag.diverged = true;
      break;
    }

    // Exploration chain: uniform random action, geometric restart.
    if (canonical_draw(rng) < restart_prob) {
      s = std::min(static_cast<int>(canonical_draw(rng) * game.n_states),
                   game.n_states - 1);
    } else {
      int a = std::min(static_cast<int>(canonical_draw(rng) * game.n_actions),
                       game.n_actions - 1);
      s = transition_sample(game, s, a, rng);
    }
  }

  diag.final_weights = learner.weights;
  ValueFunction approx = apply_features(map, learner.weights);
  diag.bellman_error = sup_norm_diff(apply_F(game, approx), approx);
  return {learner, diag};
}

StateDistribution stationary_distribution(const StochasticGame& game,
                                          const Policy* behavior, double tol,
                                          double mix, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  const int n = game.n_states;

  // Behavior kernel; uniform over actions when no policy is given.
  std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < game.n_actions; ++a) {
      double w;
      if (behavior == nullptr)
        w = 1.0 / game.n_actions;
      else if (behavior->stochastic())
        w = behavior->probabilities[s][a];
      else
        w = behavior->action[s] == a ? 1.0 : 0.0;
      if (w == 0.0) continue;
      for (int t = 0; t < n; ++t) P[s][t] += w * game.transition[a][s][t];
    }
    for (int t = 0; t < n; ++t)
      P[s][t] = (1.0 - mix) * P[s][t] + mix / n;
  }

  StateDistribution dist;
  dist.mu.assign(n, 1.0 / n);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> next(n, 0.0);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) next[t] += dist.mu[s] * P[s][t];
    double l1 = 0.0;
    for (int t = 0; t < n; ++t) l1 += std::abs(next[t] - dist.mu[t]);
    dist.mu = std::move(next);
    if (l1 <= tol) break;
  }
  // Renormalize away accumulated rounding.
  double sum = 0.0;
  for (double m : dist.mu) sum += m;
  for (double& m : dist.mu) m /= sum;
  return dist;
}

double weighted_dot(const ValueFunction& f, const ValueFunction& g,
                    const StateDistribution& mu) {
  double v = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) v += mu.mu[s] * f[s] * g[s];
  return v;
}

double weighted_norm(const ValueFunction& f, const StateDistribution& mu) {
  return std::sqrt(std::max(weighted_dot(f, f, mu), 0.0));
}

std::vector<double> project_weights(const FeatureMap& map,
                                    const StateDistribution& mu,
                                    const ValueFunction& Q) {
  const int n = static_cast<int>(map.phi.size());
  const int d = map.n_features;
  Eigen::MatrixXd phi = to_matrix(map);
  Eigen::VectorXd w(n), q(n);
  for (int s = 0; s < n; ++s) {
    w(s) = std::sqrt(mu.mu[s]);
    q(s) = Q[s];
  }
  Eigen::MatrixXd wphi = w.asDiagonal() * phi;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wphi);
  qr.setThreshold(1e-10);
  if (qr.rank() < d) {
    std::string cols;
    const auto& perm = qr.colsPermutation().indices();
    for (int k = qr.rank(); k < d; ++k) {
      if (!cols.empty()) cols += ", ";
      cols += std::to_string(perm[k]);
    }
    throw std::invalid_argument(
        "features rank deficient on the support of mu; dependent columns: " +
        cols);
  }
  Eigen::VectorXd r = qr.solve(w.asDiagonal() * q);
  return std::vector<double>(r.data(), r.data() + d);
}

ValueFunction project(const FeatureMap& map, const StateDistribution& mu,
                      const ValueFunction& Q) {
  return apply_features(map, project_weights(map, mu, Q));
}

LearnerState projected_fixed_point(const StochasticGame& game,
                                   const FeatureMap& map,
                                   const StateDistribution& mu, double tol,
                                   int max_iter,
                                   const std::vector<double>* r0) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  check_full_rank(map);

  LearnerState state;
  state.weights = r0 ? *r0 : std::vector<double>(map.n_features, 0.0);
  for (int it = 0; it < max_iter; ++it) {
    ValueFunction current = apply_features(map, state.weights);
    std::vector<double> next =
        project_weights(map, mu, apply_F(game, current));
    ValueFunction projected = apply_features(map, next);
    double residual = 0.0;
    {
      ValueFunction diff(projected.size());
      for (std::size_t s = 0; s < diff.size(); ++s)
        diff[s] = projected[s] - current[s];
      residual = weighted_norm(diff, mu);
    }
    state.weights = std::move(next);
    state.step = it + 1;
    if (residual <= tol) break;
  }
  return state;
}

std::pair<Policy, StopSet> greedy_from_weights(const StochasticGame& game,
                                               const FeatureMap& map,
                                               const std::vector<double>& r) {
  Policy policy;
  policy.action.resize(game.n_states);
  StopSet stop;
  stop.stop.resize(game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    policy.action[s] = greedy_action(game, map, r, s);
    stop.stop[s] = game.bequest[s] <= phi_dot(map, r, s);
  }
  return {policy, stop};
}

BoundReport error_bounds(const StochasticGame& game, const FeatureMap& map,
                         const StateDistribution& mu,
                         const ValueFunction& q_star,
                         const LearnerState& r_star, double tol,
                         int max_iter) {
  const double gamma = game.discount;
  BoundReport report;

  ValueFunction approx = apply_features(map, r_star.weights);
  ValueFunction projected_q = project(map, mu, q_star);

  ValueFunction diff(game.n_states), proj_diff(game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    diff[s] = approx[s] - q_star[s];
    proj_diff[s] = projected_q[s] - q_star[s];
  }
  report.projection_error = weighted_norm(proj_diff, mu);
  report.weight_error = weighted_norm(diff, mu);
  report.weight_bound =
      report.projection_error / std::sqrt(1.0 - gamma * gamma);

  // Exact value of the greedy pair against the game value.
  auto [policy, stop] = greedy_from_weights(game, map, r_star.weights);
  ValueFunction j_pair =
      evaluate_pair(game, policy, stop, tol, max_iter).value;
  ValueFunction j_star(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    j_star[s] = std::min(q_star[s], game.bequest[s]);

  double loss = 0.0;
  for (int s = 0; s < game.n_states; ++s)
    loss += mu.mu[s] * (j_star[s] - j_pair[s]);
  report.value_loss = loss;
  report.value_bound = 2.0 * report.projection_error /
                       ((1.0 - gamma) * std::sqrt(1.0 - gamma * gamma));

  report.weight_ok = report.weight_error <= report.weight_bound + 1e-9;
  report.value_ok = report.value_loss <= report.value_bound + 1e-9;
  return report;
}

}  // namespace ftgame
