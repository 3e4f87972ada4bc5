#include "ftgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ftgame {

ValueFunction backward_induction(const StochasticGame& game, int horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  ValueFunction J = game.bequest;
  for (int k = 0; k < horizon; ++k) J = bellman_apply(game, J);
  return J;
}

long long enumeration_size(const StochasticGame& game) {
  long long pairs = 1;
  for (int s = 0; s < game.n_states; ++s) {
    pairs *= game.n_actions;
    if (pairs > 1000000) return -1;
  }
  for (int s = 0; s < game.n_states; ++s) {
    pairs *= 2;
    if (pairs > 1000000) return -1;
  }
  return pairs;
}

namespace {

Policy decode_policy(long long code, int n_states, int n_actions) {
  Policy policy;
  policy.action.resize(n_states);
  for (int s = 0; s < n_states; ++s) {
    policy.action[s] = static_cast<int>(code % n_actions);
    code /= n_actions;
  }
  return policy;
}

StopSet decode_region(long long code, int n_states) {
  StopSet stop;
  stop.stop.resize(n_states);
  for (int s = 0; s < n_states; ++s) stop.stop[s] = (code >> s) & 1;
  return stop;
}

// Pointwise extremum over a table of value vectors; picks the first row
// (in encoding order) that attains the extremum at every state, falling
// back to the best aggregate row if rounding splits the extremum.
template <typename Better>
long long select_row(const std::vector<ValueFunction>& table,
                     const ValueFunction& extremum, Better better) {
  for (long long i = 0; i < static_cast<long long>(table.size()); ++i) {
    bool attains = true;
    for (std::size_t s = 0; s < extremum.size(); ++s)
      if (table[i][s] != extremum[s]) {
        attains = false;
        break;
      }
    if (attains) return i;
  }
  long long best = 0;
  double best_sum = -std::numeric_limits<double>::infinity();
  for (long long i = 0; i < static_cast<long long>(table.size()); ++i) {
    double sum = 0.0;
    for (std::size_t s = 0; s < extremum.size(); ++s)
      sum += better(table[i][s]);
    if (sum > best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

}  // namespace

MinimaxReport enumerate_minimax(const StochasticGame& game, double eval_tol) {
  if (eval_tol <= 0.0) throw std::invalid_argument("eval_tol must be > 0");
  if (enumeration_size(game) < 0)
    throw std::invalid_argument(
        "instance too large: |A|^|S| * 2^|S| exceeds 10^6 pair evaluations");

  long long n_policies = 1;
  for (int s = 0; s < game.n_states; ++s) n_policies *= game.n_actions;
  long long n_regions = 1LL << game.n_states;

  const double pair_tol = eval_tol / 10.0;
  const int max_iter = 10000000;

  // values[p][r] = J^{region r, policy p} for all start states.
  std::vector<std::vector<ValueFunction>> values(n_policies);
  for (long long p = 0; p < n_policies; ++p) {
    Policy policy = decode_policy(p, game.n_states, game.n_actions);
    values[p].reserve(n_regions);
    for (long long r = 0; r < n_regions; ++r) {
      StopSet region = decode_region(r, game.n_states);
      values[p].push_back(
          evaluate_pair(game, policy, region, pair_tol, max_iter).value);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  MinimaxReport report;

  // Lower value: max over policies of (pointwise min over regions).
  std::vector<ValueFunction> min_over_regions(n_policies);
  for (long long p = 0; p < n_policies; ++p) {
    ValueFunction m(game.n_states, inf);
    for (long long r = 0; r < n_regions; ++r)
      for (int s = 0; s < game.n_states; ++s)
        m[s] = std::min(m[s], values[p][r][s]);
    min_over_regions[p] = std::move(m);
  }
  report.lower_value.assign(game.n_states, -inf);
  for (long long p = 0; p < n_policies; ++p)
    for (int s = 0; s < game.n_states; ++s)
      report.lower_value[s] =
          std::max(report.lower_value[s], min_over_regions[p][s]);

  // Upper value: min over regions of (pointwise max over policies).
  report.upper_value.assign(game.n_states, inf);
  for (long long r = 0; r < n_regions; ++r) {
    ValueFunction m(game.n_states, -inf);
    for (long long p = 0; p < n_policies; ++p)
      for (int s = 0; s < game.n_states; ++s)
        m[s] = std::max(m[s], values[p][r][s]);
    for (int s = 0; s < game.n_states; ++s)
      report.upper_value[s] = std::min(report.upper_value[s], m[s]);
  }

  report.gap = 0.0;
  for (int s = 0; s < game.n_states; ++s)
    report.gap =
        std::max(report.gap, report.upper_value[s] - report.lower_value[s]);

  long long best_p = select_row(min_over_regions, report.lower_value,
                                [](double v) { return v; });
  report.best_policy = decode_policy(best_p, game.n_states, game.n_actions);
  long long best_r = select_row(values[best_p], min_over_regions[best_p],
                                [](double v) { return -v; });
  report.best_stop = decode_region(best_r, game.n_states);
  return report;
}

StopSet best_response_stop(const StochasticGame& game, const Policy& policy,
                           double tol, int max_iter) {
  validate_policy(game, policy);

  auto continuation = [&](const ValueFunction& V, int s) {
    auto one = [&](int a) {
      const auto& row = game.transition[a][s];
      double next = 0.0;
      for (int t = 0; t < game.n_states; ++t) next += row[t] * V[t];
      return game.reward[s][a] + game.discount * next;
    };
    if (!policy.stochastic()) return one(policy.action[s]);
    double v = 0.0;
    for (int a = 0; a < game.n_actions; ++a) {
      double p = policy.probabilities[s][a];
      if (p > 0.0) v += p * one(a);
    }
    return v;
  };

  // One-player stopping problem with the controller frozen at `policy`:
  // V = min(G, R_pi + gamma P_pi V).
  ValueFunction V(game.n_states, 0.0);
  for (int it = 0; it < max_iter; ++it) {
    ValueFunction next(game.n_states);
    for (int s = 0; s < game.n_states; ++s)
      next[s] = std::min(game.bequest[s], continuation(V, s));
    double residual = sup_norm_diff(next, V);
    V = std::move(next);
    if (residual <= tol) break;
  }

  StopSet stop;
  stop.stop.resize(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    stop.stop[s] = game.bequest[s] <= continuation(V, s);
  return stop;
}

}  // namespace ftgame
