// Command line front end: generate and solve controller-stopper games,
// run the simulation-based learner, certify small instances by brute
// force and compare nominal vs fault-tolerant policies.

#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftgame/environments.hpp"
#include "ftgame/game.hpp"
#include "ftgame/io.hpp"
#include "ftgame/learner.hpp"
#include "ftgame/oracle.hpp"
#include "ftgame/solver.hpp"

using nlohmann::json;
using namespace ftgame;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitSizeGuard = 4;

struct Options {
  std::string input;
  std::string output;
  std::string csv;
  double tol = 1e-9;
  int max_iter = 1000000;
  std::uint64_t seed = 0;
  long steps = 100000;
  int restart_period = 100;
  double step_a = 1.0;
  double step_b = 100.0;
  std::string features = "onehot";
  int horizon = 1000;
  double hazard = 0.1;
  double eval_tol = 1e-8;
  int rollouts = 10000;
};

int cmd_solve(const Options& opt) {
  StochasticGame game;
  try {
    game = load_game(opt.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  GameSolution sol = value_iterate(game, opt.tol, opt.max_iter);
  sol.q_value = solve_Q(game, opt.tol, opt.max_iter);
  if (!opt.output.empty()) atomic_write(opt.output, solution_to_json(sol));
  std::cout << solution_to_json(sol) << "\n";
  return sol.converged ? kExitOk : kExitNotConverged;
}

FeatureMap features_for(const StochasticGame& game, const Options& opt) {
  if (opt.features == "file") {
    auto matrix = load_features(opt.input);
    if (matrix.empty())
      throw std::invalid_argument("game file carries no feature matrix");
    return make_features(std::move(matrix));
  }
  return make_features(opt.features, game.n_states);
}

int cmd_learn(const Options& opt) {
  StochasticGame game;
  FeatureMap map;
  try {
    game = load_game(opt.input);
    map = features_for(game, opt);
    check_full_rank(map);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  LearnConfig config;
  config.n_steps = opt.steps;
  config.restart_period = opt.restart_period;
  config.step_size = {opt.step_a, opt.step_b};
  config.seed = opt.seed;
  auto [learner, diag] = run_learning(game, map, config);
  if (diag.diverged) {
    std::cerr << "error: weight divergence guard tripped at step "
              << learner.step << "\n";
    return kExitDiverged;
  }

  StateDistribution mu = stationary_distribution(
      game, nullptr, 1e-12, 1.0 / config.restart_period);
  LearnerState reference =
      projected_fixed_point(game, map, mu, 1e-12, opt.max_iter);
  ValueFunction q_star = solve_Q(game, 1e-12, opt.max_iter);
  BoundReport bounds = error_bounds(game, map, mu, q_star, reference);

  json doc;
  doc["final_weights"] = learner.weights;
  doc["reference_weights"] = reference.weights;
  doc["steps"] = learner.step;
  doc["visits"] = diag.visits;
  doc["bellman_error"] = diag.bellman_error;
  doc["bounds"] = json::parse(bound_report_to_json(bounds));
  if (!opt.output.empty()) atomic_write(opt.output, doc.dump(2));
  std::cout << doc.dump(2) << "\n";

  if (!opt.csv.empty()) {
    std::ostringstream csv;
    csv << "step,weight_distance,td_error\n";
    ValueFunction reference_values = apply_features(map, reference.weights);
    for (std::size_t i = 0; i < diag.snapshot_steps.size(); ++i) {
      ValueFunction values = apply_features(map, diag.weight_snapshots[i]);
      ValueFunction diff(values.size());
      for (std::size_t s = 0; s < values.size(); ++s)
        diff[s] = values[s] - reference_values[s];
      csv << diag.snapshot_steps[i] << "," << weighted_norm(diff, mu) << ","
          << diag.td_errors[i] << "\n";
    }
    atomic_write(opt.csv, csv.str());
  }
  return kExitOk;
}

int cmd_oracle_check(const Options& opt) {
  StochasticGame game;
  try {
    game = load_game(opt.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (enumeration_size(game) < 0) {
    std::cerr << "error: instance exceeds the 10^6 pair-evaluation guard\n";
    return kExitSizeGuard;
  }
  MinimaxReport report = enumerate_minimax(game, opt.eval_tol);
  GameSolution sol = value_iterate(game, opt.eval_tol / 10.0, opt.max_iter);
  double mismatch = std::max(sup_norm_diff(report.upper_value, sol.value),
                             sup_norm_diff(report.lower_value, sol.value));
  json doc = json::parse(minimax_report_to_json(report));
  doc["value_iterate"] = sol.value;
  doc["mismatch"] = mismatch;
  if (!opt.output.empty()) atomic_write(opt.output, doc.dump(2));
  std::cout << doc.dump(2) << "\n";
  return (report.gap <= opt.eval_tol && mismatch <= opt.eval_tol)
             ? kExitOk
             : kExitNotConverged;
}

int cmd_compare(const Options& opt) {
  StochasticGame game;
  try {
    game = load_game(opt.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  // Nominal policy: optimal for the plain MDP, stopper ignored.
  std::vector<int> all_actions(game.n_actions);
  for (int a = 0; a < game.n_actions; ++a) all_actions[a] = a;
  ValueFunction v_full =
      solve_restricted_mdp(game, all_actions, opt.tol, opt.max_iter);
  Policy nominal = extract_policy(game, v_full);

  GameSolution sol = value_iterate(game, opt.tol, opt.max_iter);

  std::mt19937_64 rng(opt.seed);
  auto row = [&](const std::string& name, const Policy& policy) {
    StopSet br = best_response_stop(game, policy, opt.tol, opt.max_iter);
    ValueFunction adversarial =
        evaluate_pair(game, policy, br, opt.tol, opt.max_iter).value;
    RolloutEstimate random = evaluate_random_stoppage(
        game, policy, 0, opt.hazard, opt.horizon, opt.rollouts, rng);
    json entry;
    entry["policy"] = name;
    entry["actions"] = policy.action;
    entry["adversarial_value"] = adversarial;
    entry["random_stoppage_mean"] = random.mean;
    entry["random_stoppage_stderr"] = random.stderr_;
    return entry;
  };

  json doc;
  doc["rows"] = json::array({row("nominal", nominal), row("robust", sol.policy)});
  doc["game_value"] = sol.value;
  if (!opt.output.empty()) atomic_write(opt.output, doc.dump(2));
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-sum controller-stopper game toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("--input", opt.input, "game definition file (JSON)")
          ->required();
    cmd->add_option("--output", opt.output, "report output path");
    cmd->add_option("--tol", opt.tol, "convergence tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", opt.max_iter, "iteration cap");
    cmd->add_option("--seed", opt.seed, "random seed");
  };

  auto* solve = app.add_subcommand("solve", "exact tabular game solution");
  add_common(solve, true);

  auto* learn = app.add_subcommand("learn", "simulation-based approximation");
  add_common(learn, true);
  learn->add_option("--steps", opt.steps, "number of learning updates");
  learn->add_option("--restart-period", opt.restart_period,
                    "expected steps between restarts");
  learn->add_option("--step-a", opt.step_a, "step size numerator a");
  learn->add_option("--step-b", opt.step_b, "step size offset b");
  learn->add_option("--features", opt.features,
                    "onehot | constant | poly:k | file");
  learn->add_option("--csv", opt.csv, "diagnostics CSV path");

  auto* oracle =
      app.add_subcommand("oracle-check", "brute-force minimax certification");
  add_common(oracle, true);
  oracle->add_option("--eval-tol", opt.eval_tol, "certification tolerance");

  auto* compare =
      app.add_subcommand("compare", "nominal vs fault-tolerant policy");
  add_common(compare, true);
  compare->add_option("--hazard", opt.hazard, "random stoppage probability");
  compare->add_option("--horizon", opt.horizon, "rollout truncation");
  compare->add_option("--rollouts", opt.rollouts, "Monte Carlo sample count");

  auto* gen = app.add_subcommand("gen-env", "write a benchmark game file");
  std::string generator;
  int cells = 5, width = 3, height = 3, n_states = 3, n_actions = 2;
  double move_success = 0.9, base_reward = 0.4, goal_reward = 1.2;
  double slip = 0.1, hazard_bequest = -1.0, reward_scale = 1.0, discount = 0.9;
  std::vector<int> hazard_cells, surviving = {0};
  gen->add_option("generator", generator, "actuator | grid | random")
      ->required();
  gen->add_option("--output", opt.output, "game file path")->required();
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("--cells", cells, "chain length (actuator)");
  gen->add_option("--move-success", move_success, "move success probability");
  gen->add_option("--base-reward", base_reward, "reward in cell 0");
  gen->add_option("--goal-reward", goal_reward, "reward in the goal cell");
  gen->add_option("--surviving", surviving, "surviving actions (actuator)");
  gen->add_option("--width", width, "grid width");
  gen->add_option("--height", height, "grid height");
  gen->add_option("--slip", slip, "lateral slip probability (grid)");
  gen->add_option("--hazard-cells", hazard_cells, "hazard cell indices");
  gen->add_option("--hazard-bequest", hazard_bequest, "bequest on hazards");
  gen->add_option("--n-states", n_states, "state count (random)");
  gen->add_option("--n-actions", n_actions, "action count (random)");
  gen->add_option("--reward-scale", reward_scale, "reward range (random)");
  gen->add_option("--discount", discount, "discount factor");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (learn->parsed()) return cmd_learn(opt);
    if (oracle->parsed()) return cmd_oracle_check(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (gen->parsed()) {
      StochasticGame game;
      if (generator == "actuator") {
        ActuatorSpec spec;
        spec.n_cells = cells;
        spec.move_success = move_success;
        spec.base_reward = base_reward;
        spec.goal_reward = goal_reward;
        spec.surviving_actions = surviving;
        spec.discount = discount;
        game = make_actuator_chain(spec);
      } else if (generator == "grid") {
        game = make_hazard_grid(width, height, hazard_cells, hazard_bequest,
                                goal_reward, slip, discount);
      } else if (generator == "random") {
        game = make_random_game(n_states, n_actions, reward_scale, opt.seed,
                                discount);
      } else {
        std::cerr << "error: unknown generator '" << generator << "'\n";
        return kExitBadInput;
      }
      save_game(game, opt.output);
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}
