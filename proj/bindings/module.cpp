#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "ftgame/environments.hpp"
#include "ftgame/game.hpp"
#include "ftgame/io.hpp"
#include "ftgame/learner.hpp"
#include "ftgame/oracle.hpp"
#include "ftgame/solver.hpp"

namespace py = pybind11;
using namespace ftgame;

PYBIND11_MODULE(_ftgame, m) {
  m.doc() = "Zero-sum controller-stopper games: exact solving, brute-force "
            "certification and simulation-based linear value approximation";

  py::class_<StochasticGame>(m, "StochasticGame")
      .def(py::init<>())
      .def_readwrite("n_states", &StochasticGame::n_states)
      .def_readwrite("n_actions", &StochasticGame::n_actions)
      .def_readwrite("transition", &StochasticGame::transition)
      .def_readwrite("reward", &StochasticGame::reward)
      .def_readwrite("bequest", &StochasticGame::bequest)
      .def_readwrite("discount", &StochasticGame::discount)
      .def("to_json", &game_to_json);

  py::class_<Policy>(m, "Policy")
      .def(py::init<>())
      .def_readwrite("action", &Policy::action)
      .def_readwrite("probabilities", &Policy::probabilities)
      .def("stochastic", &Policy::stochastic);

  py::class_<StopSet>(m, "StopSet")
      .def(py::init<>())
      .def_readwrite("stop", &StopSet::stop);

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def_readonly("value", &EvaluationReport::value)
      .def_readonly("residual", &EvaluationReport::residual)
      .def_readonly("iterations", &EvaluationReport::iterations)
      .def_readonly("converged", &EvaluationReport::converged);

  py::class_<GameSolution>(m, "GameSolution")
      .def_readonly("value", &GameSolution::value)
      .def_readonly("q_value", &GameSolution::q_value)
      .def_readonly("policy", &GameSolution::policy)
      .def_readonly("stop_set", &GameSolution::stop_set)
      .def_readonly("residual", &GameSolution::residual)
      .def_readonly("iterations", &GameSolution::iterations)
      .def_readonly("converged", &GameSolution::converged)
      .def("to_json", &solution_to_json);

  py::class_<MinimaxReport>(m, "MinimaxReport")
      .def_readonly("upper_value", &MinimaxReport::upper_value)
      .def_readonly("lower_value", &MinimaxReport::lower_value)
      .def_readonly("gap", &MinimaxReport::gap)
      .def_readonly("best_policy", &MinimaxReport::best_policy)
      .def_readonly("best_stop", &MinimaxReport::best_stop)
      .def("to_json", &minimax_report_to_json);

  py::class_<FeatureMap>(m, "FeatureMap")
      .def_readonly("n_features", &FeatureMap::n_features)
      .def_readonly("phi", &FeatureMap::phi);

  py::class_<StateDistribution>(m, "StateDistribution")
      .def_readonly("mu", &StateDistribution::mu);

  py::class_<StepSchedule>(m, "StepSchedule")
      .def(py::init<>())
      .def_readwrite("a", &StepSchedule::a)
      .def_readwrite("b", &StepSchedule::b);

  py::class_<LearnerState>(m, "LearnerState")
      .def_readonly("weights", &LearnerState::weights)
      .def_readonly("step", &LearnerState::step);

  py::class_<LearnDiagnostics>(m, "LearnDiagnostics")
      .def_readonly("snapshot_steps", &LearnDiagnostics::snapshot_steps)
      .def_readonly("weight_snapshots", &LearnDiagnostics::weight_snapshots)
      .def_readonly("td_errors", &LearnDiagnostics::td_errors)
      .def_readonly("visits", &LearnDiagnostics::visits)
      .def_readonly("final_weights", &LearnDiagnostics::final_weights)
      .def_readonly("bellman_error", &LearnDiagnostics::bellman_error)
      .def_readonly("diverged", &LearnDiagnostics::diverged);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("weight_error", &BoundReport::weight_error)
      .def_readonly("weight_bound", &BoundReport::weight_bound)
      .def_readonly("value_loss", &BoundReport::value_loss)
      .def_readonly("value_bound", &BoundReport::value_bound)
      .def_readonly("projection_error", &BoundReport::projection_error)
      .def_readonly("weight_ok", &BoundReport::weight_ok)
      .def_readonly("value_ok", &BoundReport::value_ok);

  m.def("validate_game", &validate_game, py::arg("game"),
        py::arg("prob_tol") = 1e-12);
  m.def(
      "evaluate_pair",
      [](const StochasticGame& game, const Policy& policy, const StopSet& stop,
         double tol, int max_iter) {
        return evaluate_pair(game, policy, stop, tol, max_iter);
      },
      py::arg("game"), py::arg("policy"), py::arg("stop"),
      py::arg("tol") = 1e-10, py::arg("max_iter") = 1000000);
  m.def(
      "evaluate_random_stoppage",
      [](const StochasticGame& game, const Policy& policy, int start_state,
         double hazard, int horizon, int n_rollouts, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        auto est = evaluate_random_stoppage(game, policy, start_state, hazard,
                                            horizon, n_rollouts, rng);
        return std::make_pair(est.mean, est.stderr_);
      },
      py::arg("game"), py::arg("policy"), py::arg("start_state"),
      py::arg("hazard"), py::arg("horizon"), py::arg("n_rollouts"),
      py::arg("seed"));

  m.def("continuation_value", &continuation_value);
  m.def("bellman_apply", &bellman_apply);
  m.def(
      "value_iterate",
      [](const StochasticGame& game, double tol, int max_iter) {
        return value_iterate(game, tol, max_iter);
      },
      py::arg("game"), py::arg("tol") = 1e-10, py::arg("max_iter") = 1000000);
  m.def("extract_policy", &extract_policy);
  m.def("extract_stop_set", &extract_stop_set);
  m.def("apply_F", &apply_F);
  m.def("solve_Q", &solve_Q, py::arg("game"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 1000000);

  m.def("backward_induction", &backward_induction);
  m.def("enumerate_minimax", &enumerate_minimax, py::arg("game"),
        py::arg("eval_tol") = 1e-8);
  m.def("best_response_stop", &best_response_stop, py::arg("game"),
        py::arg("policy"), py::arg("tol") = 1e-12,
        py::arg("max_iter") = 1000000);

  m.def("make_features",
        py::overload_cast<const std::string&, int>(&make_features));
  m.def("feature_matrix",
        py::overload_cast<std::vector<std::vector<double>>>(&make_features));
  m.def(
      "run_learning",
      [](const StochasticGame& game, const FeatureMap& map, long n_steps,
         int restart_period, double a, double b, std::uint64_t seed) {
        LearnConfig config;
        config.n_steps = n_steps;
        config.restart_period = restart_period;
        config.step_size = {a, b};
        config.seed = seed;
        return run_learning(game, map, config);
      },
      py::arg("game"), py::arg("map"), py::arg("n_steps"),
      py::arg("restart_period") = 100, py::arg("a") = 1.0,
      py::arg("b") = 100.0, py::arg("seed") = 0);
  m.def(
      "stationary_distribution",
      [](const StochasticGame& game, double tol, double mix) {
        return stationary_distribution(game, nullptr, tol, mix);
      },
      py::arg("game"), py::arg("tol") = 1e-12, py::arg("mix") = 0.01);
  m.def("project", &project);
  m.def(
      "projected_fixed_point",
      [](const StochasticGame& game, const FeatureMap& map,
         const StateDistribution& mu, double tol, int max_iter) {
        return projected_fixed_point(game, map, mu, tol, max_iter);
      },
      py::arg("game"), py::arg("map"), py::arg("mu"), py::arg("tol") = 1e-12,
      py::arg("max_iter") = 1000000);
  m.def("greedy_from_weights", &greedy_from_weights);
  m.def("error_bounds", &error_bounds, py::arg("game"), py::arg("map"),
        py::arg("mu"), py::arg("q_star"), py::arg("r_star"),
        py::arg("tol") = 1e-12, py::arg("max_iter") = 1000000);

  m.def(
      "make_actuator_chain",
      [](int n_cells, double move_success, double base_reward,
         double goal_reward, std::vector<int> surviving, double discount) {
        ActuatorSpec spec;
        spec.n_cells = n_cells;
        spec.move_success = move_success;
        spec.base_reward = base_reward;
        spec.goal_reward = goal_reward;
        spec.surviving_actions = std::move(surviving);
        spec.discount = discount;
        return make_actuator_chain(spec);
      },
      py::arg("n_cells") = 5, py::arg("move_success") = 0.9,
      py::arg("base_reward") = 0.4, py::arg("goal_reward") = 1.2,
      py::arg("surviving_actions") = std::vector<int>{0},
      py::arg("discount") = 0.9);
  m.def("solve_restricted_mdp", &solve_restricted_mdp, py::arg("game"),
        py::arg("allowed"), py::arg("tol") = 1e-12,
        py::arg("max_iter") = 1000000);
  m.def("make_hazard_grid", &make_hazard_grid, py::arg("width"),
        py::arg("height"), py::arg("hazard_cells"), py::arg("hazard_bequest"),
        py::arg("goal_reward"), py::arg("slip"), py::arg("discount"));
  m.def("make_random_game", &make_random_game, py::arg("n_states"),
        py::arg("n_actions"), py::arg("reward_scale"), py::arg("seed"),
        py::arg("discount") = 0.9);

  m.def("game_from_json", &game_from_json);
  m.def("game_to_json", &game_to_json);
  m.def("load_game", &load_game);
  m.def("save_game", &save_game);
}
