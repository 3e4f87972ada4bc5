#pragma once

#include <string>

#include "ftgame/game.hpp"
#include "ftgame/learner.hpp"
#include "ftgame/oracle.hpp"
#include "ftgame/solver.hpp"

namespace ftgame {

/// Game definition document: n_states, n_actions, transition [a][s][s'],
/// reward [s][a], bequest [s], discount. Optional "features" matrix.
StochasticGame game_from_json(const std::string& text);
std::string game_to_json(const StochasticGame& game);

StochasticGame load_game(const std::string& path);
void save_game(const StochasticGame& game, const std::string& path);

/// Feature matrix embedded in a game file, if present (empty otherwise).
std::vector<std::vector<double>> features_from_json(const std::string& text);
std::vector<std::vector<double>> load_features(const std::string& path);

std::string solution_to_json(const GameSolution& solution);
std::string minimax_report_to_json(const MinimaxReport& report);
std::string bound_report_to_json(const BoundReport& report);

/// Write-temp-then-rename.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace ftgame
