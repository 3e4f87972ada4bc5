#include "ftgame/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ftgame {

using nlohmann::json;

namespace {

// Load-time tolerance is looser than the internal 1e-12 invariant to
// absorb decimal serialization; rows further than 1e-12 from 1 are
// renormalized so in-memory invariants hold, rows already within 1e-12
// are kept bit-exact.
constexpr double kLoadProbTol = 1e-9;

json parse(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw std::invalid_argument("malformed JSON document");
  return doc;
}

}  // namespace

StochasticGame game_from_json(const std::string& text) {
  json doc = parse(text);
  StochasticGame game;
  try {
    game.n_states = doc.at("n_states").get<int>();
    game.n_actions = doc.at("n_actions").get<int>();
    game.transition =
        doc.at("transition").get<std::vector<std::vector<std::vector<double>>>>();
    game.reward = doc.at("reward").get<std::vector<std::vector<double>>>();
    game.bequest = doc.at("bequest").get<std::vector<double>>();
    game.discount = doc.at("discount").get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad game document: ") + e.what());
  }

  validate_game(game, kLoadProbTol);
  for (auto& per_action : game.transition)
    for (auto& row : per_action) {
      double sum = 0.0;
      for (double p : row) sum += p;
      if (std::abs(sum - 1.0) > 1e-12)
        for (double& p : row) p /= sum;
    }
  validate_game(game);
  return game;
}

std::string game_to_json(const StochasticGame& game) {
  json doc;
  doc["n_states"] = game.n_states;
  doc["n_actions"] = game.n_actions;
  doc["transition"] = game.transition;
  doc["reward"] = game.reward;
  doc["bequest"] = game.bequest;
  doc["discount"] = game.discount;
  return doc.dump(2);
}

std::vector<std::vector<double>> features_from_json(const std::string& text) {
  json doc = parse(text);
  if (!doc.contains("features")) return {};
  try {
    return doc.at("features").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad features field: ") +
                                e.what());
  }
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

StochasticGame load_game(const std::string& path) {
  return game_from_json(read_file(path));
}

std::vector<std::vector<double>> load_features(const std::string& path) {
  return features_from_json(read_file(path));
}

void save_game(const StochasticGame& game, const std::string& path) {
  atomic_write(path, game_to_json(game));
}

namespace {

json stop_to_json(const StopSet& stop) {
  std::vector<bool> bits(stop.stop.begin(), stop.stop.end());
  return json(bits);
}

json policy_to_json(const Policy& policy) {
  json out;
  out["action"] = policy.action;
  if (policy.stochastic()) out["probabilities"] = policy.probabilities;
  return out;
}

}  // namespace

std::string solution_to_json(const GameSolution& solution) {
  json doc;
  doc["value"] = solution.value;
  doc["q_value"] = solution.q_value;
  doc["policy"] = policy_to_json(solution.policy);
  doc["stop_set"] = stop_to_json(solution.stop_set);
  doc["residual"] = solution.residual;
  doc["iterations"] = solution.iterations;
  doc["converged"] = solution.converged;
  return doc.dump(2);
}

std::string minimax_report_to_json(const MinimaxReport& report) {
  json doc;
  doc["upper_value"] = report.upper_value;
  doc["lower_value"] = report.lower_value;
  doc["gap"] = report.gap;
  doc["best_policy"] = policy_to_json(report.best_policy);
  doc["best_stop"] = stop_to_json(report.best_stop);
  return doc.dump(2);
}

std::string bound_report_to_json(const BoundReport& report) {
  json doc;
  doc["weight_error"] = report.weight_error;
  doc["weight_bound"] = report.weight_bound;
  doc["value_loss"] = report.value_loss;
  doc["value_bound"] = report.value_bound;
  doc["projection_error"] = report.projection_error;
  doc["weight_ok"] = report.weight_ok;
  doc["value_ok"] = report.value_ok;
  return doc.dump(2);
}

void atomic_write(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

}  // namespace ftgame
