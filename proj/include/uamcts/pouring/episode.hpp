#pragma once

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uamcts/common/random.hpp"
#include "uamcts/mcts/search.hpp"
#include "uamcts/pouring/domain.hpp"
#include "uamcts/pouring/dynamics.hpp"
#include "uamcts/pouring/model.hpp"

namespace uamcts::pouring {

struct EpisodeConfig {
  double initial_level = 0.0;
  int n_max = kDefaultMaxActions;
  ActionGrid grid;
  mcts::SearchConfig search;
};

struct EpisodeStep {
  int k = 0;
  double observed = 0.0;  // level the search started from
  PourAction action;
  double predicted = 0.0;  // model mean for (observed, action)
  double mde = 0.0;
  double true_level = 0.0;  // true level after the pour
};

struct EpisodeTrace {
  GoalSpec goal;
  double initial_true = 0.0;
  double initial_observed = 0.0;
  std::vector<EpisodeStep> steps;
  double final_true = 0.0;
  double final_observed = 0.0;
  bool success = false;
  // goal | overshoot | short | max_actions | error
  std::string outcome;
  std::string error;

  std::size_t n_actions() const { return steps.size(); }
};

/// Search failure inside an episode; carries the steps executed so far.
class EpisodeError : public std::runtime_error {
 public:
  EpisodeError(const std::string& what, EpisodeTrace partial)
      : std::runtime_error(what), trace_(std::move(partial)) {}
  const EpisodeTrace& trace() const { return trace_; }

 private:
  EpisodeTrace trace_;
};

inline void classify(EpisodeTrace& t, bool ran_out) {
  t.success = t.goal.contains(t.final_true);
  if (t.success)
    t.outcome = "goal";
  else if (t.final_true > t.goal.upper())
    t.outcome = "overshoot";
  else
    t.outcome = ran_out ? "max_actions" : "short";
}

/// Receding-horizon loop: plan from the observed level, execute one action
/// on the true system, observe, repeat. Stops once the observation reaches
/// x_ref - c or more than n_max actions were executed. Success is judged on
/// the true level.
inline EpisodeTrace run_episode(const GroundTruth& gt, const TransitionModel& model, const GoalSpec& goal,
                                const EpisodeConfig& config, Rng& rng) {
  goal.validate();
  gt.validate();
  const PourDomain domain(model, goal, config.grid, config.n_max);

  EpisodeTrace trace;
  trace.goal = goal;
  trace.initial_true = clamp_level(config.initial_level);
  trace.initial_observed = observe(gt, trace.initial_true, rng);
  double true_level = trace.initial_true;
  double observed = trace.initial_observed;

  int executed = 0;
  bool ran_out = false;
  while (observed < goal.lower()) {
    if (executed > config.n_max) {
      ran_out = true;
      break;
    }
    mcts::SearchConfig sc = config.search;
    sc.rng_seed = rng();
    PourAction action;
    try {
      action = mcts::search(domain, PourState{observed}, sc).action;
    } catch (const std::exception& e) {
      trace.final_true = true_level;
      trace.final_observed = observed;
      trace.outcome = "error";
      trace.error = e.what();
      throw EpisodeError(e.what(), trace);
    }
    const auto pred = model.predict({observed}, action);
    true_level = true_step(gt, {true_level}, action).level;
    trace.steps.push_back({executed, observed, action, pred.mean, pred.mde, true_level});
    observed = observe(gt, true_level, rng);
    ++executed;
  }
  trace.final_true = true_level;
  trace.final_observed = observed;
  classify(trace, ran_out);
  return trace;
}

inline nlohmann::json to_json(const EpisodeStep& s) {
  return {{"k", s.k},
          {"observed", s.observed},
          {"action", {{"alpha", s.action.alpha}, {"d", s.action.duration}}},
          {"predicted", s.predicted},
          {"mde", s.mde},
          {"true_level", s.true_level}};
}

inline EpisodeStep step_from_json(const nlohmann::json& j) {
  EpisodeStep s;
  s.k = j.at("k").get<int>();
  s.observed = j.at("observed").get<double>();
  s.action = {j.at("action").at("alpha").get<double>(), j.at("action").at("d").get<double>()};
  s.predicted = j.at("predicted").get<double>();
  s.mde = j.at("mde").get<double>();
  s.true_level = j.at("true_level").get<double>();
  return s;
}

/// JSON lines, one step per line.
inline void write_trace_jsonl(std::ostream& os, const EpisodeTrace& t) {
  for (const auto& s : t.steps) os << to_json(s).dump() << '\n';
}

inline void write_trace_jsonl(const std::string& path, const EpisodeTrace& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trace_jsonl(os, t);
}

inline std::vector<EpisodeStep> read_trace_jsonl(std::istream& is) {
  std::vector<EpisodeStep> out;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) out.push_back(step_from_json(nlohmann::json::parse(line)));
  return out;
}

/// Full trace including goal and outcome, used inside bench reports.
inline nlohmann::json to_json(const EpisodeTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  nlohmann::json j{{"x_ref", t.goal.x_ref},
                   {"tol", t.goal.tol},
                   {"initial_true", t.initial_true},
                   {"initial_observed", t.initial_observed},
                   {"final_true", t.final_true},
                   {"final_observed", t.final_observed},
                   {"success", t.success},
                   {"outcome", t.outcome},
                   {"n_actions", t.n_actions()},
                   {"steps", steps}};
  if (!t.error.empty()) j["error"] = t.error;
  return j;
}

}  // namespace uamcts::pouring
