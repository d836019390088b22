#pragma once

#include <json.hpp>
#include <stdexcept>
#include <vector>

#include "uamcts/mcts/domain.hpp"
#include "uamcts/pouring/model.hpp"
#include "uamcts/pouring/types.hpp"

namespace uamcts::pouring {

inline constexpr int kDefaultMaxActions = 10;

/// Target band [x_ref - tol, x_ref + tol].
struct GoalSpec {
  double x_ref = 50.0;
  double tol = 2.5;

  double lower() const { return x_ref - tol; }
  double upper() const { return x_ref + tol; }
  bool contains(double level) const { return level >= lower() && level <= upper(); }

  void validate() const {
    if (!(tol > 0)) throw std::invalid_argument("goal tolerance must be > 0");
    if (!(x_ref - tol > 0) || !(x_ref + tol <= 100))
      throw std::invalid_argument("goal must satisfy x_ref - c > 0 and x_ref + c <= 100");
  }
};

/// Terminal once the predicted level reaches the band, or past n_max.
inline bool is_terminal_level(double predicted, int k, const GoalSpec& goal, int n_max) {
  return predicted >= goal.lower() || k > n_max;
}

/// Sparse reward: 1 + 1/(k+1) for a terminal transition whose predicted
/// level lies in the goal band, 0 otherwise. A depth-out below the band
/// earns nothing.
inline double reward_level(double predicted, int k, const GoalSpec& goal, int n_max) {
  if (!is_terminal_level(predicted, k, goal, n_max)) return 0.0;
  return goal.contains(predicted) ? 1.0 + 1.0 / (k + 1.0) : 0.0;
}

inline bool is_terminal(const PourState& state, const PourAction& action, int k, const GoalSpec& goal,
                        const TransitionModel& model, int n_max = kDefaultMaxActions) {
  return is_terminal_level(model.predict(state, action).mean, k, goal, n_max);
}

inline double reward(const PourState& state, const PourAction& action, int k, const GoalSpec& goal,
                     const TransitionModel& model, int n_max = kDefaultMaxActions) {
  return reward_level(model.predict(state, action).mean, k, goal, n_max);
}

inline std::vector<PourAction> legal_actions(const PourState&, int, const ActionGrid& grid = {}) {
  return grid.actions();
}

/// Adapter exposing the pouring problem to the tree search.
class PourDomain {
 public:
  using State = PourState;
  using Action = PourAction;

  PourDomain(const TransitionModel& model, GoalSpec goal, ActionGrid grid = {}, int n_max = kDefaultMaxActions)
      : model_(&model), goal_(goal), actions_(grid.actions()), n_max_(n_max) {
    goal_.validate();
  }

  const std::vector<PourAction>& legal_actions(const PourState&, int) const { return actions_; }

  mcts::Transition<PourState> model_step(const PourState& s, const PourAction& a) const {
    const auto p = model_->predict(s, a);
    return {{p.mean}, p.mde};
  }

  bool is_terminal(const PourState&, const PourAction&, const PourState& next, int k) const {
    return is_terminal_level(next.level, k, goal_, n_max_);
  }

  double reward(const PourState&, const PourAction&, const PourState& next, int k) const {
    return reward_level(next.level, k, goal_, n_max_);
  }

  PourState inflate(const PourState& s, double amount) const { return {clamp_level(s.level + amount)}; }

  const GoalSpec& goal() const { return goal_; }
  int n_max() const { return n_max_; }

 private:
  const TransitionModel* model_;
  GoalSpec goal_;
  std::vector<PourAction> actions_;
  int n_max_;
};

static_assert(mcts::InflatableDomain<PourDomain>);

inline void to_json(nlohmann::json& j, const PourState& s) { j = s.level; }
inline void to_json(nlohmann::json& j, const PourAction& a) { j = {{"alpha", a.alpha}, {"d", a.duration}}; }

}  // namespace uamcts::pouring
