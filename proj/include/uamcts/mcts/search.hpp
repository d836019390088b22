#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uamcts/common/error.hpp"
#include "uamcts/common/random.hpp"
#include "uamcts/mcts/config.hpp"
#include "uamcts/mcts/domain.hpp"
#include "uamcts/mcts/scoring.hpp"
#include "uamcts/mcts/tree.hpp"

namespace uamcts::mcts {

/// next = model mean + w * mde, clamped by the domain.
template <InflatableDomain D>
typename D::State inflated_step(const D& domain, const typename D::State& state, const typename D::Action& action,
                                double w) {
  const Transition<typename D::State> t = domain.model_step(state, action);
  return domain.inflate(t.next, w * t.mde);
}

namespace detail {

template <class Tree>
bool all_mdes_equal(const Tree& tree, const std::vector<NodeId>& ids) {
  for (NodeId id : ids)
    if (tree[id].mde != tree[ids.front()].mde) return false;
  return true;
}

}  // namespace detail

/// Picks the next child of a fully expanded node. Unvisited children come
/// first (uncertainty-aware: lowest mde first; otherwise action order).
/// Among visited children the standard rule maximizes UCT; the
/// uncertainty-aware rule maximizes UCT * (1 - softmax(mde / tau)), with
/// ties going to the lower mde and then the lower action index.
template <class State, class Action>
NodeId select_child(const SearchTree<State, Action>& tree, NodeId parent, const SearchConfig& config) {
  const auto& node = tree[parent];
  const auto& kids = node.children;
  if (kids.empty()) throw std::logic_error("select_child: node has no children");
  if (kids.size() == 1) return kids.front();
  const bool aware = config.variant == Variant::kUncertaintyAware;

  auto earlier = [&](NodeId a, NodeId b) {
    if (aware && tree[a].mde != tree[b].mde) return tree[a].mde < tree[b].mde;
    return tree[a].action_index < tree[b].action_index;
  };

  NodeId unvisited = kNoNode;
  for (NodeId id : kids)
    if (tree[id].visits == 0 && (unvisited == kNoNode || earlier(id, unvisited))) unvisited = id;
  if (unvisited != kNoNode) return unvisited;

  // With identical mdes the discount is a common factor and cannot change
  // the argmax, so it is skipped to keep the choice bit-identical.
  std::vector<double> discount;
  if (aware && !detail::all_mdes_equal(tree, kids)) {
    std::vector<double> mdes;
    mdes.reserve(kids.size());
    for (NodeId id : kids) mdes.push_back(tree[id].mde);
    discount = softmax_weights(mdes, config.tau);
  }

  NodeId best = kNoNode;
  double best_score = 0.0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    const auto& c = tree[kids[i]];
    double score = uct_score(c.value_sum, c.visits, node.visits, config.c_uct);
    if (!discount.empty()) score *= 1.0 - discount[i];
    if (best == kNoNode || score > best_score || (score == best_score && earlier(kids[i], best))) {
      best = kids[i];
      best_score = score;
    }
  }
  return best;
}

template <class Action>
struct SearchResult {
  Action action{};
  int action_index = -1;
  std::int64_t iterations = 0;
};

/// Monte Carlo tree search over a PlanningDomain. One instance owns one
/// tree and one RNG; it is not meant to be shared between threads.
template <PlanningDomain D>
class Mcts {
 public:
  using State = typename D::State;
  using Action = typename D::Action;
  using Tree = SearchTree<State, Action>;

  struct Step {
    State next;
    double mde = 0.0;
    double reward = 0.0;
    bool terminal = false;
  };

  Mcts(const D& domain, SearchConfig config) : domain_(&domain), config_(std::move(config)), rng_(config_.rng_seed) {
    config_.validate();
    if (config_.variant == Variant::kInflated && !InflatableDomain<D>)
      throw std::invalid_argument("inflated variant requires a domain with inflate()");
  }

  /// Runs the configured budget from `root_state` and returns the action of
  /// the most visited root child (ties: higher Q/N, then action order).
  SearchResult<Action> search(const State& root_state) {
    reset(root_state);
    if (domain_->legal_actions(root_state, 0).empty()) throw DomainError("search: root has no legal actions");
    expand(tree_.root());

    std::int64_t done = 0;
    if (config_.wall_clock_budget) {
      using clock = std::chrono::steady_clock;
      const auto deadline = clock::now() + std::chrono::duration<double>(*config_.wall_clock_budget);
      while (clock::now() < deadline) {
        iterate();
        ++done;
      }
      if (done == 0) throw TimeoutError("search: wall-clock budget expired before the first iteration");
    } else {
      for (; done < config_.iteration_budget; ++done) iterate();
    }

    const NodeId best = best_root_child();
    return {*tree_[best].action, tree_[best].action_index, done};
  }

  /// One select / expand / simulate / backpropagate pass.
  void iterate() {
    NodeId v = select();
    const auto& n = tree_[v];
    if (!n.terminal && !n.fully_expanded && n.visits > 0 && n.depth < config_.max_depth) v = expand(v);
    backpropagate(v, simulate(v));
  }

  void reset(const State& root_state) {
    tree_.reset(root_state);
    rng_.seed(config_.rng_seed);
  }

  /// Descends through fully expanded, non-terminal nodes.
  NodeId select() const {
    NodeId v = tree_.root();
    while (tree_[v].fully_expanded && !tree_[v].terminal && !tree_[v].children.empty())
      v = select_child(tree_, v, config_);
    return v;
  }

  /// Creates the children of `leaf` in one shot. The uncertainty-aware
  /// variant keeps each child with keep_probability(mde, mean mde, h), and
  /// always keeps at least the lowest-mde child. Returns one kept child
  /// chosen uniformly, or `leaf` itself if it has no legal actions.
  NodeId expand(NodeId leaf) {
    if (tree_[leaf].fully_expanded) throw std::logic_error("expand: node already expanded");
    const State state = tree_[leaf].state;
    const int depth = tree_[leaf].depth;
    const auto& actions = domain_->legal_actions(state, depth);
    if (actions.empty()) {
      tree_[leaf].terminal = true;
      tree_[leaf].fully_expanded = true;
      return leaf;
    }

    std::vector<Step> steps;
    steps.reserve(actions.size());
    for (const auto& a : actions) steps.push_back(propagate(state, a, depth));

    std::vector<bool> keep(actions.size(), true);
    if (config_.variant == Variant::kUncertaintyAware) {
      bool equal = true;
      double theta = 0.0;
      for (const auto& s : steps) {
        theta += s.mde;
        equal = equal && s.mde == steps.front().mde;
      }
      theta /= static_cast<double>(steps.size());
      // Identical mdes carry no preference; rejection is skipped.
      if (!equal) {
        bool any = false;
        std::size_t lowest = 0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
          const double p = keep_probability(steps[i].mde, theta, config_.steepness);
          const double u = uniform01(rng_);
          keep[i] = config_.inverted_expansion ? u > p : u < p;
          any = any || keep[i];
          if (steps[i].mde < steps[lowest].mde) lowest = i;
        }
        if (!any) keep[lowest] = true;
      }
    }

    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (!keep[i]) continue;
      tree_.add_child(leaf, steps[i].next, actions[i], static_cast<int>(i), steps[i].mde, steps[i].reward,
                      steps[i].terminal);
    }
    tree_[leaf].fully_expanded = true;
    const auto& kids = tree_[leaf].children;
    return kids[uniform_index(rng_, kids.size())];
  }

  /// Random rollout from `start`; returns the accumulated reward, starting
  /// with the reward of the transition that produced `start`.
  double simulate(NodeId start) {
    const auto& node = tree_[start];
    double total = node.transition_reward;
    if (node.terminal) return total;
    State s = node.state;
    for (int k = node.depth; k < config_.max_depth; ++k) {
      const auto& actions = domain_->legal_actions(s, k);
      if (actions.empty()) break;
      const Action& a = actions[uniform_index(rng_, actions.size())];
      Step step = propagate(s, a, k);
      total += step.reward;
      if (step.terminal) break;
      s = std::move(step.next);
    }
    return total;
  }

  void backpropagate(NodeId node, double reward) {
    for (NodeId v = node; v != kNoNode; v = tree_[v].parent) {
      tree_[v].visits += 1;
      tree_[v].value_sum += reward;
    }
  }

  /// Model propagation as seen by the configured variant.
  Step propagate(const State& s, const Action& a, int depth) const {
    Transition<State> t = domain_->model_step(s, a);
    Step out{std::move(t.next), t.mde, 0.0, false};
    if constexpr (InflatableDomain<D>) {
      if (config_.variant == Variant::kInflated) out.next = domain_->inflate(out.next, config_.inflation_w * t.mde);
    }
    out.terminal = domain_->is_terminal(s, a, out.next, depth);
    out.reward = domain_->reward(s, a, out.next, depth);
    return out;
  }

  NodeId best_root_child() const {
    const auto& kids = tree_[tree_.root()].children;
    if (kids.empty()) throw DomainError("search: root has no children");
    NodeId best = kids.front();
    for (NodeId id : kids) {
      const auto& c = tree_[id];
      const auto& b = tree_[best];
      if (c.visits != b.visits) {
        if (c.visits > b.visits) best = id;
      } else if (c.mean_value() != b.mean_value()) {
        if (c.mean_value() > b.mean_value()) best = id;
      } else if (c.action_index < b.action_index) {
        best = id;
      }
    }
    return best;
  }

  const Tree& tree() const { return tree_; }
  Tree& tree() { return tree_; }
  const SearchConfig& config() const { return config_; }
  Rng& rng() { return rng_; }

 private:
  const D* domain_;
  SearchConfig config_;
  Rng rng_;
  Tree tree_;
};

/// Convenience wrapper: one search with a fresh tree.
template <PlanningDomain D>
SearchResult<typename D::Action> search(const D& domain, const typename D::State& root, const SearchConfig& config) {
  Mcts<D> m(domain, config);
  return m.search(root);
}

}  // namespace uamcts::mcts
