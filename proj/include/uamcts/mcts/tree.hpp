#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace uamcts::mcts {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

template <class State, class Action>
struct SearchNode {
  State state{};
  std::optional<Action> action;  // generating action; empty at the root
  int action_index = -1;         // position in the parent's legal action list
  int depth = 0;
  std::int64_t visits = 0;  // N
  double value_sum = 0.0;   // Q
  double mde = 0.0;         // mde(parent.state, action), fixed at creation
  double transition_reward = 0.0;
  bool terminal = false;
  bool fully_expanded = false;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;

  double mean_value() const { return visits > 0 ? value_sum / static_cast<double>(visits) : 0.0; }
};

/// Arena-allocated search tree; node 0 is the root.
template <class State, class Action>
class SearchTree {
 public:
  using Node = SearchNode<State, Action>;

  NodeId reset(const State& root_state) {
    nodes_.clear();
    Node root;
    root.state = root_state;
    nodes_.push_back(std::move(root));
    return 0;
  }

  NodeId add_child(NodeId parent, const State& state, const Action& action, int action_index, double mde,
                   double transition_reward, bool terminal) {
    Node n;
    n.state = state;
    n.action = action;
    n.action_index = action_index;
    n.depth = nodes_[static_cast<std::size_t>(parent)].depth + 1;
    n.mde = mde;
    n.transition_reward = transition_reward;
    n.terminal = terminal;
    n.parent = parent;
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(n));
    nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
  }

  Node& operator[](NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& operator[](NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

}  // namespace uamcts::mcts
