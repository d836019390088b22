#pragma once

#include <json.hpp>

#include "uamcts/mcts/tree.hpp"

namespace uamcts::mcts {

/// One object per node: {id, parent, depth, state, gen_action, N, Q, mde_val}.
/// State and Action need nlohmann to_json overloads.
template <class State, class Action>
nlohmann::json dump_tree(const SearchTree<State, Action>& tree) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.nodes()[i];
    nlohmann::json j{{"id", i},       {"parent", n.parent}, {"depth", n.depth},  {"state", n.state},
                     {"N", n.visits}, {"Q", n.value_sum},   {"mde_val", n.mde}, {"terminal", n.terminal}};
    j["gen_action"] = n.action ? nlohmann::json(*n.action) : nlohmann::json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace uamcts::mcts
