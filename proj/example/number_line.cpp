// A custom planning domain: walk from 0 to exactly 6 in steps of +1, +2 or
// +3. The +3 step comes from a poorly known model (high deviation
// estimate), so the uncertainty-aware variant plans around it.

#include <cstdio>
#include <vector>

#include "uamcts/mcts/search.hpp"

namespace {

struct NumberLine {
  using State = int;
  using Action = int;

  int goal = 6;
  int horizon = 6;
  std::vector<int> steps{1, 2, 3};

  const std::vector<int>& legal_actions(int, int) const { return steps; }

  uamcts::mcts::Transition<int> model_step(int s, int a) const { return {s + a, a == 3 ? 5.0 : 0.1}; }

  bool is_terminal(int, int, int next, int k) const { return next >= goal || k + 1 >= horizon; }

  double reward(int, int, int next, int k) const { return next == goal ? 1.0 + 1.0 / (k + 1.0) : 0.0; }
};

}  // namespace

int main() {
  const NumberLine domain;
  for (auto variant : {uamcts::mcts::Variant::kStandard, uamcts::mcts::Variant::kUncertaintyAware}) {
    uamcts::mcts::SearchConfig config;
    config.variant = variant;
    config.iteration_budget = 3000;
    config.rng_seed = 7;

    std::printf("%s:", std::string(uamcts::mcts::to_string(variant)).c_str());
    int s = 0;
    for (int k = 0; s < domain.goal && k < domain.horizon; ++k) {
      const int a = uamcts::mcts::search(domain, s, config).action;
      std::printf(" +%d", a);
      s += a;
    }
    std::printf("  -> %d\n", s);
  }
}
