// Fit a GP to 10 random pours and fill a glass to 60% with each planner.

#include <cstdio>
#include <string>

#include "uamcts/bench/methods.hpp"
#include "uamcts/gp/hyperparams.hpp"
#include "uamcts/pouring/episode.hpp"

using namespace uamcts;

int main() {
  const pouring::GroundTruth truth;
  Rng data_rng = make_rng(1, "dataset");
  const auto data = pouring::gen_dataset(truth, 10, data_rng);

  const auto fit = gp::fit_hyperparams(data);
  const pouring::GpTransitionModel model(gp::GpModel::fit(data, fit.params));
  std::printf("GP: rq_scale %.3f rq_alpha %.3f noise %.3f\n", fit.params.rq_scale, fit.params.rq_alpha,
              fit.params.noise_var);

  const pouring::GoalSpec goal{60.0, 2.5};
  for (const auto& method : bench::kMethods) {
    pouring::EpisodeConfig ec;
    ec.search = method.apply(ec.search);
    Rng rng = make_rng(1, "episode", {0});
    const auto trace = pouring::run_episode(truth, model, goal, ec, rng);
    std::printf("%-14s", std::string(method.name).c_str());
    for (const auto& s : trace.steps) std::printf(" (%.2f, %.1f)", s.action.alpha, s.action.duration);
    std::printf("  final %.1f%% %s\n", trace.final_true, trace.outcome.c_str());
  }
}
