#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uamcts::mcts {

enum class Variant {
  kStandard,          // plain UCT, no rejection
  kUncertaintyAware,  // softmax-discounted selection + sigmoid rejection on expansion
  kInflated,          // plain UCT over an inflated model: next = mean + w * mde
};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kStandard: return "standard";
    case Variant::kUncertaintyAware: return "uncertainty_aware";
    case Variant::kInflated: return "inflated";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  if (s == "standard") return Variant::kStandard;
  if (s == "uncertainty_aware") return Variant::kUncertaintyAware;
  if (s == "inflated") return Variant::kInflated;
  throw std::invalid_argument("unknown search variant '" + std::string(s) + "'");
}

struct SearchConfig {
  Variant variant = Variant::kStandard;
  double c_uct = std::numbers::sqrt2;
  double tau = 0.1;        // softmax temperature
  double steepness = 10;   // sigmoid steepness h
  double inflation_w = 2;  // w
  int iteration_budget = 2000;
  // When set, governs termination instead of iteration_budget.
  std::optional<double> wall_clock_budget;
  // Rollouts and expansion stop at this tree depth.
  int max_depth = 20;
  std::uint64_t rng_seed = 0;
  // Keep a child when u > sigmoid instead, which favors high-mde children.
  // Ablation only.
  bool inverted_expansion = false;

  void validate() const {
    if (!(c_uct > 0) || !std::isfinite(c_uct)) throw std::invalid_argument("c_uct must be positive");
    if (!(tau > 0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
    if (!(steepness >= 0) || !std::isfinite(steepness)) throw std::invalid_argument("steepness must be >= 0");
    if (!(inflation_w >= 0) || !std::isfinite(inflation_w)) throw std::invalid_argument("inflation_w must be >= 0");
    if (!wall_clock_budget && iteration_budget < 1) throw std::invalid_argument("iteration_budget must be >= 1");
    if (wall_clock_budget && !(*wall_clock_budget > 0)) throw std::invalid_argument("wall_clock_budget must be > 0");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  }
};

}  // namespace uamcts::mcts
