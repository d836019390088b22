#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "uamcts/common/random.hpp"
#include "uamcts/gp/dataset.hpp"
#include "uamcts/pouring/types.hpp"

namespace uamcts::pouring {

/// Synthetic stand-in for the physical pouring system:
///   next = min(100, level + kappa * d * max(0, alpha - alpha0)^exponent)
/// Process noise is zero; only observations are noisy.
struct GroundTruth {
  double kappa = 25.0;
  double alpha0 = 0.5;
  double exponent = 1.5;
  double obs_noise_sd = 1.0;

  void validate() const {
    if (!(kappa > 0)) throw std::invalid_argument("ground truth kappa must be > 0");
    if (!(alpha0 >= 0)) throw std::invalid_argument("ground truth alpha0 must be >= 0");
    if (!(exponent > 0)) throw std::invalid_argument("ground truth exponent must be > 0");
    if (!(obs_noise_sd >= 0)) throw std::invalid_argument("ground truth obs_noise_sd must be >= 0");
  }
};

inline PourState true_step(const GroundTruth& gt, const PourState& state, const PourAction& action) {
  const double excess = std::max(0.0, action.alpha - gt.alpha0);
  const double poured = gt.kappa * action.duration * std::pow(excess, gt.exponent);
  return {std::min(kMaxLevel, state.level + poured)};
}

/// Noisy level measurement, clamped to [0, 100].
inline double observe(const GroundTruth& gt, double true_level, Rng& rng) {
  if (gt.obs_noise_sd == 0.0) return clamp_level(true_level);
  std::normal_distribution<double> noise(0.0, gt.obs_noise_sd);
  return clamp_level(true_level + noise(rng));
}

/// n random pours: true level ~ U[0, max_level], action uniform over the
/// grid. Both the feature level and the target are observations.
inline gp::Dataset gen_dataset(const GroundTruth& gt, std::size_t n, Rng& rng, const ActionGrid& grid = {},
                               double max_level = 80.0) {
  if (n < 1) throw std::invalid_argument("gen_dataset: n must be >= 1");
  const auto actions = grid.actions();
  std::vector<gp::Sample> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double level = uniform01(rng) * max_level;
    const PourAction a = actions[uniform_index(rng, actions.size())];
    const double seen = observe(gt, level, rng);
    const double next = observe(gt, true_step(gt, {level}, a).level, rng);
    rows.push_back({{seen, a.alpha, a.duration}, next});
  }
  return gp::Dataset(std::move(rows));
}

/// m rows drawn without replacement, kept in their original order.
inline gp::Dataset subsample(const gp::Dataset& data, std::size_t m, Rng& rng) {
  if (m < 1 || m > data.size()) throw std::invalid_argument("subsample: size out of range");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  std::vector<gp::Sample> rows;
  for (std::size_t i : idx) rows.push_back(data[i]);
  return gp::Dataset(std::move(rows));
}

}  // namespace uamcts::pouring
