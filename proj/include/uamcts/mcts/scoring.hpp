#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace uamcts::mcts {

/// UCT: Q/N + c * sqrt(ln N_parent / N). Unvisited children are never
/// scored; selection visits them first.
inline double uct_score(double value_sum, std::int64_t visits, std::int64_t parent_visits, double c_uct) {
  if (visits < 1 || parent_visits < 1) throw std::logic_error("uct_score: child and parent must be visited");
  const double n = static_cast<double>(visits);
  return value_sum / n + c_uct * std::sqrt(std::log(static_cast<double>(parent_visits)) / n);
}

/// delta_i = exp(m_i / tau) / sum_j exp(m_j / tau), with the max subtracted
/// before exponentiating.
inline std::vector<double> softmax_weights(std::span<const double> mdes, double tau) {
  if (mdes.empty()) throw std::invalid_argument("softmax_weights: empty input");
  if (!(tau > 0)) throw std::invalid_argument("softmax_weights: tau must be positive");
  const double top = *std::max_element(mdes.begin(), mdes.end());
  std::vector<double> w(mdes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mdes.size(); ++i) {
    w[i] = std::exp((mdes[i] - top) / tau);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

/// Probability that expansion keeps a child: 1 / (1 + exp(h (mde - theta))).
/// Strictly decreasing in mde for h > 0, and 0.5 at mde == theta.
inline double keep_probability(double mde, double theta, double steepness) {
  const double x = steepness * (mde - theta);
  if (x >= 0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

}  // namespace uamcts::mcts
