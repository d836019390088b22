#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uamcts/common/error.hpp"
#include "uamcts/gp/gp_model.hpp"

namespace uamcts::gp {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Box over which fit_hyperparams searches. Positive ranges are gridded and
/// refined in log space; a range starting at zero is handled linearly.
struct SearchSpace {
  Bounds dot_sigma0_sq{1e-2, 1e4};
  Bounds rq_scale{0.05, 10.0};
  Bounds rq_alpha{0.1, 10.0};
  Bounds noise_var{0.1, 100.0};
  int grid_points = 4;  // per dimension
  int refine_starts = 3;

  static SearchSpace single(const KernelParams& p) {
    SearchSpace s;
    s.dot_sigma0_sq = {p.dot_sigma0_sq, p.dot_sigma0_sq};
    s.rq_scale = {p.rq_scale, p.rq_scale};
    s.rq_alpha = {p.rq_alpha, p.rq_alpha};
    s.noise_var = {p.noise_var, p.noise_var};
    return s;
  }

  void validate() const {
    for (const Bounds* b : {&dot_sigma0_sq, &rq_scale, &rq_alpha, &noise_var})
      if (!(b->lo >= 0) || !(b->hi >= b->lo) || !std::isfinite(b->hi))
        throw std::invalid_argument("hyperparameter bounds must satisfy 0 <= lo <= hi < inf");
    if (!(rq_scale.lo > 0) || !(rq_alpha.lo > 0))
      throw std::invalid_argument("rq_scale and rq_alpha lower bounds must be positive");
    if (grid_points < 1 || refine_starts < 1) throw std::invalid_argument("grid_points/refine_starts must be >= 1");
  }
};

struct HyperparamFit {
  KernelParams params;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool used_fallback = false;  // every candidate failed numerically
};

namespace detail {

using ParamVec = std::array<double, 4>;

inline KernelParams to_params(const ParamVec& v) { return {v[0], v[1], v[2], v[3]}; }

inline std::array<const Bounds*, 4> bounds_of(const SearchSpace& s) {
  return {&s.dot_sigma0_sq, &s.rq_scale, &s.rq_alpha, &s.noise_var};
}

inline std::vector<double> axis(const Bounds& b, int points) {
  if (b.lo == b.hi) return {b.lo};
  if (points == 1) return {b.lo > 0 ? std::sqrt(b.lo * b.hi) : 0.5 * (b.lo + b.hi)};
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out.push_back(b.lo > 0 ? std::exp(std::log(b.lo) + t * (std::log(b.hi) - std::log(b.lo)))
                           : b.lo + t * (b.hi - b.lo));
  }
  return out;
}

struct Candidate {
  ParamVec x{};
  double lml = -std::numeric_limits<double>::infinity();
};

/// Strict ordering: larger likelihood wins; ties go to the smaller
/// rq_scale, then the smaller noise_var.
inline bool better(const Candidate& a, const Candidate& b) {
  if (a.lml != b.lml) return a.lml > b.lml;
  if (a.x[1] != b.x[1]) return a.x[1] < b.x[1];
  return a.x[3] < b.x[3];
}

inline double evaluate(const Dataset& data, const FeatureScaler& scaler, const TargetScaler& target,
                       const ParamVec& x) {
  try {
    const double v = GpModel::fit(data, to_params(x), scaler, target).log_marginal_likelihood();
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

/// Maximizes the log marginal likelihood over `space`: exhaustive grid,
/// then coordinate descent from the best `refine_starts` grid points.
/// Deterministic for fixed inputs.
inline HyperparamFit fit_hyperparams(const Dataset& data, const SearchSpace& space = {}) {
  if (data.size() < 2) throw std::invalid_argument("fit_hyperparams: need at least 2 points");
  space.validate();
  const auto scaler = FeatureScaler::fit(data);
  const auto target = TargetScaler::fit(data);
  const auto bounds = detail::bounds_of(space);

  std::array<std::vector<double>, 4> axes;
  for (std::size_t d = 0; d < 4; ++d) axes[d] = detail::axis(*bounds[d], space.grid_points);

  std::vector<detail::Candidate> grid;
  for (double a : axes[0])
    for (double b : axes[1])
      for (double c : axes[2])
        for (double e : axes[3]) {
          detail::Candidate cand{{a, b, c, e}, 0.0};
          cand.lml = detail::evaluate(data, scaler, target, cand.x);
          grid.push_back(cand);
        }
  std::sort(grid.begin(), grid.end(), detail::better);

  detail::Candidate best = grid.front();
  const int starts = std::min<int>(space.refine_starts, static_cast<int>(grid.size()));
  for (int s = 0; s < starts; ++s) {
    detail::Candidate cur = grid[static_cast<std::size_t>(s)];
    if (!std::isfinite(cur.lml)) break;
    double step = 0.5;  // log units, or fraction of range for linear axes
    for (int round = 0; round < 400 && step > 1e-4; ++round) {
      bool improved = false;
      for (std::size_t d = 0; d < 4; ++d) {
        const Bounds& b = *bounds[d];
        if (b.lo == b.hi) continue;
        for (double dir : {1.0, -1.0}) {
          detail::Candidate trial = cur;
          trial.x[d] = b.lo > 0 ? cur.x[d] * std::exp(dir * step) : cur.x[d] + dir * step * (b.hi - b.lo);
          trial.x[d] = std::clamp(trial.x[d], b.lo, b.hi);
          if (trial.x[d] == cur.x[d]) continue;
          trial.lml = detail::evaluate(data, scaler, target, trial.x);
          if (detail::better(trial, cur)) {
            cur = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (detail::better(cur, best)) best = cur;
  }

  if (!std::isfinite(best.lml)) return {KernelParams{}, best.lml, true};
  return {detail::to_params(best.x), best.lml, false};
}

}  // namespace uamcts::gp
