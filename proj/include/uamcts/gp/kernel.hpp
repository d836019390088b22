#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace uamcts::gp {

inline constexpr std::size_t kFeatureDim = 3;

/// GP input: current level (%), tilt (rad), duration (s).
struct Feature {
  double level = 0.0;
  double alpha = 0.0;
  double duration = 0.0;

  std::array<double, kFeatureDim> values() const { return {level, alpha, duration}; }
  bool finite() const {
    return std::isfinite(level) && std::isfinite(alpha) && std::isfinite(duration);
  }

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Dot-product + rational-quadratic kernel hyperparameters.
struct KernelParams {
  double dot_sigma0_sq = 1.0;
  double rq_scale = 1.0;
  double rq_alpha = 1.0;
  double noise_var = 1.0;

  void validate() const {
    if (!std::isfinite(dot_sigma0_sq) || dot_sigma0_sq < 0)
      throw std::invalid_argument("dot_sigma0_sq must be finite and >= 0");
    if (!std::isfinite(rq_scale) || rq_scale <= 0)
      throw std::invalid_argument("rq_scale must be finite and > 0");
    if (!std::isfinite(rq_alpha) || rq_alpha <= 0)
      throw std::invalid_argument("rq_alpha must be finite and > 0");
    if (!std::isfinite(noise_var) || noise_var < 0)
      throw std::invalid_argument("noise_var must be finite and >= 0");
  }

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

inline double dot_term(const KernelParams& p, const std::array<double, kFeatureDim>& a,
                       const std::array<double, kFeatureDim>& b) {
  return p.dot_sigma0_sq + a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double rq_term_sq(const KernelParams& p, double sq_dist) {
  const double base = 1.0 + sq_dist / (2.0 * p.rq_alpha * p.rq_scale * p.rq_scale);
  if (p.rq_alpha == 1.0) return 1.0 / base;
  return std::pow(base, -p.rq_alpha);
}

inline double rq_term(const KernelParams& p, const std::array<double, kFeatureDim>& a,
                      const std::array<double, kFeatureDim>& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < kFeatureDim; ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return rq_term_sq(p, sq);
}

/// k(a, b) = (sigma0^2 + a.b) + (1 + |a-b|^2 / (2 alpha l^2))^-alpha.
/// Evaluated on the features exactly as given; GpModel normalizes first.
inline double kernel_eval(const KernelParams& p, const std::array<double, kFeatureDim>& a,
                          const std::array<double, kFeatureDim>& b) {
  return dot_term(p, a, b) + rq_term(p, a, b);
}

inline double kernel_eval(const KernelParams& p, const Feature& z1, const Feature& z2) {
  if (!z1.finite() || !z2.finite()) throw std::invalid_argument("kernel_eval: non-finite feature");
  return kernel_eval(p, z1.values(), z2.values());
}

}  // namespace uamcts::gp
