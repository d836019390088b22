#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain vectors, explicit inverses, exhaustive enumeration.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Gauss-Jordan elimination with partial pivoting. Also returns log|det|.
inline Matrix invert(Matrix a, double* log_det = nullptr) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  double ld = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw std::runtime_error("oracle: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double p = a[col][col];
    ld += std::log(std::abs(p));
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  if (log_det) *log_det = ld;
  return inv;
}

struct Point {
  double x[3];
  double y;  // next level
};

struct Params {
  double sigma0_sq, length, alpha, noise;
};

/// Dot-product + rational-quadratic kernel written out longhand.
inline double kernel(const Params& p, const double* a, const double* b) {
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double d2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]);
  return p.sigma0_sq + dot + std::pow(1.0 + d2 / (2.0 * p.alpha * p.length * p.length), -p.alpha);
}

/// GP with per-dimension standardized inputs, and standardized targets
/// y - level, solved by explicit inversion of K + noise/s^2 I.
struct Gp {
  Params p;
  std::vector<Point> data;
  double mu[3], sd[3];
  double t_mean = 0.0, t_sd = 1.0;
  std::vector<std::vector<double>> z;
  std::vector<double> t;
  Matrix k_inv;
  double log_det = 0.0;

  Gp(Params params, std::vector<Point> pts) : p(params), data(std::move(pts)) {
    const double n = static_cast<double>(data.size());
    for (int d = 0; d < 3; ++d) {
      double m = 0.0, v = 0.0;
      for (const auto& q : data) m += q.x[d];
      m /= n;
      for (const auto& q : data) v += (q.x[d] - m) * (q.x[d] - m);
      v /= n;
      mu[d] = m;
      sd[d] = v > 1e-24 ? std::sqrt(v) : 1.0;
    }
    double m = 0.0, v = 0.0;
    for (const auto& q : data) m += q.y - q.x[0];
    m /= n;
    for (const auto& q : data) v += (q.y - q.x[0] - m) * (q.y - q.x[0] - m);
    v /= n;
    t_mean = m;
    t_sd = v > 1e-24 ? std::sqrt(v) : 1.0;

    for (const auto& q : data) {
      z.push_back(scale(q.x));
      t.push_back((q.y - q.x[0] - t_mean) / t_sd);
    }
    const std::size_t h = data.size();
    Matrix k(h, std::vector<double>(h));
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) k[i][j] = kernel(p, z[i].data(), z[j].data()) + (i == j ? p.noise / (t_sd * t_sd) : 0.0);
    k_inv = invert(k, &log_det);
  }

  std::vector<double> scale(const double* x) const {
    return {(x[0] - mu[0]) / sd[0], (x[1] - mu[1]) / sd[1], (x[2] - mu[2]) / sd[2]};
  }

  /// Unclamped mean and latent variance, in percent units.
  std::pair<double, double> predict(const double* x) const {
    const auto q = scale(x);
    const std::size_t h = data.size();
    std::vector<double> ks(h);
    for (std::size_t i = 0; i < h; ++i) ks[i] = kernel(p, z[i].data(), q.data());
    double mean = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        mean += ks[i] * k_inv[i][j] * t[j];
        quad += ks[i] * k_inv[i][j] * ks[j];
      }
    const double var = kernel(p, q.data(), q.data()) - quad;
    return {x[0] + t_mean + t_sd * mean, t_sd * t_sd * var};
  }

  /// log p(y) of the raw targets.
  double log_likelihood() const {
    const std::size_t h = data.size();
    double quad = 0.0;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) quad += t[i] * k_inv[i][j] * t[j];
    const double n = static_cast<double>(h);
    return -0.5 * quad - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi) - n * std::log(t_sd);
  }
};

/// Three decisions with three options each; only the final step pays.
/// The best leaf sits under first action 1 even though its siblings are
/// poor, while first action 0 has the best average.
struct Chain {
  static constexpr int kDepth = 3;
  static constexpr int kWidth = 3;

  static double leaf_value(int a0, int a1, int a2) {
    if (a0 == 0) return 0.6 + 0.01 * (a1 + a2);
    if (a0 == 1) return (a1 == 2 && a2 == 1) ? 1.0 : 0.05;
    return 0.3;
  }

  /// Exhaustive search; returns (best first action, best value).
  static std::pair<int, double> best_first_action() {
    int best_a = -1;
    double best_v = -1.0;
    for (int a0 = 0; a0 < kWidth; ++a0)
      for (int a1 = 0; a1 < kWidth; ++a1)
        for (int a2 = 0; a2 < kWidth; ++a2) {
          const double v = leaf_value(a0, a1, a2);
          if (v > best_v) {
            best_v = v;
            best_a = a0;
          }
        }
    return {best_a, best_v};
  }
};

}  // namespace oracle
