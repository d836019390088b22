#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "uamcts/common/error.hpp"
#include "uamcts/gp/dataset.hpp"
#include "uamcts/gp/kernel.hpp"

namespace uamcts::gp {

/// Per-dimension affine map to zero mean / unit variance of the training
/// features. Constant dimensions keep unit scale.
struct FeatureScaler {
  std::array<double, kFeatureDim> offset{0.0, 0.0, 0.0};
  std::array<double, kFeatureDim> scale{1.0, 1.0, 1.0};

  static FeatureScaler fit(const Dataset& data) {
    FeatureScaler s;
    const double n = static_cast<double>(data.size());
    if (data.empty()) return s;
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
      double mean = 0.0;
      for (const auto& p : data.points()) mean += p.feature.values()[d];
      mean /= n;
      double var = 0.0;
      for (const auto& p : data.points()) {
        const double diff = p.feature.values()[d] - mean;
        var += diff * diff;
      }
      var /= n;
      s.offset[d] = mean;
      s.scale[d] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    return s;
  }

  std::array<double, kFeatureDim> apply(const Feature& f) const {
    const auto v = f.values();
    return {(v[0] - offset[0]) / scale[0], (v[1] - offset[1]) / scale[1], (v[2] - offset[2]) / scale[2]};
  }

  friend bool operator==(const FeatureScaler&, const FeatureScaler&) = default;
};

/// The GP regresses the poured amount r = next_level - level (prior mean:
/// the level stays put), standardized to zero mean / unit variance. The
/// kernel has unit amplitude, so unscaled percentages would otherwise be
/// explained almost entirely as noise.
inline double residual_target(const Sample& s) { return s.next_level - s.feature.level; }

struct TargetScaler {
  double offset = 0.0;
  double scale = 1.0;

  static TargetScaler fit(const Dataset& data) {
    TargetScaler s;
    if (data.empty()) return s;
    const double n = static_cast<double>(data.size());
    double mean = 0.0;
    for (const auto& p : data.points()) mean += residual_target(p);
    mean /= n;
    double var = 0.0;
    for (const auto& p : data.points()) var += (residual_target(p) - mean) * (residual_target(p) - mean);
    var /= n;
    s.offset = mean;
    s.scale = var > 1e-24 ? std::sqrt(var) : 1.0;
    return s;
  }

  friend bool operator==(const TargetScaler&, const TargetScaler&) = default;
};

struct Prediction {
  double mean = 0.0;      // clamped to [0, 100]
  double raw_mean = 0.0;  // unclamped posterior mean
  double variance = 0.0;  // latent-function variance in %^2, >= 0

  double stddev() const { return std::sqrt(variance); }
};

inline constexpr double kInitialJitter = 1e-10;
inline constexpr double kMaxJitter = 1e-4;

/// Fitted GP regressor. Immutable after construction, so concurrent
/// predictions are safe.
///
/// The kernel acts on normalized features and standardized residual
/// targets; noise_var is given in %^2 and divided by the target variance
/// internally. Means and variances are reported in percent.
class GpModel {
 public:
  static GpModel fit(const Dataset& data, const KernelParams& params) {
    return fit(data, params, FeatureScaler::fit(data), TargetScaler::fit(data));
  }

  static GpModel fit(const Dataset& data, const KernelParams& params, const FeatureScaler& scaler) {
    return fit(data, params, scaler, TargetScaler::fit(data));
  }

  static GpModel fit(const Dataset& data, const KernelParams& params, const FeatureScaler& scaler,
                     const TargetScaler& target_scaler) {
    if (data.empty()) throw std::invalid_argument("gp_fit: empty dataset");
    data.validate();
    params.validate();
    if (!(target_scaler.scale > 0)) throw std::invalid_argument("gp_fit: target scale must be positive");
    GpModel m;
    m.data_ = data;
    m.params_ = params;
    m.scaler_ = scaler;
    m.target_ = target_scaler;
    m.factorize();
    return m;
  }

  Prediction predict(const Feature& z) const {
    if (!z.finite()) throw std::invalid_argument("gp_predict: non-finite feature");
    const auto q = scaler_.apply(z);
    const Eigen::Index n = train_.rows();
    Eigen::VectorXd kstar(n);
    for (Eigen::Index i = 0; i < n; ++i) kstar[i] = kernel_eval(params_, row(i), q);

    Prediction p;
    p.raw_mean = z.level + target_.offset + target_.scale * kstar.dot(weights_);
    p.mean = std::clamp(p.raw_mean, 0.0, 100.0);

    const double prior = kernel_eval(params_, q, q);
    chol_.matrixL().solveInPlace(kstar);
    double var = prior - kstar.squaredNorm();
    if (var < 0.0) {
      const double tol = 1e-10 * std::max(1.0, prior);
      if (var < -tol) {
        std::ostringstream msg;
        msg << "gp_predict: negative variance " << var << " (prior " << prior << ")";
        throw NumericalError(msg.str());
      }
      var = 0.0;
    }
    p.variance = target_.scale * target_.scale * var;
    return p;
  }

  /// Latent variance before seeing any data, in %^2.
  double prior_variance(const Feature& z) const {
    const auto q = scaler_.apply(z);
    return target_.scale * target_.scale * kernel_eval(params_, q, q);
  }

  /// log p(y | z, params) of the training targets in percent.
  double log_marginal_likelihood() const {
    const double n = static_cast<double>(train_.rows());
    const auto& L = chol_.matrixLLT();
    double log_det_half = 0.0;
    for (Eigen::Index i = 0; i < L.rows(); ++i) log_det_half += std::log(L(i, i));
    return -0.5 * targets_.dot(weights_) - log_det_half - 0.5 * n * std::log(2.0 * std::numbers::pi) -
           n * std::log(target_.scale);
  }

  const Dataset& dataset() const { return data_; }
  const KernelParams& params() const { return params_; }
  const FeatureScaler& scaler() const { return scaler_; }
  const TargetScaler& target_scaler() const { return target_; }
  /// Lower-triangular factor of the standardized K + (noise + jitter) I.
  Eigen::MatrixXd cholesky_factor() const { return chol_.matrixL(); }
  /// Standardized K + (noise_var / scale^2) I, without jitter.
  const Eigen::MatrixXd& covariance() const { return gram_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double jitter() const { return jitter_; }

 private:
  GpModel() = default;

  std::array<double, kFeatureDim> row(Eigen::Index i) const {
    return {train_(i, 0), train_(i, 1), train_(i, 2)};
  }

  void factorize() {
    const auto n = static_cast<Eigen::Index>(data_.size());
    train_.resize(n, static_cast<Eigen::Index>(kFeatureDim));
    targets_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto q = scaler_.apply(data_[static_cast<std::size_t>(i)].feature);
      for (Eigen::Index d = 0; d < 3; ++d) train_(i, d) = q[static_cast<std::size_t>(d)];
      targets_[i] = (residual_target(data_[static_cast<std::size_t>(i)]) - target_.offset) / target_.scale;
    }
    gram_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) gram_(i, j) = gram_(j, i) = kernel_eval(params_, row(i), row(j));
    gram_.diagonal().array() += params_.noise_var / (target_.scale * target_.scale);

    if (try_factor(0.0)) return;
    for (double jitter = kInitialJitter; jitter <= kMaxJitter * 1.0000001; jitter *= 10.0)
      if (try_factor(jitter)) return;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    std::ostringstream msg;
    msg << "gp_fit: Cholesky failed after jitter " << kMaxJitter << " (n=" << n << ", min eigenvalue " << lo
        << ", max eigenvalue " << hi << ", condition " << (lo > 0 ? hi / lo : INFINITY) << ")";
    throw NumericalError(msg.str());
  }

  bool try_factor(double jitter) {
    Eigen::MatrixXd a = gram_;
    a.diagonal().array() += jitter;
    chol_.compute(a);
    if (chol_.info() != Eigen::Success) return false;
    const auto& L = chol_.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
      if (!(L(i, i) > 0.0) || !std::isfinite(L(i, i))) return false;
    weights_ = chol_.solve(targets_);
    if (!weights_.allFinite()) return false;
    jitter_ = jitter;
    return true;
  }

  Dataset data_;
  KernelParams params_;
  FeatureScaler scaler_;
  TargetScaler target_;
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> train_;
  Eigen::VectorXd targets_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd weights_;
  double jitter_ = 0.0;
};

/// Mean squared error of the (clamped) predictive mean against the
/// targets of `data`.
inline double mean_squared_error(const GpModel& model, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("mean_squared_error: empty dataset");
  double sum = 0.0;
  for (const auto& s : data.points()) {
    const double e = model.predict(s.feature).mean - s.next_level;
    sum += e * e;
  }
  return sum / static_cast<double>(data.size());
}

}  // namespace uamcts::gp
