#pragma once

#include "uamcts/gp/gp_model.hpp"
#include "uamcts/gp/mde.hpp"
#include "uamcts/pouring/dynamics.hpp"
#include "uamcts/pouring/types.hpp"

namespace uamcts::pouring {

struct ModelPrediction {
  double mean = 0.0;  // predicted next level, within [0, 100]
  double mde = 0.0;
};

/// The planner's model f-hat together with its deviation estimate.
class TransitionModel {
 public:
  virtual ~TransitionModel() = default;
  virtual ModelPrediction predict(const PourState& state, const PourAction& action) const = 0;
};

class GpTransitionModel final : public TransitionModel {
 public:
  GpTransitionModel(gp::GpModel model, gp::MdeKind kind = gp::MdeKind::kVariance)
      : model_(std::move(model)), kind_(kind) {}

  ModelPrediction predict(const PourState& state, const PourAction& action) const override {
    const auto p = model_.predict(gp::make_feature(state, action));
    return {p.mean, gp::mde_from_variance(p.variance, kind_)};
  }

  const gp::GpModel& gp() const { return model_; }
  gp::MdeKind mde_kind() const { return kind_; }

 private:
  gp::GpModel model_;
  gp::MdeKind kind_;
};

/// Exact dynamics with zero deviation estimate.
class GroundTruthModel final : public TransitionModel {
 public:
  explicit GroundTruthModel(GroundTruth gt) : gt_(gt) {}

  ModelPrediction predict(const PourState& state, const PourAction& action) const override {
    return {true_step(gt_, state, action).level, 0.0};
  }

 private:
  GroundTruth gt_;
};

}  // namespace uamcts::pouring
