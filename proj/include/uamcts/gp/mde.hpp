#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uamcts/gp/gp_model.hpp"
#include "uamcts/pouring/types.hpp"

namespace uamcts::gp {

/// Units of the model deviation estimate: predictive variance (%^2) or
/// its square root (%).
enum class MdeKind { kVariance, kStd };

inline std::string_view to_string(MdeKind k) { return k == MdeKind::kVariance ? "variance" : "std"; }

inline MdeKind parse_mde_kind(std::string_view s) {
  if (s == "variance") return MdeKind::kVariance;
  if (s == "std") return MdeKind::kStd;
  throw std::invalid_argument("unknown mde kind '" + std::string(s) + "' (expected variance|std)");
}

inline Feature make_feature(const pouring::PourState& s, const pouring::PourAction& a) {
  return {s.level, a.alpha, a.duration};
}

inline double mde_from_variance(double variance, MdeKind kind) {
  return kind == MdeKind::kVariance ? variance : std::sqrt(variance);
}

inline double mde(const GpModel& model, const pouring::PourState& state, const pouring::PourAction& action,
                  MdeKind kind = MdeKind::kVariance) {
  return mde_from_variance(model.predict(make_feature(state, action)).variance, kind);
}

}  // namespace uamcts::gp
