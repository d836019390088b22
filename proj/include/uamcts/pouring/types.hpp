#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace uamcts::pouring {

inline constexpr double kMinLevel = 0.0;
inline constexpr double kMaxLevel = 100.0;

inline double clamp_level(double level) {
  return level < kMinLevel ? kMinLevel : (level > kMaxLevel ? kMaxLevel : level);
}

/// Liquid level in the output container, percent of capacity.
struct PourState {
  double level = 0.0;

  friend bool operator==(const PourState&, const PourState&) = default;
};

/// Tilt angle (rad) held for a duration (s).
struct PourAction {
  double alpha = 0.0;
  double duration = 0.0;

  friend bool operator==(const PourAction&, const PourAction&) = default;
};

/// Discrete action grid. Values are computed as `min + i * step` so that
/// adjacent points differ by exactly one step up to a single rounding.
struct ActionGrid {
  double alpha_min = 0.25;
  double alpha_max = 2.0;
  double alpha_step = 0.25;
  double duration_min = 0.1;
  double duration_max = 1.0;
  double duration_step = 0.1;

  int alpha_count() const { return count(alpha_min, alpha_max, alpha_step); }
  int duration_count() const { return count(duration_min, duration_max, duration_step); }

  double alpha_at(int i) const { return alpha_min + i * alpha_step; }
  double duration_at(int j) const { return duration_min + j * duration_step; }

  /// Alpha-major enumeration; this order is the action ordering used for
  /// tie-breaking in search.
  std::vector<PourAction> actions() const {
    validate();
    std::vector<PourAction> out;
    const int na = alpha_count();
    const int nd = duration_count();
    out.reserve(static_cast<std::size_t>(na * nd));
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nd; ++j) out.push_back({alpha_at(i), duration_at(j)});
    return out;
  }

  void validate() const {
    if (!(alpha_step > 0) || !(duration_step > 0))
      throw std::invalid_argument("action grid steps must be positive");
    if (!(alpha_min >= 0) || !(alpha_max >= alpha_min))
      throw std::invalid_argument("action grid alpha bounds invalid");
    if (!(duration_min >= 0) || !(duration_max >= duration_min))
      throw std::invalid_argument("action grid duration bounds invalid");
  }

 private:
  static int count(double lo, double hi, double step) {
    return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  }
};

}  // namespace uamcts::pouring
