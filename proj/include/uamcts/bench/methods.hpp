#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uamcts/mcts/config.hpp"

namespace uamcts::bench {

struct MethodSpec {
  std::string_view name;
  mcts::Variant variant;

  mcts::SearchConfig apply(mcts::SearchConfig base) const {
    base.variant = variant;
    return base;
  }
};

inline constexpr std::array<MethodSpec, 3> kMethods{{
    {"MCTS", mcts::Variant::kStandard},
    {"MCTS-inflated", mcts::Variant::kInflated},
    {"UA-MCTS-1", mcts::Variant::kUncertaintyAware},
}};

inline std::string method_names() {
  std::string out;
  for (const auto& m : kMethods) {
    if (!out.empty()) out += ", ";
    out += m.name;
  }
  return out;
}

/// UA-MCTS-0 is the earlier uncertainty-aware variant; it has a name here
/// so that asking for it fails loudly instead of looking like a typo.
inline const MethodSpec& find_method(std::string_view name) {
  for (const auto& m : kMethods)
    if (m.name == name) return m;
  if (name == "UA-MCTS-0") throw std::invalid_argument("UA-MCTS-0: not implemented - external reference method");
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (available: " + method_names() + ")");
}

}  // namespace uamcts::bench
