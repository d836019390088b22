#pragma once

#include <concepts>
#include <vector>

namespace uamcts::mcts {

/// Result of propagating the model one step.
template <class State>
struct Transition {
  State next;
  double mde = 0.0;
};

/// What the search needs from a planning problem. `model_step` must be
/// deterministic. `reward` and `is_terminal` receive the predicted next
/// state so that variants which alter propagation (inflation) are judged
/// on the state they actually propagated to.
template <class D>
concept PlanningDomain = requires(const D& d, const typename D::State& s, const typename D::Action& a, int k) {
  typename D::State;
  typename D::Action;
  { d.legal_actions(s, k) } -> std::convertible_to<std::vector<typename D::Action>>;
  { d.model_step(s, a) } -> std::convertible_to<Transition<typename D::State>>;
  { d.reward(s, a, s, k) } -> std::convertible_to<double>;
  { d.is_terminal(s, a, s, k) } -> std::convertible_to<bool>;
};

/// Domains usable with the inflated variant: shift a state by `amount`
/// and clamp to the state bounds.
template <class D>
concept InflatableDomain = PlanningDomain<D> && requires(const D& d, const typename D::State& s, double amount) {
  { d.inflate(s, amount) } -> std::convertible_to<typename D::State>;
};

}  // namespace uamcts::mcts
