#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ugae/schedule.hpp"

namespace ugae {

/// Rewards r_0..r_{T-1}, critic values V(s_0)..V(s_{T-1}) and the bootstrap V(s_T).
/// A bootstrap of 0 marks a true terminal state.
template <std::floating_point Real>
class BasicTrajectory {
 public:
  BasicTrajectory(std::vector<Real> rewards, std::vector<Real> values, Real bootstrap_value = 0)
      : rewards_(std::move(rewards)), values_(std::move(values)), bootstrap_(bootstrap_value) {
    if (rewards_.empty()) throw std::invalid_argument("trajectory must contain at least one step");
    if (rewards_.size() != values_.size())
      throw std::invalid_argument("rewards and values must have equal length");
    auto finite = [](Real x) { return std::isfinite(x); };
    if (!std::all_of(rewards_.begin(), rewards_.end(), finite) ||
        !std::all_of(values_.begin(), values_.end(), finite) || !std::isfinite(bootstrap_))
      throw std::invalid_argument("trajectory entries must be finite");
  }

  std::size_t size() const noexcept { return rewards_.size(); }
  std::span<const Real> rewards() const noexcept { return rewards_; }
  std::span<const Real> values() const noexcept { return values_; }
  Real bootstrap_value() const noexcept { return bootstrap_; }

  /// V(s_t) for t in [0, T], with V(s_T) the bootstrap value.
  Real value_at(std::size_t t) const { return t == values_.size() ? bootstrap_ : values_.at(t); }

 private:
  std::vector<Real> rewards_;
  std::vector<Real> values_;
  Real bootstrap_;
};

using Trajectory = BasicTrajectory<double>;

namespace estimator {
struct Ugae {
  double lambda;
  std::optional<std::size_t> trunc;
};
struct RecursiveGae {
  double gamma;
  double lambda;
};
struct MonteCarlo {};
}  // namespace estimator

using EstimatorTag = std::variant<estimator::Ugae, estimator::RecursiveGae, estimator::MonteCarlo>;

struct AdvantageVector {
  std::vector<double> advantages;
  EstimatorTag estimator;

  std::size_t size() const noexcept { return advantages.size(); }
  double operator[](std::size_t t) const { return advantages[t]; }
};

namespace detail {

inline void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0,1]");
}

}  // namespace detail

/// k-step advantage with arbitrary discounting:
/// -V(s_t) + sum_{l<k} Gamma(l) r_{t+l} + Gamma(k) V(s_{t+k}).
inline double k_step_advantage(const Trajectory& traj, const DiscountSchedule& s, std::size_t t,
                               std::size_t k) {
  if (k == 0) throw std::out_of_range("k must be >= 1");
  if (t + k > traj.size()) throw std::out_of_range("t + k exceeds trajectory length");
  if (k >= s.size()) throw std::out_of_range("schedule too short for k-step advantage");
  const auto r = traj.rewards();
  const auto w = s.weights();
  double acc = -traj.value_at(t);
  for (std::size_t l = 0; l < k; ++l) acc += w[l] * r[t + l];
  return acc + w[k] * traj.value_at(t + k);
}

/// Vectorized UGAE kernel over raw spans.
///
/// For each t, with n = min(T - t, trunc):
///   A_t = -V_t + sum_{l<n} lam^l G(l) r_{t+l}
///         + (1 - lam) sum_{l<n-1} lam^l G(l+1) V_{t+l+1}
///         + lam^(n-1) G(n) V_{t+n}
/// where V_T is the bootstrap value. The last term carries the residual
/// lambda mass of the finite episode, which makes the estimator agree with
/// recursive GAE for exponential weights and with the discounted Monte Carlo
/// return at lambda = 1. Each step is summed left to right, so results do not
/// depend on how steps are distributed over threads.
template <std::floating_point Real>
void ugae_kernel(std::span<const Real> rewards, std::span<const Real> values, Real bootstrap,
                 std::span<const double> weights, Real lambda, std::size_t trunc,
                 std::span<Real> out) {
  const std::size_t T = rewards.size();
  const std::size_t max_n = std::min(T, trunc);
  if (weights.size() < max_n + 1)
    throw std::invalid_argument("schedule too short: need " + std::to_string(max_n + 1) +
                                " weights, have " + std::to_string(weights.size()));
  // lam^l * G(l) and lam^l * G(l+1), shared by every step.
  std::vector<Real> lam_pow(max_n + 1);
  std::vector<Real> lg(max_n);
  std::vector<Real> lg_next(max_n);
  Real p = 1;
  for (std::size_t l = 0; l <= max_n; ++l) {
    lam_pow[l] = p;
    if (l < max_n) {
      lg[l] = p * static_cast<Real>(weights[l]);
      lg_next[l] = p * static_cast<Real>(weights[l + 1]);
    }
    p *= lambda;
  }
  const Real one_minus = Real(1) - lambda;
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t n = std::min(T - t, max_n);
    const Real* r = rewards.data() + t;
    const Real* v = values.data() + t + 1;
    Real reward_term = 0;
    Real value_term = 0;
    for (std::size_t l = 0; l + 1 < n; ++l) {
      reward_term += lg[l] * r[l];
      value_term += lg_next[l] * v[l];
    }
    reward_term += lg[n - 1] * r[n - 1];
    const Real tail_value = (t + n == T) ? bootstrap : values[t + n];
    out[t] = -values[t] + reward_term + one_minus * value_term +
             lam_pow[n - 1] * static_cast<Real>(weights[n]) * tail_value;
  }
}

/// UGAE advantages. `trunc` caps the lookahead at L steps (O(LT)); untruncated cost is O(T^2).
inline AdvantageVector ugae(const Trajectory& traj, const DiscountSchedule& s, double lambda,
                            std::optional<std::size_t> trunc = std::nullopt) {
  detail::require_lambda(lambda);
  if (trunc && *trunc == 0) throw std::invalid_argument("trunc must be >= 1");
  AdvantageVector out{std::vector<double>(traj.size()), estimator::Ugae{lambda, trunc}};
  ugae_kernel<double>(traj.rewards(), traj.values(), traj.bootstrap_value(), s.weights(), lambda,
                      trunc.value_or(traj.size()), out.advantages);
  return out;
}

/// Standard exponential GAE by the backward recursion A_t = delta_t + gamma lam A_{t+1}.
template <std::floating_point Real>
void gae_recursive_kernel(std::span<const Real> rewards, std::span<const Real> values,
                          Real bootstrap, Real gamma, Real lambda, std::span<Real> out) {
  const std::size_t T = rewards.size();
  const Real decay = gamma * lambda;
  Real next_value = bootstrap;
  Real running = 0;
  for (std::size_t t = T; t-- > 0;) {
    const Real delta = rewards[t] + gamma * next_value - values[t];
    running = delta + decay * running;
    out[t] = running;
    next_value = values[t];
  }
}

inline AdvantageVector gae_recursive(const Trajectory& traj, double gamma, double lambda) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
  detail::require_lambda(lambda);
  AdvantageVector out{std::vector<double>(traj.size()), estimator::RecursiveGae{gamma, lambda}};
  gae_recursive_kernel<double>(traj.rewards(), traj.values(), traj.bootstrap_value(), gamma, lambda,
                               out.advantages);
  return out;
}

/// Discounted return-to-go plus Gamma(T-t) V(s_T), minus the baseline V(s_t).
inline AdvantageVector monte_carlo_advantage(const Trajectory& traj, const DiscountSchedule& s) {
  const std::size_t T = traj.size();
  if (s.size() < T + 1) throw std::invalid_argument("schedule too short: need T + 1 weights");
  const auto r = traj.rewards();
  const auto w = s.weights();
  AdvantageVector out{std::vector<double>(T), estimator::MonteCarlo{}};
  for (std::size_t t = 0; t < T; ++t) {
    double ret = 0.0;
    for (std::size_t l = 0; t + l < T; ++l) ret += w[l] * r[t + l];
    out.advantages[t] = ret + w[T - t] * traj.bootstrap_value() - traj.values()[t];
  }
  return out;
}

/// delta_l = sum_{t' < horizon} [Gamma(l) Gamma(t') - Gamma(l + t')]. Zero for exponential weights.
inline double bias_coefficient(const DiscountSchedule& s, std::size_t l, std::size_t horizon) {
  if (l == 0) throw std::invalid_argument("lag l must be >= 1");
  if (l + horizon > s.size())
    throw std::invalid_argument("schedule too short: need l + horizon <= " +
                                std::to_string(s.size()));
  const auto w = s.weights();
  double acc = 0.0;
  for (std::size_t tp = 0; tp < horizon; ++tp) acc += w[l] * w[tp] - w[l + tp];
  return acc;
}

/// R * sum_{l>=1} lam^(l-1) |delta_l|, cut once the next term's bound
/// lam^(l-1) * max(Gamma) * sum(Gamma) drops below 1e-12 of the running total
/// (or of 1 while the total is still below 1).
inline double bias_bound(const DiscountSchedule& s, double lambda, double r_max,
                         std::size_t horizon) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0,1)");
  if (!(r_max >= 0.0)) throw std::invalid_argument("reward bound R must be >= 0");
  if (horizon == 0 || horizon >= s.size())
    throw std::invalid_argument("horizon must lie in [1, schedule length)");
  const auto w = s.weights();
  const double max_w = *std::max_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(horizon));
  double sum_w = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) sum_w += w[t];
  const double term_bound = max_w * sum_w;

  double total = 0.0;
  double lam_pow = 1.0;
  for (std::size_t l = 1;; ++l) {
    if (lam_pow * term_bound < 1e-12 * std::max(total, 1.0)) break;
    if (l + horizon > s.size())
      throw std::invalid_argument("schedule too short for the geometric tail cut; extend it beyond " +
                                  std::to_string(s.size()));
    total += lam_pow * std::abs(bias_coefficient(s, l, horizon));
    lam_pow *= lambda;
  }
  return r_max * total;
}

}  // namespace ugae
