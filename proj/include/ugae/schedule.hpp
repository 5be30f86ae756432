#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ugae {

/// Canonical (alpha, beta) parameters of the Beta weighing distribution.
class BetaParams {
 public:
  BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::invalid_argument("alpha must be a finite value > 0");
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("beta must be a finite value > 0");
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

 private:
  double alpha_;
  double beta_;
};

/// Mean / dispersion parametrization: mu = alpha / (alpha + beta), eta = 1 / beta.
/// eta == 0 denotes the exponential limit and has no finite (alpha, beta).
class MuEta {
 public:
  MuEta(double mu, double eta) : mu_(mu), eta_(eta) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0,1)");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0,1]");
  }

  double mu() const noexcept { return mu_; }
  double eta() const noexcept { return eta_; }

 private:
  double mu_;
  double eta_;
};

inline BetaParams to_alpha_beta(const MuEta& p) {
  if (p.eta() == 0.0)
    throw std::invalid_argument("eta = 0 has no finite (alpha, beta); use the exponential form");
  return BetaParams(p.mu() / (p.eta() * (1.0 - p.mu())), 1.0 / p.eta());
}

inline MuEta to_mu_eta(const BetaParams& p) {
  return MuEta(p.alpha() / (p.alpha() + p.beta()), 1.0 / p.beta());
}

/// Closed-form infinite sum of the Beta-weighted schedule; empty when divergent (beta <= 1).
inline std::optional<double> analytic_sum(const BetaParams& p) {
  if (p.beta() > 1.0) return (p.alpha() + p.beta() - 1.0) / (p.beta() - 1.0);
  return std::nullopt;
}

namespace kind {

struct Exponential {
  double gamma;
};
struct Hyperbolic {
  double k;
};
struct BetaWeighted {
  double mu;
  double eta;
};
struct NoDiscount {};
struct FixedHorizon {
  std::size_t t_max;
};
struct Truncated;

}  // namespace kind

using ScheduleKind = std::variant<kind::Exponential, kind::Hyperbolic, kind::BetaWeighted,
                                  kind::NoDiscount, kind::FixedHorizon, kind::Truncated>;

namespace kind {
struct Truncated {
  std::shared_ptr<const ScheduleKind> inner;
  std::size_t t_max;
};
}  // namespace kind

/// Human-readable name of a schedule kind with its parameters, e.g. "Exponential gamma=0.99".
inline std::string describe(const ScheduleKind& k) {
  std::ostringstream os;
  os.precision(10);
  std::visit(
      [&os](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, kind::Exponential>) {
          os << "Exponential gamma=" << v.gamma;
        } else if constexpr (std::is_same_v<T, kind::Hyperbolic>) {
          os << "Hyperbolic k=" << v.k;
        } else if constexpr (std::is_same_v<T, kind::BetaWeighted>) {
          os << "Beta-weighted mu=" << v.mu << " eta=" << v.eta;
        } else if constexpr (std::is_same_v<T, kind::NoDiscount>) {
          os << "No discounting";
        } else if constexpr (std::is_same_v<T, kind::FixedHorizon>) {
          os << "Fixed-horizon T_max=" << v.t_max;
        } else {
          os << "Truncated " << describe(*v.inner) << " T_max=" << v.t_max;
        }
      },
      k);
  return os.str();
}

/// A finite discount vector Gamma(0..H-1) plus the kind that produced it.
/// Immutable after construction.
class DiscountSchedule {
 public:
  DiscountSchedule(std::vector<double> weights, ScheduleKind kind,
                   std::optional<double> analytic_total = std::nullopt)
      : weights_(std::move(weights)), kind_(std::move(kind)), analytic_total_(analytic_total) {
    if (weights_.empty()) throw std::invalid_argument("schedule horizon must be >= 1");
  }

  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t t) const { return weights_.at(t); }
  std::size_t size() const noexcept { return weights_.size(); }
  const ScheduleKind& kind() const noexcept { return kind_; }
  std::optional<double> analytic_total() const noexcept { return analytic_total_; }
  std::string label() const { return describe(kind_); }

 private:
  std::vector<double> weights_;
  ScheduleKind kind_;
  std::optional<double> analytic_total_;
};

namespace detail {

inline void require_horizon(std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
}

inline void require_open_unit(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0,1)");
}

}  // namespace detail

inline DiscountSchedule exponential_schedule(double gamma, std::size_t horizon) {
  detail::require_horizon(horizon);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
  std::vector<double> w(horizon);
  for (std::size_t t = 0; t < horizon; ++t) w[t] = std::pow(gamma, static_cast<double>(t));
  std::optional<double> total;
  if (gamma < 1.0) total = 1.0 / (1.0 - gamma);
  return {std::move(w), kind::Exponential{gamma}, total};
}

/// Gamma(t) = 1 / (1 + k t), k >= 0.
inline DiscountSchedule hyperbolic_schedule_k(double k, std::size_t horizon) {
  detail::require_horizon(horizon);
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("k must be a finite value >= 0");
  std::vector<double> w(horizon);
  for (std::size_t t = 0; t < horizon; ++t) w[t] = 1.0 / (1.0 + k * static_cast<double>(t));
  return {std::move(w), kind::Hyperbolic{k}, std::nullopt};
}

/// Hyperbolic schedule with k = (1 - mu) / mu.
inline DiscountSchedule hyperbolic_schedule(double mu, std::size_t horizon) {
  detail::require_open_unit(mu);
  return hyperbolic_schedule_k((1.0 - mu) / mu, horizon);
}

/// Beta-weighted discounting. Gamma(t) is the t-th raw moment of Beta(alpha, beta),
/// built with Gamma(t+1) = (alpha + t) / (alpha + beta + t) * Gamma(t).
inline DiscountSchedule beta_schedule(const BetaParams& p, std::size_t horizon) {
  detail::require_horizon(horizon);
  const double a = p.alpha();
  const double b = p.beta();
  std::vector<double> w(horizon);
  w[0] = 1.0;
  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    const double td = static_cast<double>(t);
    w[t + 1] = w[t] * (a + td) / (a + b + td);
  }
  return {std::move(w), kind::BetaWeighted{a / (a + b), 1.0 / b}, analytic_sum(p)};
}

/// eta == 0 takes the exponential closed form mu^t.
inline DiscountSchedule beta_schedule(const MuEta& p, std::size_t horizon) {
  detail::require_horizon(horizon);
  if (p.eta() == 0.0) {
    std::vector<double> w(horizon);
    for (std::size_t t = 0; t < horizon; ++t) w[t] = std::pow(p.mu(), static_cast<double>(t));
    return {std::move(w), kind::BetaWeighted{p.mu(), 0.0}, 1.0 / (1.0 - p.mu())};
  }
  DiscountSchedule s = beta_schedule(to_alpha_beta(p), horizon);
  return {std::vector<double>(s.weights().begin(), s.weights().end()),
          kind::BetaWeighted{p.mu(), p.eta()}, s.analytic_total()};
}

inline DiscountSchedule no_discount_schedule(std::size_t horizon) {
  detail::require_horizon(horizon);
  return {std::vector<double>(horizon, 1.0), kind::NoDiscount{}, std::nullopt};
}

/// Gamma(t) = 1 for t < t_max, 0 otherwise.
inline DiscountSchedule fixed_horizon_schedule(std::size_t t_max, std::size_t horizon) {
  detail::require_horizon(horizon);
  if (t_max == 0) throw std::invalid_argument("T_max must be >= 1");
  std::vector<double> w(horizon, 0.0);
  for (std::size_t t = 0; t < std::min(t_max, horizon); ++t) w[t] = 1.0;
  return {std::move(w), kind::FixedHorizon{t_max}, static_cast<double>(t_max)};
}

/// Zeroes every weight at index >= t_max. Truncating at or beyond the horizon
/// leaves the weights unchanged.
inline DiscountSchedule truncate(const DiscountSchedule& s, std::size_t t_max) {
  if (t_max == 0) throw std::invalid_argument("T_max must be >= 1");
  std::vector<double> w(s.weights().begin(), s.weights().end());
  for (std::size_t t = t_max; t < w.size(); ++t) w[t] = 0.0;
  return {std::move(w),
          kind::Truncated{std::make_shared<const ScheduleKind>(s.kind()), t_max},
          std::nullopt};
}

}  // namespace ugae
