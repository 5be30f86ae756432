#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "ugae/schedule.hpp"

namespace ugae::pathworld {

// Path i pays reward i after d = i^2 steps; every step survives with
// probability exp(-lambda) where the hazard lambda is drawn once per episode.

namespace hazard {
struct Dirac {
  double lambda0;
};
/// Exponential prior on lambda with mean k.
struct Exponential {
  double mean;
};
/// Uniform prior on [0, 2 * mean].
struct Uniform {
  double mean;
};
}  // namespace hazard

using Hazard = std::variant<hazard::Dirac, hazard::Exponential, hazard::Uniform>;

inline double hazard_parameter(const Hazard& h) {
  return std::visit([](const auto& v) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, hazard::Dirac>)
      return v.lambda0;
    else
      return v.mean;
  }, h);
}

inline void validate(const Hazard& h) {
  const double p = hazard_parameter(h);
  if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("hazard parameter must be >= 0");
}

struct PathworldSpec {
  std::size_t num_paths = 14;
  Hazard hazard = hazard::Uniform{0.05};
};

constexpr std::size_t delay(std::size_t i) noexcept { return i * i; }

/// Expected collected reward r * E[exp(-lambda d)] in closed form.
inline double empirical_value(std::size_t i, const Hazard& h) {
  validate(h);
  const double r = static_cast<double>(i);
  const double d = static_cast<double>(delay(i));
  return std::visit([&](const auto& v) -> double {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, hazard::Dirac>) {
      return r * std::exp(-v.lambda0 * d);
    } else if constexpr (std::is_same_v<T, hazard::Exponential>) {
      return r / (1.0 + v.mean * d);
    } else {
      const double x = 2.0 * v.mean * d;
      if (x == 0.0) return r;
      return r * -std::expm1(-x) / x;
    }
  }, h);
}

struct McEstimate {
  double mean;
  double std_error;
};

namespace detail {

struct McAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
};

inline McAccumulator simulate_shard(std::size_t i, const Hazard& h, std::uint64_t episodes,
                                    std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = static_cast<double>(i);
  const double d = static_cast<double>(delay(i));
  McAccumulator acc;
  for (std::uint64_t e = 0; e < episodes; ++e) {
    const double lambda = std::visit([&](const auto& v) -> double {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, hazard::Dirac>) {
        return v.lambda0;
      } else if constexpr (std::is_same_v<T, hazard::Exponential>) {
        return v.mean == 0.0 ? 0.0 : -v.mean * std::log1p(-unit(rng));
      } else {
        return 2.0 * v.mean * unit(rng);
      }
    }, h);
    // Surviving d independent steps is a single Bernoulli(exp(-lambda d)).
    const double reward = unit(rng) < std::exp(-lambda * d) ? r : 0.0;
    acc.sum += reward;
    acc.sum_sq += reward * reward;
    ++acc.n;
  }
  return acc;
}

}  // namespace detail

/// Monte Carlo estimate of the collected reward on path i. Shard s draws from
/// its own stream seeded by (seed, s), so results depend only on the shard count.
inline McEstimate empirical_value_mc(std::size_t i, const Hazard& h, std::uint64_t episodes,
                                     std::uint64_t seed, std::size_t shards = 1) {
  validate(h);
  if (episodes == 0) throw std::invalid_argument("episodes must be >= 1");
  if (shards == 0) throw std::invalid_argument("shards must be >= 1");
  shards = std::min<std::size_t>(shards, episodes);
  std::vector<detail::McAccumulator> parts(shards);
  const std::uint64_t base = episodes / shards;
  const std::uint64_t extra = episodes % shards;
  auto count = [&](std::size_t s) { return base + (s < extra ? 1 : 0); };
  if (shards == 1) {
    parts[0] = detail::simulate_shard(i, h, episodes, seed, 0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s)
      workers.emplace_back([&, s] { parts[s] = detail::simulate_shard(i, h, count(s), seed, s); });
  }
  detail::McAccumulator total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.n += p.n;
  }
  const double n = static_cast<double>(total.n);
  const double mean = total.sum / n;
  if (total.n < 2) return {mean, 0.0};
  const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

/// Value predicted by a risk-free agent that discounts with s: i * Gamma(i^2).
inline double predicted_value(std::size_t i, const DiscountSchedule& s) {
  if (delay(i) >= s.size())
    throw std::out_of_range("schedule horizon must exceed i^2 = " + std::to_string(delay(i)));
  return static_cast<double>(i) * s[delay(i)];
}

struct PathValueRow {
  std::size_t path_index;
  std::size_t delay;
  double reward;
  double predicted;
  double empirical;
  double squared_error;
};

inline std::vector<PathValueRow> path_curve(const DiscountSchedule& s, const PathworldSpec& spec) {
  std::vector<PathValueRow> rows;
  rows.reserve(spec.num_paths + 1);
  for (std::size_t i = 0; i <= spec.num_paths; ++i) {
    const double pred = predicted_value(i, s);
    const double emp = empirical_value(i, spec.hazard);
    rows.push_back({i, delay(i), static_cast<double>(i), pred, emp, (pred - emp) * (pred - emp)});
  }
  return rows;
}

struct MseRow {
  std::string label;
  double mse;
  double sum_sq_err;
};

/// Squared errors over paths 0..num_paths, averaged over num_paths + 1 entries.
inline MseRow mse_row(const std::string& label, const DiscountSchedule& s,
                      const PathworldSpec& spec) {
  double sum = 0.0;
  for (const auto& row : path_curve(s, spec)) sum += row.squared_error;
  return {label, sum / static_cast<double>(spec.num_paths + 1), sum};
}

/// Schedule horizon that covers every path delay.
inline std::size_t required_horizon(const PathworldSpec& spec) {
  return delay(spec.num_paths) + 1;
}

struct LabeledSchedule {
  std::string label;
  DiscountSchedule schedule;
};

inline std::vector<MseRow> mse_table(const std::vector<LabeledSchedule>& schedules,
                                     const PathworldSpec& spec) {
  std::vector<MseRow> rows;
  rows.reserve(schedules.size());
  for (const auto& s : schedules) rows.push_back(mse_row(s.label, s.schedule, spec));
  return rows;
}

/// The five discountings of the reference MSE comparison.
inline std::vector<LabeledSchedule> default_mse_schedules(const PathworldSpec& spec) {
  const std::size_t h = required_horizon(spec);
  return {
      {"Exponential gamma=0.99", exponential_schedule(0.99, h)},
      {"Exponential gamma=0.95", exponential_schedule(0.95, h)},
      {"Exponential gamma=0.975", exponential_schedule(0.975, h)},
      {"Hyperbolic k=0.05", hyperbolic_schedule_k(0.05, h)},
      {"Beta-weighted mu=0.95 eta=0.5", beta_schedule(MuEta(0.95, 0.5), h)},
  };
}

}  // namespace ugae::pathworld
