#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugae/schedule.hpp"

namespace ugae {

inline constexpr std::size_t kAnalysisHorizon = 10000;

namespace detail {

inline double checked_total(const DiscountSchedule& s) {
  const auto w = s.weights();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("schedule has zero total weight");
  return total;
}

}  // namespace detail

/// Share of the total weight falling in the half-open band [t1, t2).
inline double partial_weight(const DiscountSchedule& s, std::size_t t1, std::size_t t2) {
  if (t1 >= t2) throw std::invalid_argument("band [t1, t2) is empty or reversed");
  if (t2 > s.size()) throw std::out_of_range("band end exceeds schedule horizon");
  const auto w = s.weights();
  const double band = std::accumulate(w.begin() + static_cast<std::ptrdiff_t>(t1),
                                      w.begin() + static_cast<std::ptrdiff_t>(t2), 0.0);
  return band / detail::checked_total(s);
}

/// sigma^2 * sum of squared weights: the variance of the discounted return
/// for uncorrelated rewards of per-step variance sigma^2.
inline double variance_measure(const DiscountSchedule& s, double sigma = 1.0) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  const auto w = s.weights();
  double sq = 0.0;
  for (double x : w) sq += x * x;
  return sigma * sigma * sq;
}

/// Smallest T whose tail share sum_{t>=T} w / sum w is at most 1/e.
inline std::size_t effective_horizon(const DiscountSchedule& s) {
  const double total = detail::checked_total(s);
  const double threshold = total / std::numbers::e;
  const auto w = s.weights();
  // Accumulate the tail from the back so small trailing weights are not lost.
  std::vector<double> tail(w.size() + 1, 0.0);
  for (std::size_t t = w.size(); t-- > 0;) tail[t] = tail[t + 1] + w[t];
  for (std::size_t t = 0; t <= w.size(); ++t)
    if (tail[t] <= threshold) return t;
  return w.size();
}

/// Sum of the first n weights.
inline double total_sum(const DiscountSchedule& s, std::size_t n) {
  if (n > s.size()) throw std::out_of_range("n exceeds schedule horizon");
  const auto w = s.weights();
  return std::accumulate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
}

struct PropertyRow {
  std::string label;
  double g_0_10 = 0.0;
  double g_10_100 = 0.0;
  double g_100_1000 = 0.0;
  double g_1000_10000 = 0.0;
  double variance_measure = 0.0;
  std::size_t t_eff = 0;
  double total_1000 = 0.0;
};

/// Builds the schedule for a given analysis horizon.
struct TableEntry {
  std::string label;
  std::function<DiscountSchedule(std::size_t)> build;
};

inline PropertyRow analyze_schedule(const std::string& label, const DiscountSchedule& s) {
  const std::size_t h = s.size();
  auto band = [&](std::size_t a, std::size_t b) {
    a = std::min(a, h);
    b = std::min(b, h);
    return a < b ? partial_weight(s, a, b) : 0.0;
  };
  PropertyRow row;
  row.label = label;
  row.g_0_10 = band(0, 10);
  row.g_10_100 = band(10, 100);
  row.g_100_1000 = band(100, 1000);
  row.g_1000_10000 = band(1000, 10000);
  row.variance_measure = variance_measure(s);
  row.t_eff = effective_horizon(s);
  row.total_1000 = total_sum(s, std::min<std::size_t>(1000, h));
  return row;
}

/// One row per entry; constructor errors are rethrown prefixed with the row label.
inline std::vector<PropertyRow> property_table(const std::vector<TableEntry>& entries,
                                               std::size_t horizon = kAnalysisHorizon) {
  std::vector<PropertyRow> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) {
    try {
      rows.push_back(analyze_schedule(e.label, e.build(horizon)));
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument(e.label + ": " + ex.what());
    } catch (const std::out_of_range& ex) {
      throw std::out_of_range(e.label + ": " + ex.what());
    }
  }
  return rows;
}

/// The fifteen discountings compared in the reference property table.
inline std::vector<TableEntry> default_table_entries() {
  using H = std::size_t;
  return {
      {"No discounting", [](H h) { return no_discount_schedule(h); }},
      {"Exponential gamma=0.99", [](H h) { return exponential_schedule(0.99, h); }},
      {"Exponential gamma=0.999", [](H h) { return exponential_schedule(0.999, h); }},
      {"Exponential gamma=0.97", [](H h) { return exponential_schedule(0.97, h); }},
      {"Beta-weighted mu=0.99 eta=0.5", [](H h) { return beta_schedule(MuEta(0.99, 0.5), h); }},
      {"Beta-weighted mu=0.97 eta=0.5", [](H h) { return beta_schedule(MuEta(0.97, 0.5), h); }},
      {"Hyperbolic mu=0.99", [](H h) { return hyperbolic_schedule(0.99, h); }},
      {"Hyperbolic mu=0.25", [](H h) { return hyperbolic_schedule(0.25, h); }},
      {"Fixed-horizon T_max=100", [](H h) { return fixed_horizon_schedule(100, h); }},
      {"Fixed-horizon T_max=160", [](H h) { return fixed_horizon_schedule(160, h); }},
      {"Truncated Exponential gamma=0.99 T_max=100",
       [](H h) { return truncate(exponential_schedule(0.99, h), 100); }},
      {"Truncated Exponential gamma=0.99 T_max=500",
       [](H h) { return truncate(exponential_schedule(0.99, h), 500); }},
      {"Truncated Beta-weighted mu=0.99 eta=0.5 T_max=100",
       [](H h) { return truncate(beta_schedule(MuEta(0.99, 0.5), h), 100); }},
      {"Truncated Hyperbolic mu=0.99 T_max=100",
       [](H h) { return truncate(hyperbolic_schedule(0.99, h), 100); }},
      {"Truncated Hyperbolic mu=0.99 T_max=500",
       [](H h) { return truncate(hyperbolic_schedule(0.99, h), 500); }},
  };
}

}  // namespace ugae
