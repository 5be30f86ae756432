#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "ugae/advantage.hpp"
#include "ugae/schedule.hpp"

namespace ugae::bench {

inline constexpr double kGamma = 0.99;
inline constexpr double kLambda = 0.95;

struct BenchRow {
  std::size_t episode_length;
  double gae_seconds;
  double ugae_seconds;
  std::optional<std::size_t> trunc;
};

/// Advantages produced inside the timed loops, kept for verification.
struct BenchCapture {
  std::vector<std::vector<double>> gae;
  std::vector<std::vector<double>> ugae;
};

/// Standard-normal rewards, values and bootstrap, seeded by (seed, length).
inline Trajectory random_trajectory(std::size_t length, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(length), static_cast<std::uint32_t>(length >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  std::vector<double> r(length), v(length);
  for (std::size_t t = 0; t < length; ++t) {
    r[t] = normal(rng);
    v[t] = normal(rng);
  }
  return Trajectory(std::move(r), std::move(v), normal(rng));
}

/// `count` log-spaced integer lengths in [lo, hi], duplicates removed.
inline std::vector<std::size_t> log_spaced(std::size_t lo, std::size_t hi, std::size_t count) {
  if (lo == 0 || hi < lo || count == 0) throw std::invalid_argument("invalid log-spaced range");
  std::vector<std::size_t> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(static_cast<std::size_t>(std::llround(std::exp(a + f * (b - a)))));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("x values must not all be equal");
  return sxy / sxx;
}

namespace detail {

using Clock = std::chrono::steady_clock;

// Median seconds per call. Each sample batches enough calls to last at least
// `min_sample`, calibrated on the warm-up call.
template <typename F>
double median_seconds(F&& fn, std::size_t reps, std::chrono::nanoseconds min_sample) {
  const auto w0 = Clock::now();
  fn();
  const auto warm = std::max<std::chrono::nanoseconds>(Clock::now() - w0, std::chrono::nanoseconds(1));
  const std::size_t batch =
      std::max<std::size_t>(1, static_cast<std::size_t>(min_sample.count() / warm.count()));
  std::vector<double> samples;
  samples.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    for (std::size_t b = 0; b < batch; ++b) fn();
    const std::chrono::duration<double> dt = Clock::now() - t0;
    samples.push_back(dt.count() / static_cast<double>(batch));
  }
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(reps / 2),
                   samples.end());
  return samples[reps / 2];
}

}  // namespace detail

/// Times recursive GAE and UGAE (exponential gamma = 0.99, lambda = 0.95) on one
/// seeded random trajectory per length. Single-threaded.
inline std::vector<BenchRow> run_bench(std::span<const std::size_t> lengths, std::size_t repetitions,
                                       std::optional<std::size_t> trunc, std::uint64_t seed,
                                       BenchCapture* capture = nullptr,
                                       std::chrono::nanoseconds min_sample = std::chrono::milliseconds(2)) {
  if (lengths.empty()) throw std::invalid_argument("length list must not be empty");
  if (repetitions == 0) throw std::invalid_argument("repetitions must be >= 1");
  if (trunc && *trunc == 0) throw std::invalid_argument("trunc must be >= 1");
  std::vector<BenchRow> rows;
  rows.reserve(lengths.size());
  for (std::size_t len : lengths) {
    if (len == 0) throw std::invalid_argument("episode lengths must be >= 1");
    const Trajectory traj = random_trajectory(len, seed);
    const DiscountSchedule sched = exponential_schedule(kGamma, len + 1);
    std::vector<double> gae_out(len), ugae_out(len);
    const std::size_t cap = trunc.value_or(len);

    const double gae_s = detail::median_seconds(
        [&] {
          gae_recursive_kernel<double>(traj.rewards(), traj.values(), traj.bootstrap_value(), kGamma,
                                       kLambda, gae_out);
        },
        repetitions, min_sample);
    const double ugae_s = detail::median_seconds(
        [&] {
          ugae_kernel<double>(traj.rewards(), traj.values(), traj.bootstrap_value(), sched.weights(),
                              kLambda, cap, ugae_out);
        },
        repetitions, min_sample);

    rows.push_back({len, gae_s, ugae_s, trunc});
    if (capture) {
      capture->gae.push_back(std::move(gae_out));
      capture->ugae.push_back(std::move(ugae_out));
    }
  }
  return rows;
}

}  // namespace ugae::bench
