// Acceptance suite: one PASS/FAIL line per criterion, details for every failing check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ugae/cli.hpp"
#include "ugae/ugae.hpp"

namespace {

using Clock = std::chrono::steady_clock;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)), start_(Clock::now()) {}

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }

  void within(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(10);
    os << what << ": got " << got << ", want " << want << " +/- " << tol;
    check(std::abs(got - want) <= tol, os.str());
  }

  void relative(double got, double want, double rel, const std::string& what) {
    std::ostringstream os;
    os.precision(10);
    os << what << ": got " << got << ", want " << want << " (rel err " << std::abs(got - want) / std::abs(want)
       << " > " << rel << ")";
    check(std::abs(got - want) <= rel * std::abs(want), os.str());
  }

  void at_most(double got, double limit, const std::string& what) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": " << got << " > " << limit;
    check(got <= limit, os.str());
  }

  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  void runtime_under(double limit) { at_most(seconds(), limit, "runtime (s)"); }

  bool report() const {
    const bool ok = failures_.empty();
    std::printf("[%s] %s (%zu checks, %.2f s)\n", ok ? "PASS" : "FAIL", name_.c_str(), checks_, seconds());
    for (const auto& f : failures_) std::printf("       - %s\n", f.c_str());
    std::fflush(stdout);
    return ok;
  }

 private:
  std::string name_;
  Clock::time_point start_;
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
};

std::vector<std::vector<std::string>> run_csv(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  if (ugae::cli::run(args, out, err) != 0) throw std::runtime_error("cli failed: " + err.str());
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) rows.push_back(ugae::csv::split(line));
  return rows;
}

struct S1Row {
  const char* label;
  double bands[4];
  double variance;
  std::size_t t_eff;
  double total;
};

// Printed reference table of discounting properties at H = 10000.
const S1Row kS1[] = {
    {"No discounting", {0.001, 0.009, 0.090, 0.900}, 10000, 6322, 1000},
    {"Exponential gamma=0.99", {0.096, 0.538, 0.366, 0.000}, 50.25, 100, 100},
    {"Exponential gamma=0.999", {0.010, 0.085, 0.537, 0.368}, 500.25, 1000, 632.3},
    {"Exponential gamma=0.97", {0.263, 0.690, 0.0480, 0.000}, 16.92, 33, 33.3},
    {"Beta-weighted mu=0.99 eta=0.5", {0.049, 0.293, 0.509, 0.149}, 66.67, 323, 166.1},
    {"Beta-weighted mu=0.97 eta=0.5", {0.135, 0.476, 0.334, 0.055}, 22.23, 110, 61.7},
    {"Hyperbolic mu=0.99", {0.021, 0.130, 0.370, 0.479}, 98.53, 1741, 238.8},
    {"Hyperbolic mu=0.25", {0.439, 0.188, 0.187, 0.187}, 1.12, 107, 3.3},
    {"Fixed-horizon T_max=100", {0.100, 0.900, 0.000, 0.000}, 100, 64, 100},
    {"Fixed-horizon T_max=160", {0.062, 0.562, 0.375, 0.000}, 160, 102, 160},
    {"Truncated Exponential gamma=0.99 T_max=100", {0.151, 0.849, 0.000, 0.000}, 43.52, 51, 63.4},
    {"Truncated Exponential gamma=0.99 T_max=500", {0.096, 0.542, 0.362, 0.000}, 50.25, 99, 99.3},
    {"Truncated Beta-weighted mu=0.99 eta=0.5 T_max=100", {0.143, 0.857, 0.000, 0.000}, 47.11, 54, 69.4},
    {"Truncated Hyperbolic mu=0.99 T_max=100", {0.138, 0.862, 0.000, 0.000}, 50.13, 55, 69.4},
    {"Truncated Hyperbolic mu=0.99 T_max=500", {0.054, 0.335, 0.612, 0.000}, 83.13, 210, 178.6},
};

bool criterion_1() {
  Criterion c("1 property table reproduction");
  const auto rows = run_csv({"analyze", "--full-precision"});
  c.check(rows.size() == std::size(kS1), "row count " + std::to_string(rows.size()));
  const char* band_names[] = {"g0_10", "g10_100", "g100_1000", "g1000_10000"};
  for (std::size_t k = 0; k < std::min(rows.size(), std::size(kS1)); ++k) {
    const auto& r = rows[k];
    const auto& want = kS1[k];
    c.check(r[0] == want.label, "row " + std::to_string(k) + " label '" + r[0] + "'");
    for (std::size_t b = 0; b < 4; ++b)
      c.within(ugae::csv::parse_double(r[1 + b]), want.bands[b], 0.002, std::string(want.label) + " " + band_names[b]);
    c.relative(ugae::csv::parse_double(r[5]), want.variance, 0.005, std::string(want.label) + " variance");
    c.check(r[6] == std::to_string(want.t_eff),
            std::string(want.label) + " t_eff: got " + r[6] + ", want " + std::to_string(want.t_eff));
    c.relative(ugae::csv::parse_double(r[7]), want.total, 0.005, std::string(want.label) + " total_1000");
  }
  c.runtime_under(5.0);
  return c.report();
}

bool criterion_2() {
  Criterion c("2 pathworld MSE table reproduction");
  const auto rows = run_csv({"pathworld", "--hazard", "uniform:0.05"});
  const std::pair<const char*, double> want[] = {
      {"Exponential gamma=0.99", 3.962}, {"Exponential gamma=0.95", 0.446}, {"Exponential gamma=0.975", 0.242},
      {"Hyperbolic k=0.05", 0.250},      {"Beta-weighted mu=0.95 eta=0.5", 0.032}};
  c.check(rows.size() == std::size(want), "row count " + std::to_string(rows.size()));
  for (std::size_t k = 0; k < std::min(rows.size(), std::size(want)); ++k) {
    c.check(rows[k][0] == want[k].first, "row " + std::to_string(k) + " label '" + rows[k][0] + "'");
    c.within(ugae::csv::parse_double(rows[k][1]), want[k].second, 0.01, std::string(want[k].first) + " mse");
  }
  c.runtime_under(1.0);
  return c.report();
}

bool criterion_3() {
  Criterion c("3 UGAE equals recursive GAE for exponential schedules");
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> len(1, 1000);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const std::size_t T = len(rng);
    std::vector<double> r(T), v(T);
    for (auto& x : r) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    const ugae::Trajectory traj(r, v, normal(rng));
    for (double gamma : {0.9, 0.99, 1.0}) {
      const auto s = ugae::exponential_schedule(gamma, T + 1);
      for (double lambda : {0.0, 0.3, 0.95, 1.0}) {
        const auto a = ugae::ugae(traj, s, lambda).advantages;
        const auto b = ugae::gae_recursive(traj, gamma, lambda).advantages;
        for (std::size_t t = 0; t < T; ++t) worst = std::max(worst, std::abs(a[t] - b[t]));
      }
    }
  }
  c.at_most(worst, 1e-8, "max |ugae - gae|");
  c.runtime_under(30.0);
  return c.report();
}

bool criterion_4() {
  Criterion c("4 UGAE equals the weighted k-step oracle");
  const double grid[] = {-1.0, 0.0, 1.0, 2.0};
  const std::size_t max_len = 6;
  std::vector<ugae::DiscountSchedule> schedules{ugae::exponential_schedule(0.9, max_len + 1),
                                                ugae::beta_schedule(ugae::MuEta(0.95, 0.5), max_len + 1),
                                                ugae::fixed_horizon_schedule(3, max_len + 1)};
  // Lengths 1 and 2 are enumerated in full (64 + 1024 cases); longer ones are sampled.
  std::vector<std::vector<double>> cases;
  for (std::size_t T = 1; T <= 2; ++T) {
    const std::size_t cells = 2 * T + 1;
    std::size_t count = 1;
    for (std::size_t i = 0; i < cells; ++i) count *= 4;
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<double> x(cells);
      std::size_t rest = code;
      for (auto& e : x) {
        e = grid[rest % 4];
        rest /= 4;
      }
      cases.push_back(std::move(x));
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 3);
  const std::size_t sampled = (10000 - cases.size()) / (max_len - 2);
  for (std::size_t T = 3; T <= max_len; ++T)
    for (std::size_t n = 0; n < sampled; ++n) {
      std::vector<double> x(2 * T + 1);
      for (auto& e : x) e = grid[pick(rng)];
      cases.push_back(std::move(x));
    }
  c.check(cases.size() <= 10000, "case count " + std::to_string(cases.size()));

  double worst = 0.0;
  for (const auto& x : cases) {
    const std::size_t T = x.size() / 2;
    const std::vector<double> r(x.begin(), x.begin() + T);
    const std::vector<double> v_ext(x.begin() + T, x.end());
    const ugae::Trajectory traj(r, std::vector<double>(v_ext.begin(), v_ext.end() - 1), v_ext.back());
    for (const auto& s : schedules)
      for (double lambda : {0.0, 0.5, 1.0}) {
        const auto got = ugae::ugae(traj, s, lambda).advantages;
        const auto want = ugae::oracle::weighted_k_step(r, v_ext, s.weights(), lambda, T);
        for (std::size_t t = 0; t < T; ++t) worst = std::max(worst, std::abs(got[t] - want[t]));
      }
  }
  c.at_most(worst, 1e-12, "max |ugae - oracle|");
  return c.report();
}

bool criterion_5() {
  Criterion c("5 Beta-weighted special cases");
  for (double mu : {0.25, 0.5, 0.9, 0.95, 0.99}) {
    const auto b = ugae::beta_schedule(ugae::MuEta(mu, 1.0), 1000);
    const auto h = ugae::hyperbolic_schedule(mu, 1000);
    double worst = 0.0;
    for (std::size_t t = 0; t < 1000; ++t) worst = std::max(worst, std::abs(b[t] - h[t]));
    c.at_most(worst, 1e-12, "eta=1 vs hyperbolic, mu=" + ugae::csv::shortest(mu));
  }
  for (double mu : {0.9, 0.99}) {
    const auto b = ugae::beta_schedule(ugae::MuEta(mu, 1e-4), 101);
    double worst = 0.0;
    for (std::size_t t = 0; t <= 100; ++t) {
      const double e = std::pow(mu, static_cast<double>(t));
      worst = std::max(worst, std::abs(b[t] - e) / e);
    }
    c.at_most(worst, 1e-3, "eta=1e-4 vs exponential rel err, mu=" + ugae::csv::shortest(mu));
  }
  for (double mu : {0.1, 0.5, 0.95, 0.99})
    for (double eta : {0.1, 0.5, 1.0})
      c.within(ugae::beta_schedule(ugae::MuEta(mu, eta), 2)[1], mu, 1e-14,
               "Gamma(1), mu=" + ugae::csv::shortest(mu) + " eta=" + ugae::csv::shortest(eta));
  for (auto [a, b] : {std::pair{38.0, 2.0}, {1.0, 3.0}, {0.5, 0.5}, {198.0, 2.0}, {2.5, 1.0}}) {
    const auto s = ugae::beta_schedule(ugae::BetaParams(a, b), 51);
    double worst = 0.0;
    for (unsigned t = 0; t <= 50; ++t) worst = std::max(worst, std::abs(s[t] - ugae::oracle::beta_moment(a, b, t)));
    c.at_most(worst, 1e-8, "moment quadrature, alpha=" + ugae::csv::shortest(a) + " beta=" + ugae::csv::shortest(b));
  }
  for (double a : {1.0, 38.0, 198.0})
    for (double b : {1.5, 2.0, 4.0}) {
      const ugae::BetaParams p(a, b);
      const auto s = ugae::beta_schedule(p, 1'000'000);
      double sum = 0.0;
      for (double w : s.weights()) sum += w;
      c.relative(sum, *ugae::analytic_sum(p), 0.01,
                 "partial sum at H=1e6, alpha=" + ugae::csv::shortest(a) + " beta=" + ugae::csv::shortest(b));
    }
  return c.report();
}

bool criterion_6() {
  Criterion c("6 bias machinery");
  for (double gamma : {0.9, 0.99, 0.999}) {
    const auto s = ugae::exponential_schedule(gamma, 5051);
    for (std::size_t l : {1, 5, 50})
      c.at_most(std::abs(ugae::bias_coefficient(s, l, 5000)), 1e-9,
                "|delta_" + std::to_string(l) + "| exponential gamma=" + ugae::csv::shortest(gamma));
  }
  const auto beta = ugae::beta_schedule(ugae::MuEta(0.95, 0.5), 20000);
  const double b1 = ugae::bias_bound(beta, 0.9, 1.0, 5000);
  c.check(std::isfinite(b1) && b1 > 0.0, "bias bound not finite and positive: " + ugae::csv::shortest(b1));
  for (double R : {0.5, 3.0, 1000.0}) {
    const double bR = ugae::bias_bound(beta, 0.9, R, 5000);
    c.relative(bR, R * b1, 1e-12, "bias bound linear in R, R=" + ugae::csv::shortest(R));
  }
  return c.report();
}

bool criterion_7() {
  Criterion c("7 pathworld optimality identities and Monte Carlo check");
  namespace pw = ugae::pathworld;
  for (double l0 : {0.01, 0.05, 0.2}) {
    const pw::PathworldSpec spec{14, pw::hazard::Dirac{l0}};
    double worst = 0.0;
    for (const auto& r : pw::path_curve(ugae::exponential_schedule(std::exp(-l0), pw::required_horizon(spec)), spec))
      worst = std::max(worst, std::abs(r.predicted - r.empirical));
    c.at_most(worst, 1e-12, "Dirac + matched exponential, lambda0=" + ugae::csv::shortest(l0));
  }
  for (double k : {0.01, 0.05, 0.2}) {
    const pw::PathworldSpec spec{14, pw::hazard::Exponential{k}};
    double worst = 0.0;
    for (const auto& r : pw::path_curve(ugae::hyperbolic_schedule_k(k, pw::required_horizon(spec)), spec))
      worst = std::max(worst, std::abs(r.predicted - r.empirical));
    c.at_most(worst, 1e-12, "Exponential + matched hyperbolic, k=" + ugae::csv::shortest(k));
  }
  const std::pair<const char*, pw::Hazard> hazards[] = {{"uniform", pw::hazard::Uniform{0.05}},
                                                        {"exponential", pw::hazard::Exponential{0.05}},
                                                        {"dirac", pw::hazard::Dirac{0.05}}};
  for (const auto& [name, h] : hazards)
    for (std::size_t i = 0; i <= 14; ++i) {
      const auto est = pw::empirical_value_mc(i, h, 1'000'000, 12345, 4);
      const double exact = pw::empirical_value(i, h);
      std::ostringstream os;
      os << name << " i=" << i << ": mc " << est.mean << " +/- " << est.std_error << " vs " << exact;
      c.check(std::abs(est.mean - exact) <= 4.0 * est.std_error, os.str());
    }
  return c.report();
}

bool criterion_8() {
  Criterion c("8 bench scaling");
  namespace b = ugae::bench;
  const auto lengths = b::log_spaced(1000, 100000, 7);
  const auto rows = b::run_bench(lengths, 3, std::nullopt, 1);
  std::vector<double> x, gae, ug;
  for (const auto& r : rows) {
    x.push_back(static_cast<double>(r.episode_length));
    gae.push_back(r.gae_seconds);
    ug.push_back(r.ugae_seconds);
  }
  const double s_ugae = b::log_log_slope(x, ug);
  const double s_gae = b::log_log_slope(x, gae);
  c.check(s_ugae >= 1.7 && s_ugae <= 2.3, "UGAE slope " + ugae::csv::significant(s_ugae, 4) + " outside [1.7, 2.3]");
  c.check(s_gae >= 0.7 && s_gae <= 1.3, "GAE slope " + ugae::csv::significant(s_gae, 4) + " outside [0.7, 1.3]");

  const auto long_lengths = b::log_spaced(10000, 1000000, 5);
  const auto trunc_rows = b::run_bench(long_lengths, 3, std::size_t{256}, 1);
  std::vector<double> xt, ut;
  for (const auto& r : trunc_rows) {
    xt.push_back(static_cast<double>(r.episode_length));
    ut.push_back(r.ugae_seconds);
  }
  const double s_trunc = b::log_log_slope(xt, ut);
  c.check(s_trunc >= 0.7 && s_trunc <= 1.3,
          "truncated UGAE slope " + ugae::csv::significant(s_trunc, 4) + " outside [0.7, 1.3]");
  std::printf("       slopes: ugae %.3f, gae %.3f, ugae trunc=256 %.3f\n", s_ugae, s_gae, s_trunc);
  c.runtime_under(300.0);
  return c.report();
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                    criterion_5, criterion_6, criterion_7, criterion_8};
  int failed = 0;
  for (const auto& run : criteria) {
    try {
      if (!run()) ++failed;
    } catch (const std::exception& ex) {
      std::printf("[FAIL] criterion raised: %s\n", ex.what());
      ++failed;
    }
  }
  std::printf("[SKIP] 9 deep RL training results are out of scope\n");
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
