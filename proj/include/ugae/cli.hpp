#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ugae/advantage.hpp"
#include "ugae/analysis.hpp"
#include "ugae/bench.hpp"
#include "ugae/csv.hpp"
#include "ugae/descriptor.hpp"
#include "ugae/pathworld.hpp"
#include "ugae/schedule.hpp"

namespace ugae::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kIoError = 2 };

/// Relative output paths are placed under this directory when it is set.
inline constexpr const char* kOutputDirEnv = "UGAE_OUTPUT_DIR";

namespace detail {

inline std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir && p.is_relative())
    return std::filesystem::path(dir) / p;
  return p;
}

/// Writes to stdout when `path` is empty.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  const auto p = resolve_output(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  }
  csv::write_file(p.string(), content);
}

inline pathworld::Hazard parse_hazard(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("hazard must look like uniform:0.05, exp:0.05 or dirac:0.05");
  const std::string kind = csv::trim(text.substr(0, colon));
  const double p = csv::parse_double(text.substr(colon + 1));
  pathworld::Hazard h;
  if (kind == "uniform")
    h = pathworld::hazard::Uniform{p};
  else if (kind == "exp" || kind == "exponential")
    h = pathworld::hazard::Exponential{p};
  else if (kind == "dirac")
    h = pathworld::hazard::Dirac{p};
  else
    throw std::invalid_argument("unknown hazard kind '" + kind + "'; use uniform, exp or dirac");
  pathworld::validate(h);
  return h;
}

inline std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.')
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (c == ' ' && !out.empty() && out.back() != '_')
      out += '_';
  }
  return out;
}

inline Trajectory read_trajectory(const std::string& path, double bootstrap) {
  const std::string text = csv::read_file(path);
  std::vector<double> rewards, values;
  std::size_t reward_col = 0, value_col = 1;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split(line);
    if (first) {
      first = false;
      // Optional header naming the columns.
      std::vector<std::string> names;
      for (const auto& c : cells) names.push_back(csv::trim(c));
      const auto r = std::find(names.begin(), names.end(), "reward");
      const auto v = std::find(names.begin(), names.end(), "value");
      if (r != names.end() || v != names.end()) {
        if (r == names.end() || v == names.end())
          throw std::invalid_argument(path + ": header must name both 'reward' and 'value'");
        reward_col = static_cast<std::size_t>(r - names.begin());
        value_col = static_cast<std::size_t>(v - names.begin());
        continue;
      }
    }
    if (cells.size() <= std::max(reward_col, value_col))
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": too few columns");
    try {
      rewards.push_back(csv::parse_double(cells[reward_col]));
      values.push_back(csv::parse_double(cells[value_col]));
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return Trajectory(std::move(rewards), std::move(values), bootstrap);
}

inline std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& cell : csv::split(text)) {
    const double v = csv::parse_double(cell);
    if (!(v >= 1.0) || v != std::floor(v))
      throw std::invalid_argument("lengths must be positive integers, got '" + csv::trim(cell) + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace detail

inline std::string schedule_csv(const DiscountSchedule& s) {
  std::string out = "t,weight\n";
  for (std::size_t t = 0; t < s.size(); ++t) out += std::to_string(t) + ',' + csv::shortest(s[t]) + '\n';
  return out;
}

inline std::string property_csv(const std::vector<PropertyRow>& rows, bool full_precision) {
  auto fmt = [&](double x) { return full_precision ? csv::shortest(x) : csv::significant(x, 4); };
  std::string out = "label,g0_10,g10_100,g100_1000,g1000_10000,variance,t_eff,total_1000\n";
  for (const auto& r : rows) {
    out += r.label + ',' + fmt(r.g_0_10) + ',' + fmt(r.g_10_100) + ',' + fmt(r.g_100_1000) + ',' +
           fmt(r.g_1000_10000) + ',' + fmt(r.variance_measure) + ',' + std::to_string(r.t_eff) + ',' +
           fmt(r.total_1000) + '\n';
  }
  return out;
}

inline std::string advantage_csv(const AdvantageVector& a) {
  std::string out = "t,advantage\n";
  for (std::size_t t = 0; t < a.size(); ++t) out += std::to_string(t) + ',' + csv::shortest(a[t]) + '\n';
  return out;
}

inline std::string curve_csv(const std::vector<pathworld::PathValueRow>& rows) {
  std::string out = "i,d,predicted,empirical,sq_err\n";
  for (const auto& r : rows)
    out += std::to_string(r.path_index) + ',' + std::to_string(r.delay) + ',' + csv::shortest(r.predicted) +
           ',' + csv::shortest(r.empirical) + ',' + csv::shortest(r.squared_error) + '\n';
  return out;
}

inline std::string mse_csv(const std::vector<pathworld::MseRow>& rows) {
  std::string out = "label,mse,sum_sq_err\n";
  for (const auto& r : rows) out += r.label + ',' + csv::shortest(r.mse) + ',' + csv::shortest(r.sum_sq_err) + '\n';
  return out;
}

inline std::string bench_csv(const std::vector<bench::BenchRow>& rows) {
  std::string out = "length,gae_s,ugae_s\n";
  for (const auto& r : rows)
    out += std::to_string(r.episode_length) + ',' + csv::shortest(r.gae_seconds) + ',' +
           csv::shortest(r.ugae_seconds) + '\n';
  return out;
}

/// Entry point shared by the executable and the tests. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Advantage estimation and discounting workbench", "ugae"};
  app.require_subcommand(1);

  // schedule
  auto* sched_cmd = app.add_subcommand("schedule", "Dump a discount schedule as t,weight CSV");
  std::string sched_desc;
  std::size_t sched_horizon = kAnalysisHorizon;
  std::string sched_out;
  sched_cmd->add_option("-s,--schedule", sched_desc, "Schedule descriptor, e.g. beta(mu=0.95,eta=0.5)")
      ->required();
  sched_cmd->add_option("-H,--horizon", sched_horizon, "Number of weights")->capture_default_str();
  sched_cmd->add_option("-o,--out", sched_out, "Output file (default stdout)");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Discounting property table");
  std::string analyze_file;
  std::size_t analyze_horizon = kAnalysisHorizon;
  bool full_precision = false;
  std::string analyze_out;
  analyze_cmd->add_option("descriptors", analyze_file, "Descriptor file (default: built-in 15 rows)");
  analyze_cmd->add_option("-H,--horizon", analyze_horizon, "Analysis horizon")->capture_default_str();
  analyze_cmd->add_flag("--full-precision", full_precision, "Shortest round-trip values");
  analyze_cmd->add_option("-o,--out", analyze_out, "Output file (default stdout)");

  // advantage
  auto* adv_cmd = app.add_subcommand("advantage", "Advantages for a reward,value trajectory CSV");
  std::string adv_input;
  double adv_bootstrap = 0.0;
  std::string adv_desc = "exp(gamma=0.99)";
  double adv_lambda = 0.95;
  std::optional<std::size_t> adv_trunc;
  std::string adv_estimator = "ugae";
  std::string adv_out;
  adv_cmd->add_option("-i,--input", adv_input, "Trajectory CSV with columns reward,value")->required();
  adv_cmd->add_option("-b,--bootstrap", adv_bootstrap, "V(s_T); 0 for a terminal state")->capture_default_str();
  adv_cmd->add_option("-s,--schedule", adv_desc, "Schedule descriptor")->capture_default_str();
  adv_cmd->add_option("-l,--lambda", adv_lambda, "GAE lambda in [0,1]")->capture_default_str();
  adv_cmd->add_option("--trunc", adv_trunc, "Maximum lookahead L");
  adv_cmd->add_option("-e,--estimator", adv_estimator, "ugae, gae (exponential only) or mc")
      ->check(CLI::IsMember({"ugae", "gae", "mc"}))
      ->capture_default_str();
  adv_cmd->add_option("-o,--out", adv_out, "Output file (default stdout)");

  // pathworld
  auto* pw_cmd = app.add_subcommand("pathworld", "Pathworld value curves and MSE table");
  std::string pw_hazard = "uniform:0.05";
  std::vector<std::string> pw_descs;
  std::size_t pw_paths = 14;
  std::uint64_t pw_mc_episodes = 0;
  std::uint64_t pw_seed = 0;
  std::size_t pw_shards = 1;
  std::string pw_curves_dir;
  std::string pw_mc_out = "mc_check.csv";
  std::string pw_out;
  pw_cmd->add_option("--hazard", pw_hazard, "uniform:MEAN, exp:MEAN or dirac:LAMBDA")->capture_default_str();
  pw_cmd->add_option("-s,--schedule", pw_descs, "Schedule descriptor (repeatable; default: 5 reference rows)");
  pw_cmd->add_option("--paths", pw_paths, "Largest path index")->capture_default_str();
  pw_cmd->add_option("--mc-episodes", pw_mc_episodes, "Monte Carlo episodes per path for the closed-form check");
  pw_cmd->add_option("--seed", pw_seed, "Monte Carlo seed")->capture_default_str();
  pw_cmd->add_option("--shards", pw_shards, "Monte Carlo worker shards")->capture_default_str();
  pw_cmd->add_option("--curves-dir", pw_curves_dir, "Directory for per-schedule curve CSVs");
  pw_cmd->add_option("--mc-out", pw_mc_out, "Monte Carlo check CSV path")->capture_default_str();
  pw_cmd->add_option("-o,--out", pw_out, "Summary output file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time recursive GAE against UGAE");
  std::string bench_lengths;
  std::size_t bench_reps = 5;
  std::optional<std::size_t> bench_trunc;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  bench_cmd->add_option("--lengths", bench_lengths, "Comma-separated lengths (default: 16 log-spaced in [1, 1e5])");
  bench_cmd->add_option("--reps", bench_reps, "Timed repetitions per length")->capture_default_str();
  bench_cmd->add_option("--trunc", bench_trunc, "UGAE lookahead cap");
  bench_cmd->add_option("--seed", bench_seed, "Trajectory seed")->capture_default_str();
  bench_cmd->add_option("-o,--out", bench_out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidationError;
  }

  try {
    if (*sched_cmd) {
      const auto d = parse_descriptor(sched_desc);
      detail::emit(sched_out, schedule_csv(build_schedule(d, sched_horizon)), out);
    } else if (*analyze_cmd) {
      std::vector<TableEntry> entries;
      if (analyze_file.empty()) {
        entries = default_table_entries();
      } else {
        for (const auto& d : parse_descriptor_list(csv::read_file(analyze_file)))
          entries.push_back({descriptor_label(d), [d](std::size_t h) { return build_schedule(d, h); }});
      }
      detail::emit(analyze_out, property_csv(property_table(entries, analyze_horizon), full_precision), out);
    } else if (*adv_cmd) {
      const Trajectory traj = detail::read_trajectory(adv_input, adv_bootstrap);
      const auto d = parse_descriptor(adv_desc);
      const DiscountSchedule s = build_schedule(d, traj.size() + 1);
      AdvantageVector a;
      if (adv_estimator == "ugae") {
        a = ugae(traj, s, adv_lambda, adv_trunc);
      } else if (adv_estimator == "mc") {
        a = monte_carlo_advantage(traj, s);
      } else {
        if (d.kind != ScheduleDescriptor::Kind::Exponential || d.trunc)
          throw std::invalid_argument("the gae estimator needs an untruncated exp(gamma=...) schedule");
        a = gae_recursive(traj, d.params.at("gamma"), adv_lambda);
      }
      detail::emit(adv_out, advantage_csv(a), out);
    } else if (*pw_cmd) {
      pathworld::PathworldSpec spec{pw_paths, detail::parse_hazard(pw_hazard)};
      std::vector<pathworld::LabeledSchedule> schedules;
      if (pw_descs.empty()) {
        schedules = pathworld::default_mse_schedules(spec);
      } else {
        for (const auto& text : pw_descs) {
          const auto d = parse_descriptor(text);
          schedules.push_back({descriptor_label(d), build_schedule(d, pathworld::required_horizon(spec))});
        }
      }
      if (!pw_curves_dir.empty()) {
        for (std::size_t k = 0; k < schedules.size(); ++k) {
          const auto path = (std::filesystem::path(pw_curves_dir) /
                             ("curve_" + std::to_string(k) + "_" + detail::slug(schedules[k].label) + ".csv"))
                                .string();
          detail::emit(path, curve_csv(pathworld::path_curve(schedules[k].schedule, spec)), out);
        }
      }
      if (pw_mc_episodes > 0) {
        std::string mc = "i,closed_form,mc_mean,mc_std_error\n";
        for (std::size_t i = 0; i <= spec.num_paths; ++i) {
          const auto est = pathworld::empirical_value_mc(i, spec.hazard, pw_mc_episodes, pw_seed, pw_shards);
          mc += std::to_string(i) + ',' + csv::shortest(pathworld::empirical_value(i, spec.hazard)) + ',' +
                csv::shortest(est.mean) + ',' + csv::shortest(est.std_error) + '\n';
        }
        detail::emit(pw_mc_out, mc, out);
      }
      detail::emit(pw_out, mse_csv(pathworld::mse_table(schedules, spec)), out);
    } else if (*bench_cmd) {
      const auto lengths = bench_lengths.empty() ? bench::log_spaced(1, 100000, 16)
                                                 : detail::parse_lengths(bench_lengths);
      detail::emit(bench_out, bench_csv(bench::run_bench(lengths, bench_reps, bench_trunc, bench_seed)), out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kOk;
}

}  // namespace ugae::cli
