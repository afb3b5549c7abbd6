// Copyright 2026 The Obfugame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "obfugame/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "obfugame/cli/report_io.h"
#include "obfugame/config_io.h"
#include "obfugame/dp_mechanism.h"
#include "obfugame/game_model.h"
#include "obfugame/response_solver.h"
#include "obfugame/validation.h"

#ifndef OBFUGAME_VERSION
#define OBFUGAME_VERSION "unknown"
#endif

namespace obfugame::cli {
namespace {

namespace fs = std::filesystem;

struct LoadedConfig {
  std::string path;
  std::string stem;
  GameConfig config;
};

// Loads every --config, rejecting a missing flag and clashing stems (each
// config gets its own output directory named after the file stem).
int LoadConfigs(const GlobalOptions& global, const char* command,
                std::vector<LoadedConfig>& loaded, std::ostream& err) {
  if (global.config_paths.empty()) {
    err << command << ": --config is required\n";
    return kExitUsageError;
  }
  std::set<std::string> stems;
  for (const std::string& path : global.config_paths) {
    absl::StatusOr<GameConfig> config = LoadConfig(path);
    if (!config.ok()) {
      err << "error: " << config.status().message() << "\n";
      return kExitUsageError;
    }
    std::string stem = fs::path(path).stem().string();
    if (!stems.insert(stem).second) {
      err << command << ": two configs share the output name '" << stem
          << "'\n";
      return kExitUsageError;
    }
    loaded.push_back({path, std::move(stem), *std::move(config)});
  }
  return kExitSuccess;
}

bool WriteFile(const fs::path& path, const std::string& contents,
               std::ostream& err) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (ec || !out) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  out << contents;
  out.close();
  if (!out) {
    err << "error: failed writing " << path.string() << "\n";
    return false;
  }
  return true;
}

std::string Manifest(const char* command, const std::string& config_path,
                     const GlobalOptions& global) {
  return FormatManifest({command, config_path, global.seed, global.out_dir,
                         OBFUGAME_VERSION, CurrentTimestamp()});
}

// Values min, min + step, ... up to max (inclusive within 1e-9 steps).
std::vector<double> Range(double min, double max, double step) {
  const long count =
      static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (long k = 0; k < count; ++k) values.push_back(min + k * step);
  return values;
}

int ReportSolverError(const absl::Status& status, std::ostream& err) {
  err << "solver error: " << status.message() << "\n";
  return kExitSolverError;
}

std::string UserHeader(const char* prefix, std::size_t users) {
  std::vector<std::string> names;
  names.reserve(users);
  for (std::size_t i = 0; i < users; ++i) {
    names.push_back(absl::StrCat(prefix, i));
  }
  return absl::StrJoin(names, ",");
}

}  // namespace

int RunSolve(const GlobalOptions& global, const SolveOptions& options,
             std::ostream& out, std::ostream& err) {
  std::vector<LoadedConfig> configs;
  if (int code = LoadConfigs(global, "solve", configs, err); code != 0) {
    return code;
  }
  if (global.oracle && !(options.fine_step > 0.0)) {
    err << "solve: --fine-step must be positive\n";
    return kExitUsageError;
  }
  bool all_agree = true;
  for (const LoadedConfig& c : configs) {
    absl::StatusOr<ResponseModel> model = ResponseModel::Create(c.config);
    if (!model.ok()) return ReportSolverError(model.status(), err);
    absl::StatusOr<EquilibriumResult> result = StackelbergSolve(c.config);
    if (!result.ok()) return ReportSolverError(result.status(), err);

    const fs::path dir = fs::path(global.out_dir) / c.stem;
    if (!WriteFile(dir / "equilibrium.txt", FormatEquilibriumRecord(*result),
                   err) ||
        !WriteFile(dir / "thresholds.csv", FormatThresholdsCsv(*model), err) ||
        !WriteFile(dir / "manifest.txt", Manifest("solve", c.path, global),
                   err)) {
      return kExitUsageError;
    }
    out << c.stem << ": sigma_L_star = " << FormatNumber(result->sigma_l_star)
        << ", U_L = " << FormatNumber(result->learner_utility) << "\n";

    if (!global.oracle) continue;
    absl::StatusOr<EquilibriumResult> oracle =
        BruteForceEquilibrium(c.config, options.fine_step);
    if (!oracle.ok()) return ReportSolverError(oracle.status(), err);
    const double sigma_gap =
        std::abs(result->sigma_l_star - oracle->sigma_l_star);
    const double utility_gap =
        std::abs(result->learner_utility - oracle->learner_utility);
    const double sigma_tolerance =
        std::max(c.config.solver.grid_step, options.fine_step);
    const bool agree = sigma_gap <= sigma_tolerance &&
                       utility_gap <= options.utility_tolerance;
    all_agree = all_agree && agree;
    const std::string comparison = absl::StrCat(
        "fine_step = ", FormatNumber(options.fine_step), "\n",
        "sigma_L_gap = ", FormatNumber(sigma_gap), "\n",
        "sigma_L_tolerance = ", FormatNumber(sigma_tolerance), "\n",
        "U_L_gap = ", FormatNumber(utility_gap), "\n",
        "U_L_tolerance = ", FormatNumber(options.utility_tolerance), "\n",
        "agree = ", agree ? "true" : "false", "\n");
    if (!WriteFile(dir / "oracle_equilibrium.txt",
                   FormatEquilibriumRecord(*oracle), err) ||
        !WriteFile(dir / "oracle_comparison.txt", comparison, err)) {
      return kExitUsageError;
    }
    out << c.stem
        << ": oracle sigma_L_star = " << FormatNumber(oracle->sigma_l_star)
        << ", U_L = " << FormatNumber(oracle->learner_utility)
        << (agree ? " (agrees)" : " (DISAGREES)") << "\n";
  }
  return all_agree ? kExitSuccess : kExitValidationFailure;
}

int RunSweep(const GlobalOptions& global, const SweepOptions& options,
             std::ostream& out, std::ostream& err) {
  std::vector<LoadedConfig> configs;
  if (int code = LoadConfigs(global, "sweep", configs, err); code != 0) {
    return code;
  }
  for (const LoadedConfig& c : configs) {
    const SolverSettings& solver = c.config.solver;
    const double lo = options.sigma_min.value_or(0.0);
    const double hi = options.sigma_max.value_or(solver.sigma_max);
    const double step = options.sigma_step.value_or(solver.grid_step);
    const double curve_hi = options.curve_sigma_max.value_or(solver.sigma_max);
    if (!(lo >= 0.0) || !(hi >= lo) || !(step > 0.0) || !std::isfinite(hi)) {
      err << "sweep: need 0 <= --sigma-min <= --sigma-max and --sigma-step > "
             "0\n";
      return kExitUsageError;
    }
    double curve_step = options.curve_step.value_or((hi - lo) / 10.0);
    if (options.curve_step && !(curve_step > 0.0)) {
      err << "sweep: --curve-step must be positive\n";
      return kExitUsageError;
    }
    if (!(curve_hi >= 0.0) || !std::isfinite(curve_hi)) {
      err << "sweep: --curve-sigma-max must be non-negative\n";
      return kExitUsageError;
    }
    if (!(curve_step > 0.0)) curve_step = 1.0;  // single-point sweep

    absl::StatusOr<ResponseModel> model = ResponseModel::Create(c.config);
    if (!model.ok()) return ReportSolverError(model.status(), err);
    const std::size_t users = model->num_users();

    std::string br_csv =
        absl::StrCat("sigma_L,", UserHeader("br_user_", users), "\n");
    std::string leader_csv =
        absl::StrCat("sigma_L,", UserHeader("br_user_", users), ",U_L,",
                     UserHeader("U_S_", users), "\n");
    for (double sigma_l : Range(lo, hi, step)) {
      StrategyProfile profile{sigma_l, model->BestResponses(sigma_l)};
      std::vector<std::string> br_row = {FormatNumber(sigma_l)};
      for (double br : profile.sigma_s) br_row.push_back(FormatNumber(br));
      absl::StrAppend(&br_csv, CsvLine(br_row));

      absl::StatusOr<double> u_l = LearnerUtility(c.config, profile);
      if (!u_l.ok()) return ReportSolverError(u_l.status(), err);
      br_row.push_back(FormatNumber(*u_l));
      for (std::size_t i = 0; i < users; ++i) {
        absl::StatusOr<double> u_s = UserUtility(c.config, i, profile);
        if (!u_s.ok()) return ReportSolverError(u_s.status(), err);
        br_row.push_back(FormatNumber(*u_s));
      }
      absl::StrAppend(&leader_csv, CsvLine(br_row));
    }

    // Each user's utility over her own sigma_S with the others at their
    // best responses to the same sigma_L.
    std::string user_csv =
        absl::StrCat("sigma_L,sigma_S,", UserHeader("U_S_", users), "\n");
    for (double sigma_l : Range(lo, hi, curve_step)) {
      const std::vector<double> responses = model->BestResponses(sigma_l);
      for (double sigma_s : Range(0.0, curve_hi, step)) {
        std::vector<std::string> row = {FormatNumber(sigma_l),
                                        FormatNumber(sigma_s)};
        for (std::size_t i = 0; i < users; ++i) {
          StrategyProfile profile{sigma_l, responses};
          profile.sigma_s[i] = sigma_s;
          absl::StatusOr<double> u_s = UserUtility(c.config, i, profile);
          if (!u_s.ok()) return ReportSolverError(u_s.status(), err);
          row.push_back(FormatNumber(*u_s));
        }
        absl::StrAppend(&user_csv, CsvLine(row));
      }
    }

    const fs::path dir = fs::path(global.out_dir) / c.stem;
    if (!WriteFile(dir / "best_response.csv", br_csv, err) ||
        !WriteFile(dir / "leader_utility.csv", leader_csv, err) ||
        !WriteFile(dir / "user_utility.csv", user_csv, err) ||
        !WriteFile(dir / "thresholds.csv", FormatThresholdsCsv(*model), err) ||
        !WriteFile(dir / "manifest.txt", Manifest("sweep", c.path, global),
                   err)) {
      return kExitUsageError;
    }
    out << c.stem << ": wrote sweep to " << dir.string() << "\n";
  }
  return kExitSuccess;
}

int RunDp(const DpOptions& options, std::ostream& out, std::ostream& err) {
  if (options.sigma && options.epsilon) {
    err << "dp: --sigma and --epsilon are mutually exclusive\n";
    return kExitUsageError;
  }
  const bool convert = options.sigma || options.epsilon;
  const bool norm_bound = options.d || options.zeta;
  if (!convert && !norm_bound) {
    err << "dp: give --sigma or --epsilon (with --delta), or --d and --zeta\n";
    return kExitUsageError;
  }
  if (convert && !options.delta) {
    err << "dp: --delta is required with --sigma or --epsilon\n";
    return kExitUsageError;
  }
  if (norm_bound && !(options.d && options.zeta)) {
    err << "dp: --d and --zeta must be given together\n";
    return kExitUsageError;
  }

  std::vector<std::pair<std::string, std::string>> fields;
  auto add = [&fields](const char* key, std::string value) {
    fields.emplace_back(key, std::move(value));
  };
  if (options.delta) add("delta", FormatNumber(*options.delta));
  if (convert) {
    double sigma = 0.0;
    if (options.sigma) {
      sigma = *options.sigma;
    } else {
      absl::StatusOr<double> s =
          SigmaFromEpsilon(*options.epsilon, *options.delta);
      if (!s.ok()) {
        err << "dp: " << s.status().message() << "\n";
        return kExitUsageError;
      }
      sigma = *s;
    }
    absl::StatusOr<DpGuarantee> g = EpsilonFromSigma(sigma, *options.delta);
    if (!g.ok()) {
      err << "dp: " << g.status().message() << "\n";
      return kExitUsageError;
    }
    add("sigma", FormatNumber(sigma));
    add("epsilon",
        FormatNumber(options.epsilon ? *options.epsilon : g->epsilon));
    add("epsilon_in_guaranteed_range",
        g->outside_guaranteed_range ? "false" : "true");
  }
  if (norm_bound) {
    absl::StatusOr<double> p = ChiSquareCdf(*options.d, *options.zeta);
    if (!p.ok()) {
      err << "dp: " << p.status().message() << "\n";
      return kExitUsageError;
    }
    add("d", absl::StrCat(*options.d));
    add("zeta", FormatNumber(*options.zeta));
    add("probability", FormatNumber(*p));
    const bool combine = options.delta && *options.delta < 1.0;
    if (combine) {
      absl::StatusOr<NormBoundReport> report =
          NormBoundProbability(*options.d, *options.zeta, options.sigma_l,
                               options.sigma_s, *options.delta);
      if (!report.ok()) {
        err << "dp: " << report.status().message() << "\n";
        return kExitUsageError;
      }
      add("sigma_L", FormatNumber(options.sigma_l));
      add("sigma_S", FormatNumber(options.sigma_s));
      add("norm_sq_bound", FormatNumber(report->norm_sq_bound));
      add("combined_success", FormatNumber(report->combined_success));
      add("union_bound_success", FormatNumber(report->union_bound_success));
    }
  }

  if (options.csv) {
    std::vector<std::string> keys, values;
    for (const auto& [k, v] : fields) {
      keys.push_back(k);
      values.push_back(v);
    }
    out << CsvLine(keys) << CsvLine(values);
    return kExitSuccess;
  }
  std::size_t width = 0;
  for (const auto& [k, v] : fields) width = std::max(width, k.size());
  for (const auto& [k, v] : fields) {
    out << k << std::string(width - k.size(), ' ') << " = " << v << "\n";
  }
  return kExitSuccess;
}

int RunValidate(const GlobalOptions& global, const ValidateOptions& options,
                std::ostream& out, std::ostream& err) {
  const std::string& suite = options.suite;
  if (options.trials && *options.trials < 1) {
    err << "validate: --trials must be at least 1\n";
    return kExitUsageError;
  }
  std::string csv;
  int passed = 0;
  int total = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> failed_seeds;
  auto record = [&](bool ok, double slack, std::uint64_t seed) {
    ++total;
    if (ok) {
      ++passed;
    } else {
      failed_seeds.push_back(seed);
    }
    worst_slack = std::min(worst_slack, slack);
  };

  if (suite == "lemma1" || suite == "lemma2") {
    const bool first = suite == "lemma1";
    const int trials = options.trials.value_or(100);
    csv = "seed,n,d,sigma_L,sigma_S_mean,sigma_S_max,lhs,rhs,slack,holds\n";
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed = global.seed + t;
      absl::StatusOr<LemmaTrial> trial = RunLemmaTrial({}, seed);
      if (!trial.ok()) return ReportSolverError(trial.status(), err);
      const BoundReport& b =
          first ? trial->classifier_gap : trial->empirical_gap;
      double mean = 0.0, max = 0.0;
      for (double s : trial->sigma_s) {
        mean += s;
        max = std::max(max, s);
      }
      mean /= static_cast<double>(trial->sigma_s.size());
      absl::StrAppend(
          &csv, CsvLine({absl::StrCat(seed), absl::StrCat(trial->n),
                         absl::StrCat(trial->d), FormatNumber(trial->sigma_l),
                         FormatNumber(mean), FormatNumber(max),
                         FormatNumber(b.lhs), FormatNumber(b.rhs),
                         FormatNumber(b.slack), b.holds ? "true" : "false"}));
      record(b.holds, b.slack, seed);
    }
  } else if (suite == "chi2") {
    ChiSquareSuiteSpec spec;
    spec.samples = options.samples;
    if (spec.samples < 1) {
      err << "validate: --samples must be at least 1\n";
      return kExitUsageError;
    }
    absl::StatusOr<std::vector<ChiSquareCheck>> checks =
        RunChiSquareSuite(spec, global.seed);
    if (!checks.ok()) return ReportSolverError(checks.status(), err);
    csv = "seed,d,zeta,samples,empirical,cdf,abs_error,passed\n";
    for (const ChiSquareCheck& c : *checks) {
      absl::StrAppend(
          &csv,
          CsvLine({absl::StrCat(global.seed), absl::StrCat(c.d),
                   FormatNumber(c.zeta), absl::StrCat(spec.samples),
                   FormatNumber(c.empirical), FormatNumber(c.cdf),
                   FormatNumber(c.abs_error), c.passed ? "true" : "false"}));
      record(c.passed, spec.tolerance - c.abs_error, global.seed);
    }
  } else if (suite == "scaling") {
    ScalingSpec spec;
    if (options.trials) spec.trials_per_point = *options.trials;
    absl::StatusOr<ScalingResult> result = RunScalingSuite(spec, global.seed);
    if (!result.ok()) return ReportSolverError(result.status(), err);
    csv =
        "seed,sigma_L,noise_scale,mean_gap,standard_error,explicit_term,"
        "big_o_magnitude\n";
    for (const ScalingPoint& p : result->points) {
      absl::StrAppend(
          &csv, CsvLine({absl::StrCat(global.seed), FormatNumber(p.sigma_l),
                         FormatNumber(p.noise_scale), FormatNumber(p.mean_gap),
                         FormatNumber(p.standard_error),
                         FormatNumber(p.explicit_term),
                         FormatNumber(p.big_o_magnitude)}));
    }
    constexpr double kMinSpearman = 0.9;
    out << "spearman = " << FormatNumber(result->spearman) << "\n";
    record(result->spearman >= kMinSpearman, result->spearman - kMinSpearman,
           global.seed);
  } else if (suite == "oracle") {
    const int trials = options.trials.value_or(20);
    if (!(options.fine_step > 0.0)) {
      err << "validate: --fine-step must be positive\n";
      return kExitUsageError;
    }
    csv =
        "seed,users,solver_sigma_L,oracle_sigma_L,solver_U_L,oracle_U_L,"
        "sigma_ok,utility_ok\n";
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed = global.seed + t;
      const GameConfig config = RandomSmallConfig(seed);
      absl::StatusOr<OracleComparison> c = CompareWithOracle(
          config, seed, options.fine_step, options.utility_tolerance);
      if (!c.ok()) return ReportSolverError(c.status(), err);
      absl::StrAppend(&csv, CsvLine({absl::StrCat(seed), absl::StrCat(c->users),
                                     FormatNumber(c->solver_sigma_l),
                                     FormatNumber(c->oracle_sigma_l),
                                     FormatNumber(c->solver_utility),
                                     FormatNumber(c->oracle_utility),
                                     c->sigma_ok ? "true" : "false",
                                     c->utility_ok ? "true" : "false"}));
      const double slack = options.utility_tolerance -
                           std::abs(c->solver_utility - c->oracle_utility);
      record(c->sigma_ok && c->utility_ok, slack, seed);
    }
  } else {
    err << "validate: unknown suite '" << suite
        << "' (expected lemma1, lemma2, chi2, scaling or oracle)\n";
    return kExitUsageError;
  }

  const fs::path dir = fs::path(global.out_dir) / ("validate_" + suite);
  if (!WriteFile(dir / "results.csv", csv, err) ||
      !WriteFile(dir / "manifest.txt",
                 Manifest("validate", absl::StrCat("suite=", suite), global),
                 err)) {
    return kExitUsageError;
  }
  out << "suite = " << suite << "\n"
      << "passed = " << passed << "/" << total << "\n"
      << "worst_slack = " << FormatNumber(worst_slack) << "\n";
  if (failed_seeds.empty()) return kExitSuccess;
  err << "validate: " << failed_seeds.size()
      << " failure(s); replay with --seed " << failed_seeds.front()
      << " --trials 1\n";
  return kExitValidationFailure;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Learner-user obfuscation game solver and validation lab",
               "obfugame"};
  app.set_version_flag("--version", OBFUGAME_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config_paths, "Game config file")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--seed", global.seed, "Base random seed");
  app.add_option("--out", global.out_dir, "Output directory");
  app.add_flag("--oracle", global.oracle,
               "Cross-check solve against the brute-force grid");

  SolveOptions solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Compute the equilibrium");
  solve_cmd->add_option("--fine-step", solve.fine_step,
                        "Brute-force grid step for --oracle");
  solve_cmd->add_option("--utility-tol", solve.utility_tolerance,
                        "Allowed U_L gap for --oracle");

  SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Best responses and utilities over sigma_L");
  sweep_cmd->add_option("--sigma-min", sweep.sigma_min);
  sweep_cmd->add_option("--sigma-max", sweep.sigma_max);
  sweep_cmd->add_option("--sigma-step", sweep.sigma_step);
  sweep_cmd->add_option("--curve-step", sweep.curve_step,
                        "sigma_L spacing of the user utility curves");
  sweep_cmd->add_option("--curve-sigma-max", sweep.curve_sigma_max,
                        "Upper end of the sigma_S axis of those curves");

  DpOptions dp;
  std::string format = "text";
  CLI::App* dp_cmd =
      app.add_subcommand("dp", "Privacy level and noise norm bound");
  dp_cmd->add_option("--sigma", dp.sigma, "Total noise standard deviation");
  dp_cmd->add_option("--epsilon", dp.epsilon);
  dp_cmd->add_option("--delta", dp.delta);
  dp_cmd->add_option("--d", dp.d, "Data dimension");
  dp_cmd->add_option("--zeta", dp.zeta);
  dp_cmd->add_option("--sigma-l", dp.sigma_l);
  dp_cmd->add_option("--sigma-s", dp.sigma_s);
  dp_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));

  ValidateOptions validate;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Run a randomized property suite");
  validate_cmd->add_option("--suite", validate.suite)
      ->required()
      ->check(CLI::IsMember({"lemma1", "lemma2", "chi2", "scaling", "oracle"}));
  validate_cmd->add_option("--trials", validate.trials);
  validate_cmd->add_option("--samples", validate.samples);
  validate_cmd->add_option("--fine-step", validate.fine_step);
  validate_cmd->add_option("--utility-tol", validate.utility_tolerance);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsageError;
  }

  if (*solve_cmd) return RunSolve(global, solve, out, err);
  if (*sweep_cmd) return RunSweep(global, sweep, out, err);
  if (*dp_cmd) {
    dp.csv = format == "csv";
    return RunDp(dp, out, err);
  }
  return RunValidate(global, validate, out, err);
}

}  // namespace obfugame::cli
