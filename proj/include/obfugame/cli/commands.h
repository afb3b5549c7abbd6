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

// Subcommands of the `obfugame` tool. Each returns a process exit code:
//   0 success, 1 validation failure, 2 usage or config error,
//   3 internal solver error.

#ifndef OBFUGAME_CLI_COMMANDS_H_
#define OBFUGAME_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace obfugame::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitValidationFailure = 1,
  kExitUsageError = 2,
  kExitSolverError = 3,
};

struct GlobalOptions {
  std::vector<std::string> config_paths;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool oracle = false;
};

struct SolveOptions {
  double fine_step = 0.01;         // brute-force grid for --oracle
  double utility_tolerance = 0.1;  // allowed |U_L| gap for --oracle
};

struct SweepOptions {
  std::optional<double> sigma_min;
  std::optional<double> sigma_max;
  std::optional<double> sigma_step;
  // Spacing of the sigma_L values at which full U_S vs sigma_S curves are
  // written; defaults to a tenth of the sweep range.
  std::optional<double> curve_step;
  // Upper end of the sigma_S axis of those curves; defaults to
  // solver.sigma_max.
  std::optional<double> curve_sigma_max;
};

struct DpOptions {
  std::optional<double> sigma;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> d;
  std::optional<double> zeta;
  double sigma_l = 0.0;
  double sigma_s = 0.0;
  bool csv = false;
};

struct ValidateOptions {
  std::string suite;  // lemma1 | lemma2 | chi2 | scaling | oracle
  std::optional<int> trials;
  int samples = 100000;             // chi2
  double fine_step = 1e-3;          // oracle
  double utility_tolerance = 1e-6;  // oracle
};

int RunSolve(const GlobalOptions& global, const SolveOptions& options,
             std::ostream& out, std::ostream& err);
int RunSweep(const GlobalOptions& global, const SweepOptions& options,
             std::ostream& out, std::ostream& err);
int RunDp(const DpOptions& options, std::ostream& out, std::ostream& err);
int RunValidate(const GlobalOptions& global, const ValidateOptions& options,
                std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace obfugame::cli

#endif  // OBFUGAME_CLI_COMMANDS_H_
