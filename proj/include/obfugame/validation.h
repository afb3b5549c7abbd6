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

// Randomized property suites behind `obfugame validate` and the acceptance
// tests. Every suite is deterministic given its seed.

#ifndef OBFUGAME_VALIDATION_H_
#define OBFUGAME_VALIDATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "obfugame/erm_lab.h"
#include "obfugame/game_model.h"

namespace obfugame {

// ---- classifier-gap and empirical-gap trials ----

struct LemmaTrialSpec {
  int n = 200;
  int d = 5;
  double separation = 4.0;
  double lambda = 0.1;
  double tol = 1e-8;
};

struct LemmaTrial {
  std::uint64_t seed = 0;
  int n = 0;
  int d = 0;
  double sigma_l = 0.0;
  std::vector<double> sigma_s;
  BoundReport classifier_gap;
  BoundReport empirical_gap;
};

// Draws sigma_L and each sigma_S[i] from a mixed set of levels (including
// zero), trains on clean and perturbed data and evaluates both bounds.
absl::StatusOr<LemmaTrial> RunLemmaTrial(const LemmaTrialSpec& spec,
                                         std::uint64_t seed);

// ---- chi-square norm bound ----

struct ChiSquareCheck {
  int d = 0;
  double zeta = 0.0;
  double empirical = 0.0;
  double cdf = 0.0;
  double abs_error = 0.0;
  bool passed = false;
};

struct ChiSquareSuiteSpec {
  std::vector<int> dims = {1, 2, 5, 10};
  // zeta = d * multiplier.
  std::vector<double> zeta_multipliers = {0.25, 0.5, 1.0, 1.5, 2.5};
  int samples = 100000;
  double sigma_l = 1.5;
  double sigma_s = 2.0;
  double tolerance = 0.01;
};

// Empirical P{ ||v + w||^2 <= zeta (sigma_L^2 + sigma_S^2) } against the
// chi-square CDF.
absl::StatusOr<std::vector<ChiSquareCheck>> RunChiSquareSuite(
    const ChiSquareSuiteSpec& spec, std::uint64_t seed);

// ---- accuracy-loss scaling ----

struct ScalingSpec {
  int n = 200;
  int d = 5;
  double separation = 4.0;
  double lambda = 0.1;
  int points = 10;
  int trials_per_point = 50;
  int eval_samples = 20000;
  int reference_samples = 100000;
  double max_sigma_l = 2.0;
  double max_user_sigma = 3.0;
  double zeta = 10.0;
  double delta = 0.05;
};

struct ScalingPoint {
  double sigma_l = 0.0;
  double noise_scale = 0.0;  // sigma_L^2 + (1/n) sum sigma_S^2
  double mean_gap = 0.0;     // mean of J^(f_d) - J^(f*)
  double standard_error = 0.0;
  double explicit_term = 0.0;
  double big_o_magnitude = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  double spearman = 0.0;
};

// Sweeps a common multiplier on (sigma_L, sigma_S) from 0 up to the
// configured maxima. f* is approximated by ERM on `reference_samples` clean
// draws; all expected losses share one evaluation sample.
absl::StatusOr<ScalingResult> RunScalingSuite(const ScalingSpec& spec,
                                              std::uint64_t seed);

// Spearman rank correlation with average ranks for ties.
double SpearmanCorrelation(std::span<const double> x,
                           std::span<const double> y);

// ---- solver vs. brute force ----

// 1 to 3 users with desired effective noise inside [0.3, 2.4] and sigma_max
// 3, so every threshold lies in range and the brute-force grid stays small.
GameConfig RandomSmallConfig(std::uint64_t seed);

struct OracleComparison {
  std::uint64_t seed = 0;
  int users = 0;
  double solver_sigma_l = 0.0;
  double oracle_sigma_l = 0.0;
  double solver_utility = 0.0;
  double oracle_utility = 0.0;
  bool sigma_ok = false;
  bool utility_ok = false;
};

absl::StatusOr<OracleComparison> CompareWithOracle(const GameConfig& config,
                                                   std::uint64_t seed,
                                                   double fine_step,
                                                   double utility_tolerance);

}  // namespace obfugame

#endif  // OBFUGAME_VALIDATION_H_
