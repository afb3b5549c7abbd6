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

// Parameters and utility functions of the learner/user obfuscation game.
//
// A learner L announces a Gaussian perturbation level sigma_L that is applied
// to every submitted data point. Each of N users then picks an additional
// perturbation level sigma_S[i]. Utilities combine an accuracy penalty that
// grows with the total injected variance, a privacy loss that decays with the
// user's effective noise sqrt(sigma_L^2 + sigma_S[i]^2), and a flat cost paid
// by anyone who perturbs at all.

#ifndef OBFUGAME_GAME_MODEL_H_
#define OBFUGAME_GAME_MODEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace obfugame {

struct LearnerParams {
  double baseline_gain = 0.0;      // G_bar_L
  double accuracy_weight = 0.0;    // gamma_L
  double perturbation_cost = 0.0;  // N_bar_L
  double regularizer = 1.0;        // Lambda, > 0
  int population_size = 1;         // N, also the ERM sample count n
};

struct UserParams {
  double baseline_gain = 0.0;      // G_bar_S
  double accuracy_weight = 0.0;    // gamma_S
  double max_privacy_loss = 0.0;   // P_bar_S
  double privacy_rate = 1.0;       // rho_S, > 0
  double perturbation_cost = 0.0;  // N_bar_S
};

struct SolverSettings {
  double sigma_max = 50.0;
  double grid_step = 0.05;
  double root_tol = 1e-9;
  double tie_epsilon = 1e-9;
};

struct GameConfig {
  LearnerParams learner;
  std::vector<UserParams> users;
  double dp_delta = 0.05;
  int data_dim = 1;
  SolverSettings solver;
};

struct StrategyProfile {
  double sigma_l = 0.0;
  std::vector<double> sigma_s;
};

// Checks every sign and range constraint, including users.size() == N and the
// rejection of gamma_S == 0 with P_bar_S > 0 (no finite best response).
absl::Status ValidateConfig(const GameConfig& config);

absl::Status ValidateProfile(const GameConfig& config,
                             const StrategyProfile& profile);

// (gamma / (N Lambda^2)) * (sigma_L^2 + (1/N) * sum_i sigma_S[i]^2).
// `sigma_s` must hold exactly `population_size` entries.
absl::StatusOr<double> AccuracyGapTerm(double sigma_l,
                                       std::span<const double> sigma_s,
                                       double weight, double regularizer,
                                       int population_size);

// P_bar / (1 + rho * sqrt(sigma_L^2 + sigma_S^2)).
absl::StatusOr<double> PrivacyLossTerm(double max_loss, double rate,
                                       double sigma_l, double sigma_s);

// N_bar if sigma > 0, else 0. Any positive sigma pays the full cost.
absl::StatusOr<double> PerturbationCostTerm(double cost, double sigma);

absl::StatusOr<double> UserUtility(const GameConfig& config, std::size_t i,
                                   const StrategyProfile& profile);

// The privacy term is the average of the users' privacy losses.
absl::StatusOr<double> LearnerUtility(const GameConfig& config,
                                      const StrategyProfile& profile);

namespace internal {

// Unchecked kernels shared by the public functions and the solver hot loops.
// Callers guarantee finite, in-range arguments.
double SumOfSquares(std::span<const double> values);
double AccuracyGap(double sigma_l_sq, double sum_sigma_s_sq, double weight,
                   double regularizer, int population_size);
double PrivacyLoss(double max_loss, double rate, double sigma_l,
                   double sigma_s);
inline double PerturbationCost(double cost, double sigma) {
  return sigma > 0.0 ? cost : 0.0;
}

}  // namespace internal
}  // namespace obfugame

#endif  // OBFUGAME_GAME_MODEL_H_
