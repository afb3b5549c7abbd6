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

// Follower best responses and the leader's equilibrium choice.
//
// A user's optimal perturbation does not depend on what the other users do:
// the other users only shift her accuracy penalty by a constant. On the
// interior branch the first-order condition fixes her effective noise
// s = sqrt(sigma_L^2 + sigma_S^2) at the unique root s* of
//
//   s * (1 + rho * s)^2 = P_bar * rho * N^2 * Lambda^2 / (2 * gamma),
//
// so she tops the learner's noise up to s*. Because perturbing costs a flat
// N_bar, she only does so while the gain beats the cost; past a dissuasion
// threshold in sigma_L her best response drops to exactly zero. The leader's
// objective is therefore piecewise smooth with jumps at those thresholds.

#ifndef OBFUGAME_RESPONSE_SOLVER_H_
#define OBFUGAME_RESPONSE_SOLVER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "obfugame/game_model.h"

namespace obfugame {

struct DissuasionThreshold {
  enum class Kind {
    kFound,          // sigma_l is the smallest leader noise with BR == 0
    kNeverPerturbs,  // BR is 0 for every sigma_L >= 0; sigma_l == 0
    kBeyondRange,    // BR is still positive at sigma_max; sigma_l == sigma_max
  };
  Kind kind = Kind::kNeverPerturbs;
  double sigma_l = 0.0;
};

const char* ThresholdKindName(DissuasionThreshold::Kind kind);

struct BestResponseCurve {
  std::vector<double> sigma_l_grid;
  std::vector<double> br_values;
  // Set when the response falls to zero inside [0, sigma_max].
  std::optional<double> threshold;
};

struct EquilibriumResult {
  double sigma_l_star = 0.0;
  std::vector<double> sigma_s_star;
  double learner_utility = 0.0;
  std::vector<double> user_utilities;
  std::vector<DissuasionThreshold> per_user_thresholds;
};

// Root s* of s(1 + rho s)^2 = P_bar rho N^2 Lambda^2 / (2 gamma), found by
// bisection to `root_tol`. Returns 0 when P_bar == 0. Fails with
// FailedPrecondition when gamma == 0 and P_bar > 0.
absl::StatusOr<double> DesiredEffectiveNoise(const UserParams& user,
                                             const LearnerParams& learner,
                                             double root_tol);

// Stationary point of the user's utility on sigma_S > 0, or nullopt when the
// learner's noise alone already reaches s*.
absl::StatusOr<std::optional<double>> InteriorCandidate(
    double sigma_l, const UserParams& user, const LearnerParams& learner,
    double root_tol);

// Caches each user's s* for a validated config so best responses, thresholds
// and the leader objective are cheap to evaluate repeatedly. Immutable after
// construction.
class ResponseModel {
 public:
  static absl::StatusOr<ResponseModel> Create(const GameConfig& config);

  const GameConfig& config() const { return config_; }
  std::size_t num_users() const { return config_.users.size(); }

  // s* for user i; 0 when the user has no privacy incentive.
  double desired_effective_noise(std::size_t i) const { return target_[i]; }

  // sqrt(s*^2 - sigma_L^2), capped at sigma_max, when sigma_L < s*; else
  // nullopt.
  std::optional<double> Interior(std::size_t i, double sigma_l) const;

  // U_S^i(interior) - U_S^i(0), or nullopt when there is no interior point.
  std::optional<double> PerturbationGain(std::size_t i, double sigma_l) const;

  // Interior value if its gain exceeds tie_epsilon, else exactly 0.
  double BestResponse(std::size_t i, double sigma_l) const;
  std::vector<double> BestResponses(double sigma_l) const;

  DissuasionThreshold Threshold(std::size_t i) const;

  // U_L(sigma_L, BR_S(sigma_L)).
  double LeaderObjective(double sigma_l) const;

 private:
  ResponseModel(GameConfig config, std::vector<double> target)
      : config_(std::move(config)), target_(std::move(target)) {}

  GameConfig config_;
  std::vector<double> target_;
};

absl::StatusOr<double> UserBestResponse(double sigma_l, std::size_t i,
                                        const GameConfig& config);

absl::StatusOr<DissuasionThreshold> ComputeDissuasionThreshold(
    std::size_t i, const GameConfig& config);

absl::StatusOr<double> LeaderObjective(double sigma_l,
                                       const GameConfig& config);

absl::StatusOr<BestResponseCurve> ComputeBestResponseCurve(
    std::size_t i, const GameConfig& config,
    std::span<const double> sigma_l_grid);

// Maximizes the leader objective over {0}, the sigma_L grid, each threshold
// and its +/- root_tol neighbours, and a golden-section refinement inside
// every smooth piece between thresholds. Ties within tie_epsilon go to the
// smaller sigma_L.
absl::StatusOr<EquilibriumResult> StackelbergSolve(const GameConfig& config);

// Verification oracle: exhaustive grid over sigma_L and, for each sigma_L,
// over every user's sigma_S, both at `fine_step` on [0, sigma_max]. Uses the
// same tie rules as StackelbergSolve. Fails with ResourceExhausted when the
// grid would need more than `max_evaluations` utility evaluations.
absl::StatusOr<EquilibriumResult> BruteForceEquilibrium(
    const GameConfig& config, double fine_step, double max_evaluations = 4e9);

}  // namespace obfugame

#endif  // OBFUGAME_RESPONSE_SOLVER_H_
