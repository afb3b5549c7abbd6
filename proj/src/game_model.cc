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

#include "obfugame/game_model.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "obfugame/status_macros.h"

namespace obfugame {
namespace {

bool IsFiniteNonNegative(double x) { return std::isfinite(x) && x >= 0.0; }

absl::Status CheckNonNegative(absl::string_view name, double value) {
  if (!IsFiniteNonNegative(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be finite and >= 0, got ", value));
  }
  return absl::OkStatus();
}

absl::Status CheckPositive(absl::string_view name, double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be finite and > 0, got ", value));
  }
  return absl::OkStatus();
}

absl::Status CheckFinite(absl::string_view name, double value) {
  if (!std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be finite, got ", value));
  }
  return absl::OkStatus();
}

}  // namespace

namespace internal {

double SumOfSquares(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

double AccuracyGap(double sigma_l_sq, double sum_sigma_s_sq, double weight,
                   double regularizer, int population_size) {
  const double n = static_cast<double>(population_size);
  return weight / (n * regularizer * regularizer) *
         (sigma_l_sq + sum_sigma_s_sq / n);
}

double PrivacyLoss(double max_loss, double rate, double sigma_l,
                   double sigma_s) {
  return max_loss / (1.0 + rate * std::hypot(sigma_l, sigma_s));
}

}  // namespace internal

absl::Status ValidateConfig(const GameConfig& config) {
  const LearnerParams& l = config.learner;
  OBFUGAME_RETURN_IF_ERROR(CheckFinite("learner.G_bar", l.baseline_gain));
  OBFUGAME_RETURN_IF_ERROR(
      CheckNonNegative("learner.gamma", l.accuracy_weight));
  OBFUGAME_RETURN_IF_ERROR(
      CheckNonNegative("learner.N_bar", l.perturbation_cost));
  OBFUGAME_RETURN_IF_ERROR(CheckPositive("learner.Lambda", l.regularizer));
  if (l.population_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("learner.N must be >= 1, got ", l.population_size));
  }
  if (config.users.size() != static_cast<std::size_t>(l.population_size)) {
    return absl::InvalidArgumentError(
        absl::StrCat("learner.N is ", l.population_size, " but ",
                     config.users.size(), " users are configured"));
  }
  for (std::size_t i = 0; i < config.users.size(); ++i) {
    const UserParams& u = config.users[i];
    const std::string prefix = absl::StrCat("users[", i, "].");
    OBFUGAME_RETURN_IF_ERROR(CheckFinite(prefix + "G_bar", u.baseline_gain));
    OBFUGAME_RETURN_IF_ERROR(
        CheckNonNegative(prefix + "gamma", u.accuracy_weight));
    OBFUGAME_RETURN_IF_ERROR(
        CheckNonNegative(prefix + "P_bar", u.max_privacy_loss));
    OBFUGAME_RETURN_IF_ERROR(CheckPositive(prefix + "rho", u.privacy_rate));
    OBFUGAME_RETURN_IF_ERROR(
        CheckNonNegative(prefix + "N_bar", u.perturbation_cost));
    if (u.accuracy_weight == 0.0 && u.max_privacy_loss > 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          prefix, "gamma is 0 while ", prefix,
          "P_bar > 0: the user's privacy gain never saturates, so no finite "
          "best response exists"));
    }
  }
  if (!(config.dp_delta > 0.0 && config.dp_delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("dp.delta must lie in (0, 1), got ", config.dp_delta));
  }
  if (config.data_dim < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("dp.d must be >= 1, got ", config.data_dim));
  }
  const SolverSettings& s = config.solver;
  OBFUGAME_RETURN_IF_ERROR(CheckPositive("solver.sigma_max", s.sigma_max));
  OBFUGAME_RETURN_IF_ERROR(CheckPositive("solver.grid_step", s.grid_step));
  if (s.grid_step >= s.sigma_max) {
    return absl::InvalidArgumentError(absl::StrCat(
        "solver.grid_step (", s.grid_step,
        ") must be smaller than solver.sigma_max (", s.sigma_max, ")"));
  }
  OBFUGAME_RETURN_IF_ERROR(CheckPositive("solver.tol", s.root_tol));
  OBFUGAME_RETURN_IF_ERROR(
      CheckNonNegative("solver.tie_epsilon", s.tie_epsilon));
  return absl::OkStatus();
}

absl::Status ValidateProfile(const GameConfig& config,
                             const StrategyProfile& profile) {
  if (profile.sigma_s.size() != config.users.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "profile has ", profile.sigma_s.size(),
        " user strategies but the game has ", config.users.size(), " users"));
  }
  if (!IsFiniteNonNegative(profile.sigma_l)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma_L must be finite and >= 0, got ", profile.sigma_l));
  }
  for (std::size_t i = 0; i < profile.sigma_s.size(); ++i) {
    if (!IsFiniteNonNegative(profile.sigma_s[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("sigma_S[", i, "] must be finite and >= 0, got ",
                       profile.sigma_s[i]));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> AccuracyGapTerm(double sigma_l,
                                       std::span<const double> sigma_s,
                                       double weight, double regularizer,
                                       int population_size) {
  if (!IsFiniteNonNegative(sigma_l) || !IsFiniteNonNegative(weight)) {
    return absl::OutOfRangeError(
        "accuracy term needs finite, nonnegative sigma_L and weight");
  }
  for (double s : sigma_s) {
    if (!IsFiniteNonNegative(s)) {
      return absl::OutOfRangeError(
          absl::StrCat("accuracy term got invalid sigma_S ", s));
    }
  }
  if (!std::isfinite(regularizer) || regularizer <= 0.0) {
    return absl::OutOfRangeError(
        absl::StrCat("Lambda must be finite and > 0, got ", regularizer));
  }
  if (population_size < 1 ||
      sigma_s.size() != static_cast<std::size_t>(population_size)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", population_size, " user sigmas, got ", sigma_s.size()));
  }
  return internal::AccuracyGap(sigma_l * sigma_l,
                               internal::SumOfSquares(sigma_s), weight,
                               regularizer, population_size);
}

absl::StatusOr<double> PrivacyLossTerm(double max_loss, double rate,
                                       double sigma_l, double sigma_s) {
  if (!IsFiniteNonNegative(max_loss) || !IsFiniteNonNegative(sigma_l) ||
      !IsFiniteNonNegative(sigma_s) || !std::isfinite(rate) || rate <= 0.0) {
    return absl::OutOfRangeError(absl::StrCat(
        "privacy term needs P_bar >= 0, rho > 0, sigma >= 0; got P_bar=",
        max_loss, " rho=", rate, " sigma_L=", sigma_l, " sigma_S=", sigma_s));
  }
  return internal::PrivacyLoss(max_loss, rate, sigma_l, sigma_s);
}

absl::StatusOr<double> PerturbationCostTerm(double cost, double sigma) {
  if (!IsFiniteNonNegative(cost) || !IsFiniteNonNegative(sigma)) {
    return absl::OutOfRangeError(absl::StrCat(
        "perturbation cost needs N_bar >= 0, sigma >= 0; got N_bar=", cost,
        " sigma=", sigma));
  }
  return internal::PerturbationCost(cost, sigma);
}

absl::StatusOr<double> UserUtility(const GameConfig& config, std::size_t i,
                                   const StrategyProfile& profile) {
  if (i >= config.users.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "user index ", i, " out of range for ", config.users.size(), " users"));
  }
  OBFUGAME_RETURN_IF_ERROR(ValidateProfile(config, profile));
  const UserParams& u = config.users[i];
  const double own = profile.sigma_s[i];
  return u.baseline_gain -
         internal::AccuracyGap(profile.sigma_l * profile.sigma_l,
                               internal::SumOfSquares(profile.sigma_s),
                               u.accuracy_weight, config.learner.regularizer,
                               config.learner.population_size) -
         internal::PrivacyLoss(u.max_privacy_loss, u.privacy_rate,
                               profile.sigma_l, own) -
         internal::PerturbationCost(u.perturbation_cost, own);
}

absl::StatusOr<double> LearnerUtility(const GameConfig& config,
                                      const StrategyProfile& profile) {
  OBFUGAME_RETURN_IF_ERROR(ValidateProfile(config, profile));
  const LearnerParams& l = config.learner;
  double privacy = 0.0;
  for (std::size_t i = 0; i < config.users.size(); ++i) {
    const UserParams& u = config.users[i];
    privacy += internal::PrivacyLoss(u.max_privacy_loss, u.privacy_rate,
                                     profile.sigma_l, profile.sigma_s[i]);
  }
  privacy /= static_cast<double>(config.users.size());
  return l.baseline_gain -
         internal::AccuracyGap(profile.sigma_l * profile.sigma_l,
                               internal::SumOfSquares(profile.sigma_s),
                               l.accuracy_weight, l.regularizer,
                               l.population_size) -
         privacy -
         internal::PerturbationCost(l.perturbation_cost, profile.sigma_l);
}

}  // namespace obfugame
