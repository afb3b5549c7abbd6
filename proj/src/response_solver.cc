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

#include "obfugame/response_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "obfugame/status_macros.h"

namespace obfugame {
namespace {

struct Candidate {
  double sigma_l;
  double value;
};

// Smallest sigma_L whose value is within `tie_epsilon` of the best one.
// `candidates` must be sorted by sigma_l.
Candidate PickLeaderChoice(const std::vector<Candidate>& candidates,
                           double tie_epsilon) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) best = std::max(best, c.value);
  for (const Candidate& c : candidates) {
    if (c.value >= best - tie_epsilon) return c;
  }
  return candidates.front();
}

template <typename F>
double GoldenSectionArgmax(F f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

std::size_t GridCount(double sigma_max, double step) {
  return static_cast<std::size_t>(std::floor(sigma_max / step + 1e-9)) + 1;
}

absl::StatusOr<EquilibriumResult> AssembleResult(const ResponseModel& model,
                                                 double sigma_l) {
  const GameConfig& config = model.config();
  EquilibriumResult result;
  result.sigma_l_star = sigma_l;
  result.sigma_s_star = model.BestResponses(sigma_l);
  const StrategyProfile profile{sigma_l, result.sigma_s_star};
  OBFUGAME_ASSIGN_OR_RETURN(result.learner_utility,
                            LearnerUtility(config, profile));
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    OBFUGAME_ASSIGN_OR_RETURN(double u, UserUtility(config, i, profile));
    result.user_utilities.push_back(u);
    result.per_user_thresholds.push_back(model.Threshold(i));
  }
  return result;
}

}  // namespace

const char* ThresholdKindName(DissuasionThreshold::Kind kind) {
  switch (kind) {
    case DissuasionThreshold::Kind::kFound:
      return "found";
    case DissuasionThreshold::Kind::kNeverPerturbs:
      return "never_perturbs";
    case DissuasionThreshold::Kind::kBeyondRange:
      return "beyond_range";
  }
  return "unknown";
}

absl::StatusOr<double> DesiredEffectiveNoise(const UserParams& user,
                                             const LearnerParams& learner,
                                             double root_tol) {
  if (!(root_tol > 0.0)) {
    return absl::InvalidArgumentError("root tolerance must be > 0");
  }
  if (!(user.privacy_rate > 0.0) || !(learner.regularizer > 0.0) ||
      user.max_privacy_loss < 0.0 || user.accuracy_weight < 0.0) {
    return absl::InvalidArgumentError(
        "need rho > 0, Lambda > 0, P_bar >= 0 and gamma >= 0");
  }
  if (user.max_privacy_loss == 0.0) return 0.0;
  if (user.accuracy_weight == 0.0) {
    return absl::FailedPreconditionError(
        "gamma_S is 0 with P_bar_S > 0: no finite optimum, the privacy gain "
        "never saturates against a zero accuracy cost");
  }
  const double rho = user.privacy_rate;
  const double n = static_cast<double>(learner.population_size);
  const double lambda = learner.regularizer;
  const double target = user.max_privacy_loss * rho * n * n * lambda * lambda /
                        (2.0 * user.accuracy_weight);
  // g(s) = s (1 + rho s)^2 dominates both s and rho^2 s^3.
  double lo = 0.0;
  double hi = std::min(target, std::cbrt(target / (rho * rho)));
  while (hi - lo > root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = mid * (1.0 + rho * mid) * (1.0 + rho * mid);
    if (g < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

absl::StatusOr<std::optional<double>> InteriorCandidate(
    double sigma_l, const UserParams& user, const LearnerParams& learner,
    double root_tol) {
  if (!std::isfinite(sigma_l) || sigma_l < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma_L must be finite and >= 0, got ", sigma_l));
  }
  OBFUGAME_ASSIGN_OR_RETURN(double s_star,
                            DesiredEffectiveNoise(user, learner, root_tol));
  if (sigma_l >= s_star) return std::optional<double>();
  const double sigma = std::sqrt(s_star * s_star - sigma_l * sigma_l);
  if (!(sigma > 0.0)) return std::optional<double>();
  return std::optional<double>(sigma);
}

absl::StatusOr<ResponseModel> ResponseModel::Create(const GameConfig& config) {
  OBFUGAME_RETURN_IF_ERROR(ValidateConfig(config));
  std::vector<double> target;
  target.reserve(config.users.size());
  for (const UserParams& user : config.users) {
    OBFUGAME_ASSIGN_OR_RETURN(
        double s,
        DesiredEffectiveNoise(user, config.learner, config.solver.root_tol));
    target.push_back(s);
  }
  return ResponseModel(config, std::move(target));
}

std::optional<double> ResponseModel::Interior(std::size_t i,
                                              double sigma_l) const {
  const double s_star = target_[i];
  if (sigma_l >= s_star) return std::nullopt;
  const double sigma = std::sqrt(s_star * s_star - sigma_l * sigma_l);
  if (!(sigma > 0.0)) return std::nullopt;
  // U_S^i is unimodal in sigma_S, so the best point of [0, sigma_max] sits
  // on the bound when the stationary point lies past it.
  return std::min(sigma, config_.solver.sigma_max);
}

std::optional<double> ResponseModel::PerturbationGain(std::size_t i,
                                                      double sigma_l) const {
  const std::optional<double> sigma = Interior(i, sigma_l);
  if (!sigma) return std::nullopt;
  const UserParams& u = config_.users[i];
  const LearnerParams& l = config_.learner;
  // Only the user's own terms differ between the two choices.
  const double accuracy_cost =
      internal::AccuracyGap(0.0, *sigma * *sigma, u.accuracy_weight,
                            l.regularizer, l.population_size);
  const double privacy_gain =
      internal::PrivacyLoss(u.max_privacy_loss, u.privacy_rate, sigma_l, 0.0) -
      internal::PrivacyLoss(u.max_privacy_loss, u.privacy_rate, sigma_l,
                            *sigma);
  return privacy_gain - accuracy_cost - u.perturbation_cost;
}

double ResponseModel::BestResponse(std::size_t i, double sigma_l) const {
  const std::optional<double> gain = PerturbationGain(i, sigma_l);
  if (gain && *gain > config_.solver.tie_epsilon) return *Interior(i, sigma_l);
  return 0.0;
}

std::vector<double> ResponseModel::BestResponses(double sigma_l) const {
  std::vector<double> out(num_users());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = BestResponse(i, sigma_l);
  return out;
}

DissuasionThreshold ResponseModel::Threshold(std::size_t i) const {
  const SolverSettings& solver = config_.solver;
  if (BestResponse(i, 0.0) == 0.0) {
    return {DissuasionThreshold::Kind::kNeverPerturbs, 0.0};
  }
  // The gain is strictly decreasing in sigma_L on [0, s*) and equals -N_bar
  // at s*, so the set where the user perturbs is an interval [0, t).
  double hi = std::min(target_[i], solver.sigma_max);
  if (BestResponse(i, hi) > 0.0) {
    return {DissuasionThreshold::Kind::kBeyondRange, solver.sigma_max};
  }
  double lo = 0.0;
  while (hi - lo > solver.root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (BestResponse(i, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {DissuasionThreshold::Kind::kFound, hi};
}

double ResponseModel::LeaderObjective(double sigma_l) const {
  const LearnerParams& l = config_.learner;
  double sum_sq = 0.0;
  double privacy = 0.0;
  for (std::size_t i = 0; i < num_users(); ++i) {
    const UserParams& u = config_.users[i];
    const double br = BestResponse(i, sigma_l);
    sum_sq += br * br;
    privacy +=
        internal::PrivacyLoss(u.max_privacy_loss, u.privacy_rate, sigma_l, br);
  }
  privacy /= static_cast<double>(num_users());
  return l.baseline_gain -
         internal::AccuracyGap(sigma_l * sigma_l, sum_sq, l.accuracy_weight,
                               l.regularizer, l.population_size) -
         privacy - internal::PerturbationCost(l.perturbation_cost, sigma_l);
}

absl::StatusOr<double> UserBestResponse(double sigma_l, std::size_t i,
                                        const GameConfig& config) {
  if (i >= config.users.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "user index ", i, " out of range for ", config.users.size(), " users"));
  }
  if (!std::isfinite(sigma_l) || sigma_l < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma_L must be finite and >= 0, got ", sigma_l));
  }
  OBFUGAME_ASSIGN_OR_RETURN(ResponseModel model, ResponseModel::Create(config));
  return model.BestResponse(i, sigma_l);
}

absl::StatusOr<DissuasionThreshold> ComputeDissuasionThreshold(
    std::size_t i, const GameConfig& config) {
  if (i >= config.users.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "user index ", i, " out of range for ", config.users.size(), " users"));
  }
  OBFUGAME_ASSIGN_OR_RETURN(ResponseModel model, ResponseModel::Create(config));
  return model.Threshold(i);
}

absl::StatusOr<double> LeaderObjective(double sigma_l,
                                       const GameConfig& config) {
  if (!std::isfinite(sigma_l) || sigma_l < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma_L must be finite and >= 0, got ", sigma_l));
  }
  OBFUGAME_ASSIGN_OR_RETURN(ResponseModel model, ResponseModel::Create(config));
  return model.LeaderObjective(sigma_l);
}

absl::StatusOr<BestResponseCurve> ComputeBestResponseCurve(
    std::size_t i, const GameConfig& config,
    std::span<const double> sigma_l_grid) {
  if (i >= config.users.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "user index ", i, " out of range for ", config.users.size(), " users"));
  }
  OBFUGAME_ASSIGN_OR_RETURN(ResponseModel model, ResponseModel::Create(config));
  BestResponseCurve curve;
  curve.sigma_l_grid.assign(sigma_l_grid.begin(), sigma_l_grid.end());
  for (double sigma_l : sigma_l_grid) {
    if (!std::isfinite(sigma_l) || sigma_l < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("sigma_L grid entry ", sigma_l, " is invalid"));
    }
    curve.br_values.push_back(model.BestResponse(i, sigma_l));
  }
  const DissuasionThreshold t = model.Threshold(i);
  if (t.kind != DissuasionThreshold::Kind::kBeyondRange)
    curve.threshold = t.sigma_l;
  return curve;
}

absl::StatusOr<EquilibriumResult> StackelbergSolve(const GameConfig& config) {
  OBFUGAME_ASSIGN_OR_RETURN(ResponseModel model, ResponseModel::Create(config));
  const SolverSettings& solver = config.solver;

  std::vector<double> points = {0.0};
  const std::size_t grid_count = GridCount(solver.sigma_max, solver.grid_step);
  for (std::size_t k = 1; k < grid_count; ++k) {
    points.push_back(static_cast<double>(k) * solver.grid_step);
  }
  points.push_back(solver.sigma_max);

  std::vector<double> breaks = {0.0, solver.sigma_max};
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    const DissuasionThreshold t = model.Threshold(i);
    if (t.kind != DissuasionThreshold::Kind::kFound) continue;
    for (double p : {t.sigma_l - solver.root_tol, t.sigma_l,
                     t.sigma_l + solver.root_tol}) {
      if (p >= 0.0 && p <= solver.sigma_max) points.push_back(p);
    }
    if (t.sigma_l > 0.0 && t.sigma_l < solver.sigma_max) {
      breaks.push_back(t.sigma_l);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Each piece [a, b) has a fixed set of perturbing users, so the objective
  // is smooth there. A threshold belongs to the piece on its right.
  auto objective = [&model](double s) { return model.LeaderObjective(s); };
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k] > 0.0 ? breaks[k] : solver.root_tol;
    const double hi = breaks[k + 1] - solver.root_tol;
    if (hi <= lo) continue;
    points.push_back(GoldenSectionArgmax(objective, lo, hi, solver.root_tol));
  }

  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Candidate> candidates;
  candidates.reserve(points.size());
  for (double p : points) {
    const double value = model.LeaderObjective(p);
    if (!std::isfinite(value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("leader objective is not finite at sigma_L = ", p,
                       "; check the configuration"));
    }
    candidates.push_back({p, value});
  }
  const Candidate choice = PickLeaderChoice(candidates, solver.tie_epsilon);
  return AssembleResult(model, choice.sigma_l);
}

absl::StatusOr<EquilibriumResult> BruteForceEquilibrium(
    const GameConfig& config, double fine_step, double max_evaluations) {
  OBFUGAME_RETURN_IF_ERROR(ValidateConfig(config));
  if (!std::isfinite(fine_step) || fine_step <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("fine_step must be > 0, got ", fine_step));
  }
  const SolverSettings& solver = config.solver;
  const std::size_t count = GridCount(solver.sigma_max, fine_step);
  const std::size_t num_users = config.users.size();
  const double evaluations = static_cast<double>(count) *
                             static_cast<double>(count) *
                             static_cast<double>(num_users);
  if (evaluations > max_evaluations) {
    return absl::ResourceExhaustedError(
        absl::StrCat("brute-force grid needs ", evaluations,
                     " utility evaluations (limit ", max_evaluations,
                     "); increase the fine step or lower solver.sigma_max"));
  }

  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = static_cast<double>(k) * fine_step;
  }

  // Every user's grid best response at one sigma_L. The other users are held
  // at zero while user i scans her own grid.
  std::vector<double> values(count);
  auto grid_responses =
      [&](double sigma_l) -> absl::StatusOr<std::vector<double>> {
    std::vector<double> responses(num_users, 0.0);
    StrategyProfile profile{sigma_l, std::vector<double>(num_users, 0.0)};
    for (std::size_t i = 0; i < num_users; ++i) {
      for (std::size_t k = 0; k < count; ++k) {
        profile.sigma_s[i] = grid[k];
        OBFUGAME_ASSIGN_OR_RETURN(values[k], UserUtility(config, i, profile));
      }
      profile.sigma_s[i] = 0.0;
      const double best = *std::max_element(values.begin(), values.end());
      for (std::size_t k = 0; k < count; ++k) {
        if (values[k] >= best - solver.tie_epsilon) {
          responses[i] = grid[k];
          break;
        }
      }
    }
    return responses;
  };

  std::vector<Candidate> leader;
  leader.reserve(count);
  for (double sigma_l : grid) {
    OBFUGAME_ASSIGN_OR_RETURN(std::vector<double> responses,
                              grid_responses(sigma_l));
    OBFUGAME_ASSIGN_OR_RETURN(
        double u, LearnerUtility(config, {sigma_l, std::move(responses)}));
    leader.push_back({sigma_l, u});
  }
  const Candidate choice = PickLeaderChoice(leader, solver.tie_epsilon);

  EquilibriumResult result;
  result.sigma_l_star = choice.sigma_l;
  result.learner_utility = choice.value;
  OBFUGAME_ASSIGN_OR_RETURN(result.sigma_s_star,
                            grid_responses(choice.sigma_l));
  const StrategyProfile profile{choice.sigma_l, result.sigma_s_star};
  OBFUGAME_ASSIGN_OR_RETURN(ResponseModel model, ResponseModel::Create(config));
  for (std::size_t i = 0; i < num_users; ++i) {
    OBFUGAME_ASSIGN_OR_RETURN(double u, UserUtility(config, i, profile));
    result.user_utilities.push_back(u);
    result.per_user_thresholds.push_back(model.Threshold(i));
  }
  return result;
}

}  // namespace obfugame
