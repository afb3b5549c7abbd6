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

#include "obfugame/validation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "obfugame/dp_mechanism.h"
#include "obfugame/gaussian_rng.h"
#include "obfugame/response_solver.h"
#include "obfugame/status_macros.h"

namespace obfugame {
namespace {

constexpr double kSigmaLevels[] = {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0};

double PickLevel(GaussianRng& rng) {
  constexpr std::size_t kCount = std::size(kSigmaLevels);
  const auto index =
      std::min(kCount - 1, static_cast<std::size_t>(rng.Uniform() * kCount));
  return kSigmaLevels[index];
}

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

absl::StatusOr<LemmaTrial> RunLemmaTrial(const LemmaTrialSpec& spec,
                                         std::uint64_t seed) {
  const LossSpec loss = LossSpec::Logistic();
  GaussianRng level_rng(DeriveSeed(seed, 0));
  LemmaTrial trial;
  trial.seed = seed;
  trial.n = spec.n;
  trial.d = spec.d;
  trial.sigma_l = PickLevel(level_rng);
  trial.sigma_s.resize(spec.n);
  for (double& s : trial.sigma_s) s = PickLevel(level_rng);

  OBFUGAME_ASSIGN_OR_RETURN(Dataset clean,
                            GenerateSynthetic(spec.n, {spec.d, spec.separation},
                                              DeriveSeed(seed, 1)));
  OBFUGAME_ASSIGN_OR_RETURN(
      PerturbedDataset perturbed,
      PerturbInputs(clean, trial.sigma_l, trial.sigma_s, DeriveSeed(seed, 2)));
  const TrainOptions options{spec.tol};
  OBFUGAME_ASSIGN_OR_RETURN(Classifier f_dagger,
                            TrainErm(clean, spec.lambda, loss, options));
  OBFUGAME_ASSIGN_OR_RETURN(
      Classifier f_d, TrainErm(perturbed.data, spec.lambda, loss, options));

  trial.classifier_gap =
      CheckClassifierGap(f_dagger, f_d, perturbed.noise, spec.lambda, spec.n,
                         loss.curvature_bound);
  OBFUGAME_ASSIGN_OR_RETURN(trial.empirical_gap,
                            CheckEmpiricalGap(f_d, f_dagger, clean, spec.lambda,
                                              loss, loss.curvature_bound));
  return trial;
}

absl::StatusOr<std::vector<ChiSquareCheck>> RunChiSquareSuite(
    const ChiSquareSuiteSpec& spec, std::uint64_t seed) {
  if (spec.samples < 1) return absl::InvalidArgumentError("need samples >= 1");
  GaussianRng rng(seed);
  const double variance =
      spec.sigma_l * spec.sigma_l + spec.sigma_s * spec.sigma_s;
  std::vector<ChiSquareCheck> checks;
  std::vector<double> norms(spec.samples);
  for (int d : spec.dims) {
    for (double& norm : norms) {
      norm = 0.0;
      for (int k = 0; k < d; ++k) {
        const double u =
            spec.sigma_l * rng.Normal() + spec.sigma_s * rng.Normal();
        norm += u * u;
      }
    }
    for (double multiplier : spec.zeta_multipliers) {
      ChiSquareCheck check;
      check.d = d;
      check.zeta = multiplier * d;
      const double bound = check.zeta * variance;
      const auto hits = std::count_if(norms.begin(), norms.end(),
                                      [bound](double v) { return v <= bound; });
      check.empirical = static_cast<double>(hits) / spec.samples;
      OBFUGAME_ASSIGN_OR_RETURN(check.cdf, ChiSquareCdf(d, check.zeta));
      check.abs_error = std::abs(check.empirical - check.cdf);
      check.passed = check.abs_error <= spec.tolerance;
      checks.push_back(check);
    }
  }
  return checks;
}

double SpearmanCorrelation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

absl::StatusOr<ScalingResult> RunScalingSuite(const ScalingSpec& spec,
                                              std::uint64_t seed) {
  if (spec.points < 2 || spec.trials_per_point < 1) {
    return absl::InvalidArgumentError("need >= 2 points and >= 1 trial");
  }
  const LossSpec loss = LossSpec::Logistic();
  const GeneratorParams generator{spec.d, spec.separation};

  OBFUGAME_ASSIGN_OR_RETURN(Dataset reference,
                            GenerateSynthetic(spec.reference_samples, generator,
                                              DeriveSeed(seed, 1)));
  OBFUGAME_ASSIGN_OR_RETURN(Classifier f_star,
                            TrainErm(reference, spec.lambda, loss));
  OBFUGAME_ASSIGN_OR_RETURN(
      Dataset eval,
      GenerateSynthetic(spec.eval_samples, generator, DeriveSeed(seed, 2)));
  OBFUGAME_ASSIGN_OR_RETURN(
      LossEstimate star, ExpectedLossOnSample(f_star, eval, spec.lambda, loss));

  GaussianRng base_rng(DeriveSeed(seed, 3));
  std::vector<double> base(spec.n);
  for (double& b : base) b = spec.max_user_sigma * base_rng.Uniform();

  ScalingResult result;
  std::vector<double> scales;
  std::vector<double> gaps;
  for (int p = 0; p < spec.points; ++p) {
    const double t = static_cast<double>(p) / (spec.points - 1);
    const double sigma_l = spec.max_sigma_l * t;
    std::vector<double> sigma_s(spec.n);
    for (int i = 0; i < spec.n; ++i) sigma_s[i] = base[i] * t;

    std::vector<AccuracyTrial> trials;
    for (int j = 0; j < spec.trials_per_point; ++j) {
      OBFUGAME_ASSIGN_OR_RETURN(
          Dataset clean,
          GenerateSynthetic(spec.n, generator, DeriveSeed(seed, 100 + j)));
      OBFUGAME_ASSIGN_OR_RETURN(
          PerturbedDataset perturbed,
          PerturbInputs(clean, sigma_l, sigma_s, DeriveSeed(seed, 100000 + j)));
      OBFUGAME_ASSIGN_OR_RETURN(Classifier f_d,
                                TrainErm(perturbed.data, spec.lambda, loss));
      OBFUGAME_ASSIGN_OR_RETURN(
          LossEstimate est, ExpectedLossOnSample(f_d, eval, spec.lambda, loss));
      trials.push_back(
          {sigma_l, sigma_s, f_d.weights.squaredNorm(), est.mean - star.mean});
    }
    OBFUGAME_ASSIGN_OR_RETURN(
        AccuracyBoundReport report,
        AccuracyBound(trials, spec.zeta, spec.delta, spec.d, spec.n,
                      spec.lambda, loss.curvature_bound));
    ScalingPoint point;
    point.sigma_l = sigma_l;
    point.noise_scale = NoiseScale(sigma_l, sigma_s, spec.n);
    point.mean_gap = report.bound.lhs;
    point.standard_error = report.lhs_standard_error;
    point.explicit_term = report.explicit_term;
    point.big_o_magnitude = report.big_o_magnitude;
    result.points.push_back(point);
    scales.push_back(point.noise_scale);
    gaps.push_back(point.mean_gap);
  }
  result.spearman = SpearmanCorrelation(scales, gaps);
  return result;
}

GameConfig RandomSmallConfig(std::uint64_t seed) {
  GaussianRng rng(DeriveSeed(seed, 7));
  GameConfig config;
  const int n = 1 + std::min(2, static_cast<int>(rng.Uniform() * 3.0));
  config.learner.population_size = n;
  config.learner.regularizer = 0.5 + rng.Uniform();
  config.learner.baseline_gain = 10.0;
  config.learner.accuracy_weight = 0.2 + 2.0 * rng.Uniform();
  config.learner.perturbation_cost = 0.5 * rng.Uniform();
  const double lambda = config.learner.regularizer;
  for (int i = 0; i < n; ++i) {
    UserParams u;
    u.baseline_gain = 5.0;
    u.max_privacy_loss = 1.0 + 4.0 * rng.Uniform();
    u.privacy_rate = 0.5 + 1.5 * rng.Uniform();
    const double s = 0.3 + 2.1 * rng.Uniform();
    const double rho = u.privacy_rate;
    u.accuracy_weight = u.max_privacy_loss * rho * n * n * lambda * lambda /
                        (2.0 * s * (1.0 + rho * s) * (1.0 + rho * s));
    // Gain from topping up to s at sigma_L = 0, before the flat cost.
    const double gain = u.max_privacy_loss -
                        u.max_privacy_loss / (1.0 + rho * s) -
                        u.accuracy_weight * s * s / (n * n * lambda * lambda);
    u.perturbation_cost = 1.2 * gain * rng.Uniform();
    config.users.push_back(u);
  }
  config.dp_delta = 0.05;
  config.data_dim = 5;
  config.solver.sigma_max = 3.0;
  config.solver.grid_step = 0.05;
  return config;
}

absl::StatusOr<OracleComparison> CompareWithOracle(const GameConfig& config,
                                                   std::uint64_t seed,
                                                   double fine_step,
                                                   double utility_tolerance) {
  OBFUGAME_ASSIGN_OR_RETURN(EquilibriumResult solved, StackelbergSolve(config));
  OBFUGAME_ASSIGN_OR_RETURN(EquilibriumResult oracle,
                            BruteForceEquilibrium(config, fine_step));
  OracleComparison c;
  c.seed = seed;
  c.users = static_cast<int>(config.users.size());
  c.solver_sigma_l = solved.sigma_l_star;
  c.oracle_sigma_l = oracle.sigma_l_star;
  c.solver_utility = solved.learner_utility;
  c.oracle_utility = oracle.learner_utility;
  c.sigma_ok =
      std::abs(c.solver_sigma_l - c.oracle_sigma_l) <= config.solver.grid_step;
  c.utility_ok =
      std::abs(c.solver_utility - c.oracle_utility) <= utility_tolerance;
  return c;
}

}  // namespace obfugame
