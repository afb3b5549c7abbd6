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

// Regularized logistic ERM on clean and input-perturbed synthetic data, plus
// the empirical checks of the classifier-gap and empirical-loss-gap bounds
// that underlie the accuracy term of the game.

#ifndef OBFUGAME_ERM_LAB_H_
#define OBFUGAME_ERM_LAB_H_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace obfugame {

// Row i of `features` is x_i; labels are +1 or -1.
struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

struct Classifier {
  Eigen::VectorXd weights;
};

enum class LossKind { kLogistic };

// Loss of a margin m = y * f^T x. The logistic loss log(1 + e^-m) has
// |l'| <= 1 and 0 <= l'' <= 1/4.
struct LossSpec {
  LossKind kind = LossKind::kLogistic;
  double curvature_bound = 0.25;
  double derivative_bound = 1.0;

  static LossSpec Logistic() { return LossSpec{}; }

  double Value(double margin) const;
  double Derivative(double margin) const;
};

struct BoundReport {
  std::string context;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = false;  // lhs <= rhs + 1e-9
};

BoundReport MakeBoundReport(std::string context, double lhs, double rhs);

// Class-conditional clusters N(+-(separation/2) e, I) with e the normalized
// all-ones direction and equiprobable labels.
struct GeneratorParams {
  int dim = 1;
  double separation = 0.0;
};

absl::StatusOr<Dataset> GenerateSynthetic(int n, const GeneratorParams& params,
                                          std::uint64_t seed);

// J(f, D) = (Lambda / 2) ||f||^2 + (1/n) sum_i l(y_i f^T x_i).
absl::StatusOr<double> EmpiricalRisk(const Classifier& f, const Dataset& data,
                                     double lambda, const LossSpec& loss);

struct TrainOptions {
  double tol = 1e-8;  // on the gradient norm of J
  int max_iterations = 200000;
};

// Minimizes J(f, D) by gradient descent with Armijo backtracking, starting
// from f = 0. The step never drops below 1 / L for the smoothness constant
// L = Lambda + c * lambda_max(X^T X / n), where descent is guaranteed.
// Fails with Internal (message carries the last gradient norm) if the budget
// runs out.
absl::StatusOr<Classifier> TrainErm(const Dataset& data, double lambda,
                                    const LossSpec& loss,
                                    const TrainOptions& options = {});

// Gradient of J at f; exposed for convergence checks.
Eigen::VectorXd RiskGradient(const Classifier& f, const Dataset& data,
                             double lambda, const LossSpec& loss);

struct PerturbedDataset {
  Dataset data;
  // Row i is u_i = v_i + w_i, the realized noise added to x_i.
  Eigen::MatrixXd noise;
};

// x~_i = x_i + w_i + v_i with w_i ~ N(0, sigma_L^2 I) and v_i ~ N(0,
// sigma_S[i]^2 I). For each row the d learner draws come first, then the d
// user draws; draws are taken even for zero sigmas so that the stream does
// not depend on the noise levels.
absl::StatusOr<PerturbedDataset> PerturbInputs(const Dataset& data,
                                               double sigma_l,
                                               std::span<const double> sigma_s,
                                               std::uint64_t seed);

// ||f_clean - f_pert||^2 <= (1 + c^2 ||f_pert||^2) / (n^2 Lambda^2)
//                           * sum_i ||u_i||^2.
BoundReport CheckClassifierGap(const Classifier& clean,
                               const Classifier& perturbed,
                               const Eigen::MatrixXd& noise, double lambda,
                               int n, double c);

// J(f_d, D) - J(f_dagger, D) <= ||f_d - f_dagger||^2 (1 + c) on the clean
// database D, where f_dagger minimizes J(., D).
absl::StatusOr<BoundReport> CheckEmpiricalGap(const Classifier& f_d,
                                              const Classifier& f_dagger,
                                              const Dataset& data,
                                              double lambda,
                                              const LossSpec& loss, double c);

struct LossEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};

// Monte Carlo estimate of E[l(y f^T x)] + (Lambda / 2) ||f||^2 over `m`
// fresh draws from the generator.
absl::StatusOr<LossEstimate> ExpectedLossEstimate(const Classifier& f,
                                                  const GeneratorParams& params,
                                                  double lambda,
                                                  const LossSpec& loss, int m,
                                                  std::uint64_t seed);

// Same estimate on a fixed evaluation sample. Reusing one sample for several
// classifiers gives common-random-number differences.
absl::StatusOr<LossEstimate> ExpectedLossOnSample(const Classifier& f,
                                                  const Dataset& sample,
                                                  double lambda,
                                                  const LossSpec& loss);

// sigma_L^2 + (1/n) sum_i sigma_S[i]^2.
double NoiseScale(double sigma_l, std::span<const double> sigma_s, int n);

// (2 + 2 c^2 ||f_d||^2) / (n^2 Lambda^2) * sum_i zeta (sigma_L^2 +
// sigma_S[i]^2) (1 + c). Homogeneous of degree 2 in the sigmas.
double ExplicitAccuracyTerm(double f_d_norm_sq, double sigma_l,
                            std::span<const double> sigma_s, double zeta, int n,
                            double lambda, double c);

struct AccuracyTrial {
  double sigma_l = 0.0;
  std::vector<double> sigma_s;
  double f_d_norm_sq = 0.0;
  double loss_gap = 0.0;  // estimate of J^(f_d) - J^(f*)
};

struct AccuracyBoundReport {
  // lhs: mean loss gap; rhs: mean explicit term plus the O(.) magnitude
  // taken with unit constant. `bound.holds` is informational only since the
  // constant hidden in the O(.) term is unknown.
  BoundReport bound;
  double explicit_term = 0.0;
  double big_o_magnitude = 0.0;  // log(1/delta) / (Lambda n)
  double lhs_standard_error = 0.0;
  double mean_noise_scale = 0.0;
  double success_probability = 0.0;  // 1 - delta (1 - P(d/2, zeta/2))
};

absl::StatusOr<AccuracyBoundReport> AccuracyBound(
    std::span<const AccuracyTrial> trials, double zeta, double delta, int d,
    int n, double lambda, double c);

}  // namespace obfugame

#endif  // OBFUGAME_ERM_LAB_H_
