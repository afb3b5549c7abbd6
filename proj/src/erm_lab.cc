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

#include "obfugame/erm_lab.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "obfugame/dp_mechanism.h"
#include "obfugame/gaussian_rng.h"

namespace obfugame {
namespace {

constexpr double kHoldsTolerance = 1e-9;
constexpr double kArmijo = 1e-4;

absl::Status CheckDims(const Classifier& f, const Dataset& data) {
  if (f.weights.size() != data.dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("classifier has ", f.weights.size(),
                     " weights but the data has ", data.dim(), " features"));
  }
  if (data.labels.size() != data.size()) {
    return absl::InvalidArgumentError("feature rows and labels differ");
  }
  if (data.size() < 1) return absl::InvalidArgumentError("empty dataset");
  return absl::OkStatus();
}

double Risk(const Eigen::VectorXd& f, const Dataset& data, double lambda,
            const LossSpec& loss) {
  const Eigen::VectorXd margins = data.labels.cwiseProduct(data.features * f);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    sum += loss.Value(margins[i]);
  }
  return 0.5 * lambda * f.squaredNorm() + sum / margins.size();
}

Eigen::VectorXd Gradient(const Eigen::VectorXd& f, const Dataset& data,
                         double lambda, const LossSpec& loss) {
  const Eigen::VectorXd margins = data.labels.cwiseProduct(data.features * f);
  Eigen::VectorXd weights(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    weights[i] = loss.Derivative(margins[i]) * data.labels[i];
  }
  return lambda * f + data.features.transpose() * weights / margins.size();
}

}  // namespace

double LossSpec::Value(double margin) const {
  // log(1 + e^-m) without overflow for large |m|.
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

double LossSpec::Derivative(double margin) const {
  if (margin > 0.0) {
    const double e = std::exp(-margin);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(margin));
}

BoundReport MakeBoundReport(std::string context, double lhs, double rhs) {
  BoundReport r;
  r.context = std::move(context);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.holds = lhs <= rhs + kHoldsTolerance;
  return r;
}

absl::StatusOr<Dataset> GenerateSynthetic(int n, const GeneratorParams& params,
                                          std::uint64_t seed) {
  if (n < 1 || params.dim < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n >= 1 and d >= 1, got n=", n, " d=", params.dim));
  }
  if (!std::isfinite(params.separation)) {
    return absl::InvalidArgumentError("separation must be finite");
  }
  GaussianRng rng(seed);
  const double offset =
      0.5 * params.separation / std::sqrt(static_cast<double>(params.dim));
  Dataset data;
  data.features.resize(n, params.dim);
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const int y = rng.Sign();
    data.labels[i] = y;
    for (int k = 0; k < params.dim; ++k) {
      data.features(i, k) = y * offset + rng.Normal();
    }
  }
  return data;
}

absl::StatusOr<double> EmpiricalRisk(const Classifier& f, const Dataset& data,
                                     double lambda, const LossSpec& loss) {
  if (absl::Status s = CheckDims(f, data); !s.ok()) return s;
  return Risk(f.weights, data, lambda, loss);
}

Eigen::VectorXd RiskGradient(const Classifier& f, const Dataset& data,
                             double lambda, const LossSpec& loss) {
  return Gradient(f.weights, data, lambda, loss);
}

absl::StatusOr<Classifier> TrainErm(const Dataset& data, double lambda,
                                    const LossSpec& loss,
                                    const TrainOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Lambda must be > 0 for a unique minimizer, got ", lambda));
  }
  if (!(options.tol > 0.0)) {
    return absl::InvalidArgumentError("tolerance must be > 0");
  }
  if (data.size() < 1 || data.labels.size() != data.size()) {
    return absl::InvalidArgumentError("dataset is empty or malformed");
  }
  if (!data.features.allFinite() || !data.labels.allFinite()) {
    return absl::InvalidArgumentError("dataset has non-finite entries");
  }

  const Eigen::MatrixXd gram =
      data.features.transpose() * data.features / data.size();
  const double top_eigen = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                               gram, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
  const double min_step =
      1.0 / (lambda + loss.curvature_bound * std::max(top_eigen, 0.0));

  Eigen::VectorXd f = Eigen::VectorXd::Zero(data.dim());
  double value = Risk(f, data, lambda, loss);
  Eigen::VectorXd grad = Gradient(f, data, lambda, loss);
  double step = min_step;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const double grad_sq = grad.squaredNorm();
    if (std::sqrt(grad_sq) <= options.tol) return Classifier{f};
    step *= 2.0;
    Eigen::VectorXd next;
    double next_value;
    while (true) {
      if (step <= min_step) step = min_step;
      next = f - step * grad;
      next_value = Risk(next, data, lambda, loss);
      if (step == min_step || next_value <= value - kArmijo * step * grad_sq) {
        break;
      }
      step *= 0.5;
    }
    f = std::move(next);
    value = next_value;
    grad = Gradient(f, data, lambda, loss);
  }
  return absl::InternalError(
      absl::StrCat("ERM did not converge in ", options.max_iterations,
                   " iterations; last gradient norm ", grad.norm()));
}

absl::StatusOr<PerturbedDataset> PerturbInputs(const Dataset& data,
                                               double sigma_l,
                                               std::span<const double> sigma_s,
                                               std::uint64_t seed) {
  if (sigma_s.size() != static_cast<std::size_t>(data.size())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "got ", sigma_s.size(), " user sigmas for ", data.size(), " rows"));
  }
  if (!(sigma_l >= 0.0) || !std::isfinite(sigma_l)) {
    return absl::InvalidArgumentError("sigma_L must be finite and >= 0");
  }
  for (double s : sigma_s) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError("sigma_S entries must be >= 0");
    }
  }
  GaussianRng rng(seed);
  const int n = data.size();
  const int d = data.dim();
  PerturbedDataset out;
  out.noise.resize(n, d);
  Eigen::VectorXd learner(d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) learner[k] = sigma_l * rng.Normal();
    for (int k = 0; k < d; ++k) {
      out.noise(i, k) = learner[k] + sigma_s[i] * rng.Normal();
    }
  }
  out.data.features = data.features + out.noise;
  out.data.labels = data.labels;
  return out;
}

BoundReport CheckClassifierGap(const Classifier& clean,
                               const Classifier& perturbed,
                               const Eigen::MatrixXd& noise, double lambda,
                               int n, double c) {
  const double lhs = (clean.weights - perturbed.weights).squaredNorm();
  const double nn = static_cast<double>(n);
  const double rhs = (1.0 + c * c * perturbed.weights.squaredNorm()) /
                     (nn * nn * lambda * lambda) * noise.squaredNorm();
  return MakeBoundReport("classifier_gap", lhs, rhs);
}

absl::StatusOr<BoundReport> CheckEmpiricalGap(const Classifier& f_d,
                                              const Classifier& f_dagger,
                                              const Dataset& data,
                                              double lambda,
                                              const LossSpec& loss, double c) {
  if (absl::Status s = CheckDims(f_d, data); !s.ok()) return s;
  if (absl::Status s = CheckDims(f_dagger, data); !s.ok()) return s;
  const double lhs = Risk(f_d.weights, data, lambda, loss) -
                     Risk(f_dagger.weights, data, lambda, loss);
  const double rhs = (f_d.weights - f_dagger.weights).squaredNorm() * (1.0 + c);
  return MakeBoundReport("empirical_gap", lhs, rhs);
}

absl::StatusOr<LossEstimate> ExpectedLossOnSample(const Classifier& f,
                                                  const Dataset& sample,
                                                  double lambda,
                                                  const LossSpec& loss) {
  if (absl::Status s = CheckDims(f, sample); !s.ok()) return s;
  const Eigen::VectorXd margins =
      sample.labels.cwiseProduct(sample.features * f.weights);
  const Eigen::Index m = margins.size();
  // Welford accumulation of the per-sample loss.
  double mean = 0.0;
  double m2 = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = loss.Value(margins[i]);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  LossEstimate est;
  est.samples = static_cast<int>(m);
  est.mean = mean + 0.5 * lambda * f.weights.squaredNorm();
  est.standard_error =
      m > 1
          ? std::sqrt(m2 / static_cast<double>(m - 1) / static_cast<double>(m))
          : 0.0;
  return est;
}

absl::StatusOr<LossEstimate> ExpectedLossEstimate(const Classifier& f,
                                                  const GeneratorParams& params,
                                                  double lambda,
                                                  const LossSpec& loss, int m,
                                                  std::uint64_t seed) {
  if (m < 1) return absl::InvalidArgumentError("need at least one sample");
  absl::StatusOr<Dataset> sample = GenerateSynthetic(m, params, seed);
  if (!sample.ok()) return sample.status();
  return ExpectedLossOnSample(f, *sample, lambda, loss);
}

double NoiseScale(double sigma_l, std::span<const double> sigma_s, int n) {
  double sum = 0.0;
  for (double s : sigma_s) sum += s * s;
  return sigma_l * sigma_l + sum / static_cast<double>(n);
}

double ExplicitAccuracyTerm(double f_d_norm_sq, double sigma_l,
                            std::span<const double> sigma_s, double zeta, int n,
                            double lambda, double c) {
  double noise = 0.0;
  for (double s : sigma_s) noise += zeta * (sigma_l * sigma_l + s * s);
  const double nn = static_cast<double>(n);
  return (2.0 + 2.0 * c * c * f_d_norm_sq) / (nn * nn * lambda * lambda) *
         noise * (1.0 + c);
}

absl::StatusOr<AccuracyBoundReport> AccuracyBound(
    std::span<const AccuracyTrial> trials, double zeta, double delta, int d,
    int n, double lambda, double c) {
  if (trials.empty()) return absl::InvalidArgumentError("no trials");
  if (n < 1 || !(lambda > 0.0)) {
    return absl::InvalidArgumentError("need n >= 1 and Lambda > 0");
  }
  absl::StatusOr<NormBoundReport> norm =
      NormBoundProbability(d, zeta, 0.0, 0.0, delta);
  if (!norm.ok()) return norm.status();

  const double count = static_cast<double>(trials.size());
  double gap_sum = 0.0;
  double gap_sq = 0.0;
  double explicit_sum = 0.0;
  double scale_sum = 0.0;
  for (const AccuracyTrial& t : trials) {
    gap_sum += t.loss_gap;
    gap_sq += t.loss_gap * t.loss_gap;
    explicit_sum += ExplicitAccuracyTerm(t.f_d_norm_sq, t.sigma_l, t.sigma_s,
                                         zeta, n, lambda, c);
    scale_sum += NoiseScale(t.sigma_l, t.sigma_s, n);
  }
  AccuracyBoundReport report;
  const double mean_gap = gap_sum / count;
  report.explicit_term = explicit_sum / count;
  report.big_o_magnitude =
      std::log(1.0 / delta) / (lambda * static_cast<double>(n));
  report.mean_noise_scale = scale_sum / count;
  report.success_probability = norm->combined_success;
  if (trials.size() > 1) {
    const double var =
        std::max(0.0, (gap_sq - count * mean_gap * mean_gap) / (count - 1.0));
    report.lhs_standard_error = std::sqrt(var / count);
  }
  report.bound = MakeBoundReport("accuracy_bound", mean_gap,
                                 report.explicit_term + report.big_o_magnitude);
  return report;
}

}  // namespace obfugame
