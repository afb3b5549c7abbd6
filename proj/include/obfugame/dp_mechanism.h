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

// Gaussian mechanism privacy accounting and the chi-square bound on the
// squared norm of the injected noise.
//
// The privacy level uses the displayed form eps = 2 sqrt(2 ln(1.25 / delta))
// / sigma, where sigma is the total standard deviation sqrt(sigma_L^2 +
// sigma_S^2) seen by the learner. The L2 sensitivity of the released data is
// folded into the constant 2, i.e. features are taken to have sensitivity 1.

#ifndef OBFUGAME_DP_MECHANISM_H_
#define OBFUGAME_DP_MECHANISM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "obfugame/gaussian_rng.h"

namespace obfugame {

struct DpGuarantee {
  double epsilon = 0.0;
  double delta = 0.0;
  double total_sigma = 0.0;
  // The guarantee is only established for epsilon in (0, 1). The formula is
  // still evaluated outside that range and this flag is raised.
  bool outside_guaranteed_range = false;
};

struct NormBoundReport {
  int dimension = 1;
  double zeta = 0.0;
  // P{ ||u||^2 <= zeta * (sigma_L^2 + sigma_S^2) } = P(d/2, zeta/2).
  double probability = 0.0;
  // The threshold zeta * (sigma_L^2 + sigma_S^2) itself.
  double norm_sq_bound = 0.0;
  // 1 - delta * (1 - probability): both bounds fail only together, with the
  // failure events treated as independent.
  double combined_success = 0.0;
  // max(0, 1 - delta - (1 - probability)): union-bound alternative, reported
  // for comparison only.
  double union_bound_success = 0.0;
};

double TotalSigma(double sigma_l, double sigma_s);

// Fails with OutOfRange unless 0 < delta < 1.25 and total_sigma >= 0.
// total_sigma == 0 gives epsilon = +inf with the range flag set.
absl::StatusOr<DpGuarantee> EpsilonFromSigma(double total_sigma, double delta);

// Exact inverse of EpsilonFromSigma. Fails unless epsilon > 0 and
// 0 < delta < 1.25.
absl::StatusOr<double> SigmaFromEpsilon(double epsilon, double delta);

// Adds independent N(0, sigma^2) noise to every component. sigma == 0 returns
// the input unchanged and consumes no randomness.
absl::StatusOr<std::vector<double>> GaussianPerturb(
    std::span<const double> values, double sigma, std::uint64_t seed);
absl::StatusOr<std::vector<double>> GaussianPerturb(
    std::span<const double> values, double sigma, GaussianRng& rng);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a). Uses
// the power series for x < a + 1 and a Lentz continued fraction for the
// complement otherwise.
absl::StatusOr<double> RegularizedLowerGamma(double a, double x);

// CDF of a chi-square variable with d degrees of freedom at zeta.
absl::StatusOr<double> ChiSquareCdf(int d, double zeta);

absl::StatusOr<NormBoundReport> NormBoundProbability(int d, double zeta,
                                                     double sigma_l,
                                                     double sigma_s,
                                                     double delta);

}  // namespace obfugame

#endif  // OBFUGAME_DP_MECHANISM_H_
