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

#include "obfugame/dp_mechanism.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace obfugame {
namespace {

constexpr double kDeltaCeiling = 1.25;
constexpr int kMaxIterations = 100000;
constexpr double kRelEps = 1e-16;
constexpr double kTiny = 1e-300;

absl::Status CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < kDeltaCeiling)) {
    return absl::OutOfRangeError(absl::StrCat(
        "delta must lie in (0, 1.25) for ln(1.25/delta) > 0, got ", delta));
  }
  return absl::OkStatus();
}

double NoiseConstant(double delta) {
  return 2.0 * std::sqrt(2.0 * std::log(kDeltaCeiling / delta));
}

// x^a e^-x / Gamma(a), computed in log space.
double PrefactorLog(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

double LowerSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kRelEps) break;
  }
  return sum * std::exp(PrefactorLog(a, x));
}

// Q(a, x) by the modified Lentz method.
double UpperContinuedFraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kRelEps) break;
  }
  return std::exp(PrefactorLog(a, x)) * h;
}

}  // namespace

double TotalSigma(double sigma_l, double sigma_s) {
  return std::hypot(sigma_l, sigma_s);
}

absl::StatusOr<DpGuarantee> EpsilonFromSigma(double total_sigma, double delta) {
  if (absl::Status s = CheckDelta(delta); !s.ok()) return s;
  if (!(total_sigma >= 0.0) || std::isnan(total_sigma)) {
    return absl::OutOfRangeError(
        absl::StrCat("sigma must be >= 0, got ", total_sigma));
  }
  DpGuarantee g;
  g.delta = delta;
  g.total_sigma = total_sigma;
  g.epsilon = total_sigma == 0.0 ? std::numeric_limits<double>::infinity()
                                 : NoiseConstant(delta) / total_sigma;
  g.outside_guaranteed_range = !(g.epsilon > 0.0 && g.epsilon < 1.0);
  return g;
}

absl::StatusOr<double> SigmaFromEpsilon(double epsilon, double delta) {
  if (absl::Status s = CheckDelta(delta); !s.ok()) return s;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::OutOfRangeError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  return NoiseConstant(delta) / epsilon;
}

absl::StatusOr<std::vector<double>> GaussianPerturb(
    std::span<const double> values, double sigma, std::uint64_t seed) {
  GaussianRng rng(seed);
  return GaussianPerturb(values, sigma, rng);
}

absl::StatusOr<std::vector<double>> GaussianPerturb(
    std::span<const double> values, double sigma, GaussianRng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be finite and >= 0, got ", sigma));
  }
  std::vector<double> out(values.begin(), values.end());
  if (sigma == 0.0) return out;
  for (double& v : out) v += sigma * rng.Normal();
  return out;
}

absl::StatusOr<double> RegularizedLowerGamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    return absl::OutOfRangeError(absl::StrCat("shape must be > 0, got ", a));
  }
  if (!(x >= 0.0) || std::isnan(x)) {
    return absl::OutOfRangeError(absl::StrCat("x must be >= 0, got ", x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double p =
      x < a + 1.0 ? LowerSeries(a, x) : 1.0 - UpperContinuedFraction(a, x);
  return std::clamp(p, 0.0, 1.0);
}

absl::StatusOr<double> ChiSquareCdf(int d, double zeta) {
  if (d < 1) {
    return absl::OutOfRangeError(
        absl::StrCat("degrees of freedom must be >= 1, got ", d));
  }
  if (!(zeta >= 0.0) || std::isnan(zeta)) {
    return absl::OutOfRangeError(absl::StrCat("zeta must be >= 0, got ", zeta));
  }
  return RegularizedLowerGamma(0.5 * d, 0.5 * zeta);
}

absl::StatusOr<NormBoundReport> NormBoundProbability(int d, double zeta,
                                                     double sigma_l,
                                                     double sigma_s,
                                                     double delta) {
  if (!(sigma_l >= 0.0) || !(sigma_s >= 0.0) || !std::isfinite(sigma_l) ||
      !std::isfinite(sigma_s)) {
    return absl::OutOfRangeError("sigma_L and sigma_S must be finite and >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  absl::StatusOr<double> p = ChiSquareCdf(d, zeta);
  if (!p.ok()) return p.status();
  NormBoundReport report;
  report.dimension = d;
  report.zeta = zeta;
  report.probability = *p;
  report.norm_sq_bound = zeta * (sigma_l * sigma_l + sigma_s * sigma_s);
  report.combined_success = 1.0 - delta * (1.0 - *p);
  report.union_bound_success = std::max(0.0, 1.0 - delta - (1.0 - *p));
  return report;
}

}  // namespace obfugame
