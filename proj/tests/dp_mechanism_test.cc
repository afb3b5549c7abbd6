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
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "obfugame/gaussian_rng.h"

namespace obfugame {
namespace {

TEST(EpsilonFromSigmaTest, UnitEpsilonAtTwoRootTwo) {
  const double delta = 1.25 * std::exp(-1.0);
  const DpGuarantee g = *EpsilonFromSigma(2.0 * std::sqrt(2.0), delta);
  EXPECT_NEAR(g.epsilon, 1.0, 1e-12);
  EXPECT_NEAR(*SigmaFromEpsilon(1.0, delta), 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(EpsilonFromSigmaTest, CalculatorValue) {
  // 2 sqrt(2 ln 25) / 5.0745, evaluated in long double.
  const long double expected =
      2.0L * std::sqrt(2.0L * std::log(25.0L)) / 5.0745L;
  const DpGuarantee g = *EpsilonFromSigma(5.0745, 0.05);
  EXPECT_NEAR(g.epsilon, static_cast<double>(expected), 1e-14);
  EXPECT_NEAR(g.epsilon, 1.0, 5e-5);
  EXPECT_TRUE(g.outside_guaranteed_range == (g.epsilon >= 1.0));
}

TEST(EpsilonFromSigmaTest, RangeFlagAndZeroNoise) {
  EXPECT_FALSE(EpsilonFromSigma(20.0, 0.05)->outside_guaranteed_range);
  EXPECT_TRUE(EpsilonFromSigma(1.0, 0.05)->outside_guaranteed_range);
  const DpGuarantee none = *EpsilonFromSigma(0.0, 0.05);
  EXPECT_TRUE(std::isinf(none.epsilon));
  EXPECT_TRUE(none.outside_guaranteed_range);
}

TEST(EpsilonFromSigmaTest, DomainErrorsNameTheParameter) {
  for (double delta : {0.0, -0.1, 1.25, 2.0, std::nan("")}) {
    const absl::Status s = EpsilonFromSigma(1.0, delta).status();
    EXPECT_EQ(s.code(), absl::StatusCode::kOutOfRange);
    EXPECT_NE(s.message().find("delta"), absl::string_view::npos);
  }
  EXPECT_NE(EpsilonFromSigma(-1.0, 0.05).status().message().find("sigma"),
            absl::string_view::npos);
  EXPECT_NE(SigmaFromEpsilon(0.0, 0.05).status().message().find("epsilon"),
            absl::string_view::npos);
}

TEST(EpsilonFromSigmaProperty, RoundTrip) {
  GaussianRng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const double sigma = std::exp(-3.0 + 8.0 * rng.Uniform());
    const double delta = 1e-9 + (1.25 - 2e-9) * rng.Uniform();
    const double eps = EpsilonFromSigma(sigma, delta)->epsilon;
    const double back = *SigmaFromEpsilon(eps, delta);
    EXPECT_LE(std::abs(back - sigma) / sigma, 1e-9);
  }
}

TEST(TotalSigmaTest, Pythagorean) {
  EXPECT_DOUBLE_EQ(TotalSigma(3.0, 4.0), 5.0);
  EXPECT_DOUBLE_EQ(TotalSigma(0.0, 2.5), 2.5);
}

TEST(RegularizedLowerGammaTest, MatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 5.0, 10.0, 30.0}) {
    for (double x : {1e-6, 0.1, 0.9, 1.0, 2.0, 4.7, 10.0, 25.0, 60.0}) {
      EXPECT_NEAR(*RegularizedLowerGamma(a, x), boost::math::gamma_p(a, x),
                  1e-13)
          << "a " << a << " x " << x;
    }
  }
}

TEST(RegularizedLowerGammaTest, EdgesAndErrors) {
  EXPECT_EQ(*RegularizedLowerGamma(2.0, 0.0), 0.0);
  EXPECT_EQ(*RegularizedLowerGamma(2.0, INFINITY), 1.0);
  EXPECT_FALSE(RegularizedLowerGamma(0.0, 1.0).ok());
  EXPECT_FALSE(RegularizedLowerGamma(1.0, -1.0).ok());
}

TEST(ChiSquareCdfTest, TwoDegreesOfFreedomClosedForm) {
  for (double zeta : {0.01, 0.3, 1.0, 2.0, 5.0, 12.0, 40.0}) {
    EXPECT_NEAR(*ChiSquareCdf(2, zeta), 1.0 - std::exp(-zeta / 2.0), 1e-12);
  }
  EXPECT_NEAR(*ChiSquareCdf(2, 2.0 * std::numbers::ln2), 0.5, 1e-12);
}

TEST(ChiSquareCdfTest, OneDegreeIsErf) {
  for (double zeta : {0.2, 1.0, 3.84}) {
    EXPECT_NEAR(*ChiSquareCdf(1, zeta), std::erf(std::sqrt(zeta / 2.0)), 1e-13);
  }
  EXPECT_FALSE(ChiSquareCdf(0, 1.0).ok());
  EXPECT_FALSE(ChiSquareCdf(2, -1.0).ok());
}

TEST(ChiSquareCdfProperty, MonotoneInZetaAndDecreasingInDimension) {
  for (int d = 1; d <= 12; ++d) {
    double previous = 0.0;
    for (double zeta = 0.0; zeta < 40.0; zeta += 0.25) {
      const double p = *ChiSquareCdf(d, zeta);
      EXPECT_GE(p, previous);
      EXPECT_GE(*ChiSquareCdf(d, zeta), *ChiSquareCdf(d + 1, zeta));
      previous = p;
    }
  }
}

TEST(NormBoundProbabilityTest, ReportFields) {
  const NormBoundReport r = *NormBoundProbability(3, 4.0, 1.0, 2.0, 0.1);
  const double p = boost::math::gamma_p(1.5, 2.0);
  EXPECT_NEAR(r.probability, p, 1e-13);
  EXPECT_DOUBLE_EQ(r.norm_sq_bound, 4.0 * 5.0);
  EXPECT_NEAR(r.combined_success, 1.0 - 0.1 * (1.0 - p), 1e-14);
  EXPECT_NEAR(r.union_bound_success, std::max(0.0, 1.0 - 0.1 - (1.0 - p)),
              1e-14);
  EXPECT_LE(r.union_bound_success, r.combined_success);
  EXPECT_FALSE(NormBoundProbability(3, 4.0, 1.0, 2.0, 1.0).ok());
}

TEST(NormBoundProbabilityTest, MonteCarloSquaredNorm) {
  GaussianRng rng(99);
  const int d = 4;
  const double sigma_l = 0.7, sigma_s = 1.3, zeta = 3.5;
  const double bound = zeta * (sigma_l * sigma_l + sigma_s * sigma_s);
  const int m = 100000;
  int inside = 0;
  for (int k = 0; k < m; ++k) {
    double norm_sq = 0.0;
    for (int j = 0; j < d; ++j) {
      const double u = rng.Normal(0.0, sigma_l) + rng.Normal(0.0, sigma_s);
      norm_sq += u * u;
    }
    inside += norm_sq <= bound;
  }
  const NormBoundReport r =
      *NormBoundProbability(d, zeta, sigma_l, sigma_s, 0.05);
  EXPECT_NEAR(static_cast<double>(inside) / m, r.probability, 0.006);
}

TEST(GaussianPerturbTest, ZeroSigmaIsIdentity) {
  const std::vector<double> x = {1.0, -2.0, 3.5};
  EXPECT_EQ(*GaussianPerturb(x, 0.0, 5), x);
  GaussianRng a(1), b(1);
  EXPECT_EQ(*GaussianPerturb(x, 0.0, a), x);
  EXPECT_EQ(a.Uniform(), b.Uniform());  // no draws consumed
  EXPECT_FALSE(GaussianPerturb(x, -1.0, 5).ok());
}

TEST(GaussianPerturbTest, SeededAndMomentsMatch) {
  const std::vector<double> x(200000, 1.0);
  const std::vector<double> y = *GaussianPerturb(x, 2.0, 42);
  EXPECT_EQ(y, *GaussianPerturb(x, 2.0, 42));
  EXPECT_NE(y, *GaussianPerturb(x, 2.0, 43));
  double mean = 0.0, var = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  for (double v : y) var += (v - mean) * (v - mean);
  var /= y.size() - 1;
  EXPECT_NEAR(mean, 1.0, 4 * 2.0 / std::sqrt(200000.0));
  EXPECT_NEAR(var, 4.0, 0.05);
}

TEST(GaussianRngTest, KolmogorovSmirnovAgainstNormalCdf) {
  GaussianRng rng(2024);
  std::vector<double> z(50000);
  for (double& v : z) v = rng.Normal();
  std::sort(z.begin(), z.end());
  double d_stat = 0.0;
  const double n = static_cast<double>(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double cdf = 0.5 * std::erfc(-z[k] / std::sqrt(2.0));
    d_stat = std::max({d_stat, (k + 1) / n - cdf, cdf - k / n});
  }
  // 1% critical value 1.63 / sqrt(n).
  EXPECT_LT(d_stat, 1.63 / std::sqrt(n));
}

TEST(GaussianRngTest, UniformInUnitIntervalAndStreamsDiffer) {
  GaussianRng rng(0);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.Uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(DeriveSeed(5, 0), DeriveSeed(5, 1));
  EXPECT_NE(DeriveSeed(5, 0), DeriveSeed(6, 0));
}

}  // namespace
}  // namespace obfugame
