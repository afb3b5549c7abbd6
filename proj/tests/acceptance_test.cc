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

// Acceptance checks. Prints one [PASS] or [FAIL] line per criterion, with the
// measured quantity, its tolerance and the wall time, and exits non-zero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "obfugame/config_io.h"
#include "obfugame/dp_mechanism.h"
#include "obfugame/gaussian_rng.h"
#include "obfugame/response_solver.h"
#include "obfugame/validation.h"

namespace obfugame {
namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

GameConfig Shipped(const std::string& name) {
  auto c = LoadConfig(std::string(OBFUGAME_SOURCE_DIR) + "/configs/" + name);
  if (!c.ok()) {
    std::fprintf(stderr, "%s\n", std::string(c.status().message()).c_str());
    std::exit(2);
  }
  return *c;
}

// ---- 1. bang-bang best response on the shipped config ----
Outcome BangBang() {
  const GameConfig c = Shipped("default.cfg");
  const ResponseModel model = *ResponseModel::Create(c);
  const double step = 0.05;
  const int points =
      static_cast<int>(std::floor(c.solver.sigma_max / step)) + 1;
  int checked = 0;
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    const DissuasionThreshold t = model.Threshold(i);
    if (t.kind != DissuasionThreshold::Kind::kFound) {
      return {false, absl::StrFormat("user %d threshold not found", i)};
    }
    double previous = INFINITY;
    for (int k = 0; k < points; ++k) {
      const double sigma_l = k * step;
      const double br = model.BestResponse(i, sigma_l);
      ++checked;
      if (sigma_l < t.sigma_l) {
        if (!(br > 0.0) || !(br < previous)) {
          return {false, absl::StrFormat("user %d at sigma_L=%g: BR=%g", i,
                                         sigma_l, br)};
        }
        previous = br;
      } else if (br != 0.0) {
        return {false, absl::StrFormat("user %d at sigma_L=%g past t=%g: BR=%g",
                                       i, sigma_l, t.sigma_l, br)};
      }
    }
  }
  return {true, absl::StrFormat("%d grid points, %d users", checked,
                                model.num_users())};
}

// ---- 2. thresholds decrease with the user perturbation cost ----
Outcome ThresholdOrdering() {
  const char* names[] = {"fig3_cost10.cfg", "fig3_cost20.cfg",
                         "fig3_cost30.cfg"};
  std::vector<std::vector<double>> t;
  for (const char* name : names) {
    const GameConfig c = Shipped(name);
    if (c.solver.root_tol != 1e-9) return {false, "root_tol is not 1e-9"};
    const ResponseModel model = *ResponseModel::Create(c);
    std::vector<double> row;
    for (std::size_t i = 0; i < model.num_users(); ++i) {
      const DissuasionThreshold d = model.Threshold(i);
      if (d.kind != DissuasionThreshold::Kind::kFound) {
        return {false, absl::StrFormat("%s user %d: no threshold", name, i)};
      }
      row.push_back(d.sigma_l);
    }
    t.push_back(row);
  }
  std::string detail;
  for (std::size_t i = 0; i < t[0].size(); ++i) {
    if (!(t[0][i] > t[1][i] && t[1][i] > t[2][i])) {
      return {false, absl::StrFormat("user %d: %g, %g, %g", i, t[0][i], t[1][i],
                                     t[2][i])};
    }
    absl::StrAppendFormat(&detail, "%suser %d: %.6f > %.6f > %.6f",
                          i ? "; " : "", i, t[0][i], t[1][i], t[2][i]);
  }
  return {true, detail};
}

// ---- 3. equilibrium pattern across the cost variants ----
Outcome EquilibriumPattern() {
  std::string detail;
  const GameConfig c10 = Shipped("fig3_cost10.cfg");
  const EquilibriumResult r10 = *StackelbergSolve(c10);
  if (r10.sigma_l_star != 0.0) {
    return {false, absl::StrFormat("N_bar=10: sigma_L*=%g", r10.sigma_l_star)};
  }
  absl::StrAppendFormat(&detail, "N_bar=10: sigma_L*=0");
  for (const char* name : {"fig3_cost20.cfg", "fig3_cost30.cfg"}) {
    const GameConfig c = Shipped(name);
    const EquilibriumResult r = *StackelbergSolve(c);
    const double at_zero = *LeaderObjective(0.0, c);
    absl::StrAppendFormat(&detail, "; %s: sigma_L*=%.6f U_L*=%.6f U_L(0)=%.6f",
                          name, r.sigma_l_star, r.learner_utility, at_zero);
    if (!(r.sigma_l_star > 0.0) || !(r.learner_utility > at_zero)) {
      return {false, detail};
    }
  }
  return {true, detail};
}

// ---- 4. a user's argmax ignores the other users ----

// Argmax of U_S^i over [0, sigma_max] for a full profile, using only the
// public utility. A coarse scan brackets the peak and bisection on a central
// difference of U_S^i locates it; the final choice against sigma_S = 0
// applies the no-cost tie rule.
double ProfileArgmax(const GameConfig& c, std::size_t i,
                     StrategyProfile profile) {
  auto u = [&](double s) {
    profile.sigma_s[i] = s;
    return *UserUtility(c, i, profile);
  };
  const double hi = c.solver.sigma_max;
  const double scan = 0.01;
  double best_s = scan;
  double best_u = u(scan);
  for (double s = 2 * scan; s <= hi + 1e-12; s += scan) {
    if (const double v = u(s); v > best_u) {
      best_u = v;
      best_s = s;
    }
  }
  const double h = 1e-4;
  auto slope = [&](double s) { return u(s + h) - u(s - h); };
  double a = std::max(2 * h, best_s - scan);
  double b = std::min(hi - h, best_s + scan);
  double s_star;
  if (slope(b) >= 0.0) {
    s_star = hi;  // rising up to the bound
  } else if (slope(a) <= 0.0) {
    s_star = a;
  } else {
    for (int k = 0; k < 200 && b - a > 1e-15; ++k) {
      const double m = 0.5 * (a + b);
      if (slope(m) > 0.0) {
        a = m;
      } else {
        b = m;
      }
    }
    s_star = 0.5 * (a + b);
  }
  return u(s_star) > u(0.0) + c.solver.tie_epsilon ? s_star : 0.0;
}

GameConfig RandomCrowd(std::uint64_t seed) {
  GaussianRng rng(DeriveSeed(seed, 42));
  GameConfig c;
  const int n = 2 + static_cast<int>(rng.Uniform() * 5);
  c.learner = {10.0, 0.5 + rng.Uniform(), 0.2, 0.5 + rng.Uniform(), n};
  for (int i = 0; i < n; ++i) {
    UserParams u;
    u.baseline_gain = 5.0;
    u.max_privacy_loss = 1.0 + 4.0 * rng.Uniform();
    u.privacy_rate = 0.5 + 1.5 * rng.Uniform();
    u.accuracy_weight = 0.2 + 3.0 * rng.Uniform();
    u.perturbation_cost = 0.3 * rng.Uniform();
    c.users.push_back(u);
  }
  c.solver.sigma_max = 8.0;
  return c;
}

Outcome UserIndependence() {
  GaussianRng rng(2718);
  double worst = 0.0;
  int perturbing = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const GameConfig c = RandomCrowd(seed);
    const std::size_t n = c.users.size();
    const double sigma_l = 1.5 * rng.Uniform();
    const std::size_t i = seed % n;
    double first = 0.0;
    for (int k = 0; k < 10; ++k) {
      StrategyProfile p{sigma_l, std::vector<double>(n)};
      for (double& s : p.sigma_s) s = 5.0 * rng.Uniform();
      const double argmax = ProfileArgmax(c, i, p);
      if (k == 0) {
        first = argmax;
        perturbing += argmax > 0.0;
      }
      worst = std::max(worst, std::abs(argmax - first));
    }
  }
  return {worst <= 1e-9,
          absl::StrFormat("max argmax spread %.3g (tol 1e-9); %d/50 configs "
                          "with a perturbing user",
                          worst, perturbing)};
}

// ---- 5. effective noise stays at s* on the interior branch ----
Outcome EffectiveNoiseClamp() {
  const GameConfig c = Shipped("default.cfg");
  const ResponseModel model = *ResponseModel::Create(c);
  double worst = 0.0;
  int points = 0;
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    const double t = model.Threshold(i).sigma_l;
    double lo = INFINITY, hi = -INFINITY;
    for (double sigma_l = 0.0; sigma_l < t; sigma_l += 1e-3) {
      const double br = model.BestResponse(i, sigma_l);
      if (br == 0.0) continue;
      const double s = std::hypot(sigma_l, br);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      ++points;
    }
    worst = std::max(worst, hi - lo);
  }
  return {points > 0 && worst <= 1e-7,
          absl::StrFormat("max spread of sqrt(sigma_L^2+BR^2) %.3g over %d "
                          "points (tol 1e-7)",
                          worst, points)};
}

// ---- 6. solver vs. brute force ----
Outcome OracleEquivalence() {
  double worst_sigma = 0.0, worst_utility = 0.0;
  int sigma_fail = 0, utility_fail = 0;
  double grid_step = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameConfig c = RandomSmallConfig(seed);
    grid_step = c.solver.grid_step;
    const OracleComparison r = *CompareWithOracle(c, seed, 1e-3, 1e-6);
    worst_sigma =
        std::max(worst_sigma, std::abs(r.solver_sigma_l - r.oracle_sigma_l));
    worst_utility =
        std::max(worst_utility, std::abs(r.solver_utility - r.oracle_utility));
    sigma_fail += !r.sigma_ok;
    utility_fail += !r.utility_ok;
  }
  return {sigma_fail == 0 && utility_fail == 0,
          absl::StrFormat("max |d sigma_L*| %.3g (tol %g, %d over); max |d "
                          "U_L| %.3g (tol 1e-6, %d over)",
                          worst_sigma, grid_step, sigma_fail, worst_utility,
                          utility_fail)};
}

// ---- 7. sigma <-> epsilon ----
Outcome SigmaEpsilonRoundTrip() {
  GaussianRng rng(1234);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double sigma = std::exp(-3.0 + 8.0 * rng.Uniform());
    const double delta = 1e-9 + (1.0 - 2e-9) * rng.Uniform();
    const double eps = EpsilonFromSigma(sigma, delta)->epsilon;
    worst = std::max(worst,
                     std::abs(*SigmaFromEpsilon(eps, delta) - sigma) / sigma);
  }
  const double anchor =
      EpsilonFromSigma(2.0 * std::sqrt(2.0), 1.25 * std::exp(-1.0))->epsilon;
  const double anchor_err = std::abs(anchor - 1.0);
  return {worst <= 1e-9 && anchor_err <= 1e-12,
          absl::StrFormat("max round-trip rel err %.3g (tol 1e-9); |eps-1| at "
                          "sigma=2sqrt2 %.3g (tol 1e-12)",
                          worst, anchor_err)};
}

// ---- 8. chi-square norm bound ----
Outcome ChiSquare() {
  const std::vector<ChiSquareCheck> checks =
      *RunChiSquareSuite(ChiSquareSuiteSpec{}, 31415);
  double worst = 0.0;
  int failed = 0;
  for (const ChiSquareCheck& c : checks) {
    worst = std::max(worst, c.abs_error);
    failed += !c.passed;
  }
  double closed = 0.0;
  for (double zeta = 0.05; zeta < 60.0; zeta *= 1.3) {
    closed = std::max(
        closed, std::abs(*ChiSquareCdf(2, zeta) - (1.0 - std::exp(-zeta / 2))));
  }
  return {failed == 0 && closed <= 1e-12,
          absl::StrFormat("%d checks, max |empirical-cdf| %.4f (tol 0.01); "
                          "d=2 closed-form err %.3g (tol 1e-12)",
                          static_cast<int>(checks.size()), worst, closed)};
}

// ---- 9. classifier and empirical gap inequalities ----
Outcome GapLemmas() {
  LemmaTrialSpec spec;  // n 200, d 5, Lambda 0.1, logistic
  int held1 = 0, held2 = 0;
  double worst1 = INFINITY, worst2 = INFINITY;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LemmaTrial t = *RunLemmaTrial(spec, seed);
    held1 += t.classifier_gap.slack >= -1e-6;
    held2 += t.empirical_gap.slack >= -1e-6;
    worst1 = std::min(worst1, t.classifier_gap.slack);
    worst2 = std::min(worst2, t.empirical_gap.slack);
  }
  return {held1 == 100 && held2 == 100,
          absl::StrFormat("classifier gap %d/100 (min slack %.3g); empirical "
                          "gap %d/100 (min slack %.3g)",
                          held1, worst1, held2, worst2)};
}

// ---- 10. accuracy loss grows with the noise scale ----
Outcome Scaling() {
  const ScalingResult r = *RunScalingSuite(ScalingSpec{}, 8);
  return {r.spearman >= 0.9,
          absl::StrFormat("Spearman %.4f over %d points (need >= 0.9)",
                          r.spearman, static_cast<int>(r.points.size()))};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace obfugame

int main() {
  using obfugame::Criterion;
  const Criterion criteria[] = {
      {"bang-bang best response", 5, obfugame::BangBang},
      {"thresholds decrease with user cost", 5, obfugame::ThresholdOrdering},
      {"leader perturbs only for higher user cost", 30,
       obfugame::EquilibriumPattern},
      {"user argmax independent of other users", 10,
       obfugame::UserIndependence},
      {"effective noise constant on interior branch", 5,
       obfugame::EffectiveNoiseClamp},
      {"solver matches brute force", 120, obfugame::OracleEquivalence},
      {"sigma/epsilon round trip", 1, obfugame::SigmaEpsilonRoundTrip},
      {"chi-square norm bound", 30, obfugame::ChiSquare},
      {"classifier and empirical gap bounds", 120, obfugame::GapLemmas},
      {"accuracy loss scaling", 600, obfugame::Scaling},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const obfugame::Outcome o = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = seconds < c.budget_seconds;
    const bool ok = o.ok && in_time;
    failed += !ok;
    std::printf("[%s] %s: %s; %.2fs (budget %.0fs)\n", ok ? "PASS" : "FAIL",
                c.name, o.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed,
              static_cast<int>(std::size(criteria)));
  return failed == 0 ? 0 : 1;
}
