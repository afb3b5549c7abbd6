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

#include "obfugame/cli/report_io.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace obfugame::cli {

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string CsvLine(const std::vector<std::string>& fields) {
  return absl::StrCat(absl::StrJoin(fields, ","), "\n");
}

std::string FormatEquilibriumRecord(const EquilibriumResult& result) {
  std::string out;
  absl::StrAppend(&out, "sigma_L_star = ", FormatNumber(result.sigma_l_star),
                  "\n");
  absl::StrAppend(&out, "U_L = ", FormatNumber(result.learner_utility), "\n");
  absl::StrAppend(&out, "users = ", result.sigma_s_star.size(), "\n");
  for (std::size_t i = 0; i < result.sigma_s_star.size(); ++i) {
    absl::StrAppend(&out, "sigma_S_star[", i,
                    "] = ", FormatNumber(result.sigma_s_star[i]), "\n");
    absl::StrAppend(&out, "U_S[", i,
                    "] = ", FormatNumber(result.user_utilities[i]), "\n");
    if (i < result.per_user_thresholds.size()) {
      const DissuasionThreshold& t = result.per_user_thresholds[i];
      absl::StrAppend(&out, "threshold[", i, "] = ", FormatNumber(t.sigma_l),
                      "\n");
      absl::StrAppend(&out, "threshold_kind[", i,
                      "] = ", ThresholdKindName(t.kind), "\n");
    }
  }
  return out;
}

std::string FormatThresholdsCsv(const ResponseModel& model) {
  std::string out =
      CsvLine({"user", "G_bar", "gamma", "P_bar", "rho", "N_bar",
               "desired_effective_noise", "threshold_kind", "threshold"});
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    const UserParams& u = model.config().users[i];
    const DissuasionThreshold t = model.Threshold(i);
    absl::StrAppend(
        &out,
        CsvLine({absl::StrCat(i), FormatNumber(u.baseline_gain),
                 FormatNumber(u.accuracy_weight),
                 FormatNumber(u.max_privacy_loss), FormatNumber(u.privacy_rate),
                 FormatNumber(u.perturbation_cost),
                 FormatNumber(model.desired_effective_noise(i)),
                 ThresholdKindName(t.kind), FormatNumber(t.sigma_l)}));
  }
  return out;
}

std::string FormatManifest(const RunManifest& manifest) {
  return absl::StrCat(
      "command = ", manifest.command, "\n", "config = ", manifest.config_path,
      "\n", "seed = ", manifest.seed, "\n", "out_dir = ", manifest.out_dir,
      "\n", "tool_version = ", manifest.tool_version, "\n",
      "timestamp = ", manifest.timestamp, "\n");
}

std::string CurrentTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace obfugame::cli
