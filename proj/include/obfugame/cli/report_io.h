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

// Text and CSV renderings of solver and validation results.
//
// CSV files are comma-separated with a header row, '.' as the decimal
// separator and numbers printed with 12 significant digits.

#ifndef OBFUGAME_CLI_REPORT_IO_H_
#define OBFUGAME_CLI_REPORT_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "obfugame/game_model.h"
#include "obfugame/response_solver.h"

namespace obfugame::cli {

std::string FormatNumber(double value);

std::string CsvLine(const std::vector<std::string>& fields);

// Flat "key = value" record of an equilibrium.
std::string FormatEquilibriumRecord(const EquilibriumResult& result);

// user, parameters, desired effective noise, threshold kind and value.
std::string FormatThresholdsCsv(const ResponseModel& model);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string tool_version;
  std::string timestamp;
};

std::string FormatManifest(const RunManifest& manifest);

// UTC time in ISO 8601.
std::string CurrentTimestamp();

}  // namespace obfugame::cli

#endif  // OBFUGAME_CLI_REPORT_IO_H_
