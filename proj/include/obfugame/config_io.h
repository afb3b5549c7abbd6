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

// Flat "key = value" game configuration files.
//
//   # comment
//   learner.G_bar  = 100
//   learner.N      = 3
//   users[*].rho   = 1       # applies to every user unless overridden
//   users[2].N_bar = 30
//   dp.delta       = 0.05
//   solver.sigma_max = 20    # optional; see SolverSettings for defaults
//
// Recognized keys:
//   learner.{G_bar, gamma, N_bar, Lambda, N}
//   users[i].{G_bar, gamma, P_bar, rho, N_bar}   (i in 0..N-1, or *)
//   dp.{delta, d}
//   solver.{sigma_max, grid_step, tol, tie_epsilon}
// Unknown or duplicated keys are errors, as is any missing learner, user or
// dp key. Error messages are prefixed with "<source>:<line>:".

#ifndef OBFUGAME_CONFIG_IO_H_
#define OBFUGAME_CONFIG_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "obfugame/game_model.h"

namespace obfugame {

// Parses and validates. Errors are InvalidArgument.
absl::StatusOr<GameConfig> ParseConfig(absl::string_view text,
                                       absl::string_view source_name);

// NotFound when the file cannot be read.
absl::StatusOr<GameConfig> LoadConfig(const std::string& path);

// Writes every key explicitly with round-trip precision.
std::string SerializeConfig(const GameConfig& config);

}  // namespace obfugame

#endif  // OBFUGAME_CONFIG_IO_H_
