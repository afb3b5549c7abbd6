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

#include "obfugame/config_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/strip.h"

namespace obfugame {
namespace {

constexpr const char* kLearnerKeys[] = {"G_bar", "gamma", "N_bar", "Lambda",
                                        "N"};
constexpr const char* kUserKeys[] = {"G_bar", "gamma", "P_bar", "rho", "N_bar"};
constexpr const char* kDpKeys[] = {"delta", "d"};
constexpr const char* kSolverKeys[] = {"sigma_max", "grid_step", "tol",
                                       "tie_epsilon"};

constexpr int kBroadcast = -1;

struct Entry {
  double value = 0.0;
  int line = 0;
};

template <std::size_t N>
bool Contains(const char* const (&names)[N], absl::string_view name) {
  for (const char* n : names) {
    if (name == n) return true;
  }
  return false;
}

std::optional<double> ParseNumber(absl::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

class Parser {
 public:
  explicit Parser(absl::string_view source) : source_(source) {}

  absl::Status Error(int line, absl::string_view message) const {
    return absl::InvalidArgumentError(
        absl::StrCat(source_, ":", line, ": ", message));
  }

  absl::Status Error(absl::string_view message) const {
    return absl::InvalidArgumentError(absl::StrCat(source_, ": ", message));
  }

  absl::Status ParseLine(absl::string_view raw, int line) {
    absl::string_view text = raw;
    if (std::size_t hash = text.find('#'); hash != absl::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = absl::StripAsciiWhitespace(text);
    if (text.empty()) return absl::OkStatus();
    const std::size_t eq = text.find('=');
    if (eq == absl::string_view::npos) {
      return Error(line,
                   absl::StrCat("expected 'key = value', got '", text, "'"));
    }
    const absl::string_view key =
        absl::StripAsciiWhitespace(text.substr(0, eq));
    const absl::string_view value_text =
        absl::StripAsciiWhitespace(text.substr(eq + 1));
    const std::optional<double> value = ParseNumber(value_text);
    if (!value) {
      return Error(line, absl::StrCat("value '", value_text, "' for key '", key,
                                      "' is not a number"));
    }
    const Entry entry{*value, line};

    absl::string_view rest = key;
    if (absl::ConsumePrefix(&rest, "users[")) {
      const std::size_t close = rest.find(']');
      if (close == absl::string_view::npos || close + 1 >= rest.size() ||
          rest[close + 1] != '.') {
        return Error(line, absl::StrCat("malformed user key '", key, "'"));
      }
      const absl::string_view index_text = rest.substr(0, close);
      const absl::string_view field = rest.substr(close + 2);
      int index = kBroadcast;
      if (index_text != "*") {
        auto [ptr, ec] = std::from_chars(
            index_text.data(), index_text.data() + index_text.size(), index);
        if (ec != std::errc() || ptr != index_text.data() + index_text.size() ||
            index < 0) {
          return Error(line, absl::StrCat("bad user index '", index_text,
                                          "' in key '", key, "'"));
        }
      }
      if (!Contains(kUserKeys, field)) {
        return Error(line, absl::StrCat("unknown key '", key, "'"));
      }
      return Store(users_[index], std::string(field), entry, key);
    }
    const std::size_t dot = key.find('.');
    if (dot == absl::string_view::npos) {
      return Error(line, absl::StrCat("unknown key '", key, "'"));
    }
    const absl::string_view section = key.substr(0, dot);
    const absl::string_view field = key.substr(dot + 1);
    bool known = false;
    if (section == "learner") known = Contains(kLearnerKeys, field);
    if (section == "dp") known = Contains(kDpKeys, field);
    if (section == "solver") known = Contains(kSolverKeys, field);
    if (!known) return Error(line, absl::StrCat("unknown key '", key, "'"));
    return Store(scalars_, std::string(key), entry, key);
  }

  absl::StatusOr<GameConfig> Finish() {
    GameConfig config;
    double n_value = 0.0;
    for (const char* field : kLearnerKeys) {
      const std::string key = absl::StrCat("learner.", field);
      auto it = scalars_.find(key);
      if (it == scalars_.end()) return Error(absl::StrCat("missing key ", key));
      if (absl::string_view(field) == "N") n_value = it->second.value;
    }
    const int n_line = scalars_["learner.N"].line;
    if (n_value != std::floor(n_value) || n_value < 1.0 || n_value > 1e7) {
      return Error(
          n_line,
          absl::StrCat("learner.N must be a positive integer, got ", n_value));
    }
    const int num_users = static_cast<int>(n_value);
    config.learner.baseline_gain = scalars_["learner.G_bar"].value;
    config.learner.accuracy_weight = scalars_["learner.gamma"].value;
    config.learner.perturbation_cost = scalars_["learner.N_bar"].value;
    config.learner.regularizer = scalars_["learner.Lambda"].value;
    config.learner.population_size = num_users;

    for (const auto& [index, fields] : users_) {
      if (index == kBroadcast || index < num_users) continue;
      return Error(
          fields.begin()->second.line,
          absl::StrCat("user index ", index,
                       " is out of range for learner.N = ", num_users));
    }
    const std::map<std::string, Entry> empty;
    const auto broadcast_it = users_.find(kBroadcast);
    const auto& broadcast =
        broadcast_it == users_.end() ? empty : broadcast_it->second;
    config.users.resize(num_users);
    for (int i = 0; i < num_users; ++i) {
      const auto own_it = users_.find(i);
      const auto& own = own_it == users_.end() ? empty : own_it->second;
      auto lookup = [&](const char* field) -> std::optional<Entry> {
        if (auto it = own.find(field); it != own.end()) return it->second;
        if (auto it = broadcast.find(field); it != broadcast.end()) {
          return it->second;
        }
        return std::nullopt;
      };
      for (const char* field : kUserKeys) {
        const std::optional<Entry> e = lookup(field);
        if (!e) {
          return Error(absl::StrCat("missing key users[", i, "].", field));
        }
        key_lines_.emplace_back(absl::StrCat("users[", i, "].", field),
                                e->line);
      }
      UserParams& u = config.users[i];
      u.baseline_gain = lookup("G_bar")->value;
      u.accuracy_weight = lookup("gamma")->value;
      u.max_privacy_loss = lookup("P_bar")->value;
      u.privacy_rate = lookup("rho")->value;
      u.perturbation_cost = lookup("N_bar")->value;
    }

    for (const char* field : kDpKeys) {
      const std::string key = absl::StrCat("dp.", field);
      if (!scalars_.contains(key)) {
        return Error(absl::StrCat("missing key ", key));
      }
    }
    config.dp_delta = scalars_["dp.delta"].value;
    const double d = scalars_["dp.d"].value;
    if (d != std::floor(d) || d < 1.0 || d > 1e9) {
      return Error(scalars_["dp.d"].line,
                   absl::StrCat("dp.d must be a positive integer, got ", d));
    }
    config.data_dim = static_cast<int>(d);

    auto optional_scalar = [&](const char* key, double& target) {
      if (auto it = scalars_.find(key); it != scalars_.end()) {
        target = it->second.value;
      }
    };
    optional_scalar("solver.sigma_max", config.solver.sigma_max);
    optional_scalar("solver.grid_step", config.solver.grid_step);
    optional_scalar("solver.tol", config.solver.root_tol);
    optional_scalar("solver.tie_epsilon", config.solver.tie_epsilon);

    for (const auto& [key, entry] : scalars_) {
      key_lines_.emplace_back(key, entry.line);
    }
    if (absl::Status s = ValidateConfig(config); !s.ok()) {
      return AnchorValidationError(s.message());
    }
    return config;
  }

 private:
  absl::Status Store(std::map<std::string, Entry>& target, std::string field,
                     const Entry& entry, absl::string_view key) {
    auto [it, inserted] = target.emplace(std::move(field), entry);
    if (!inserted) {
      return Error(entry.line,
                   absl::StrCat("duplicate key '", key, "' (first set on line ",
                                it->second.line, ")"));
    }
    return absl::OkStatus();
  }

  // Attaches the line of the earliest key named in a validation message.
  absl::Status AnchorValidationError(absl::string_view message) const {
    std::size_t best_pos = absl::string_view::npos;
    std::size_t best_len = 0;
    int best_line = 0;
    for (const auto& [key, line] : key_lines_) {
      const std::size_t pos = message.find(key);
      if (pos == absl::string_view::npos) continue;
      if (pos < best_pos || (pos == best_pos && key.size() > best_len)) {
        best_pos = pos;
        best_len = key.size();
        best_line = line;
      }
    }
    if (best_pos == absl::string_view::npos) return Error(message);
    return Error(best_line, message);
  }

  std::string source_;
  std::map<std::string, Entry> scalars_;
  std::map<int, std::map<std::string, Entry>> users_;
  std::vector<std::pair<std::string, int>> key_lines_;
};

}  // namespace

absl::StatusOr<GameConfig> ParseConfig(absl::string_view text,
                                       absl::string_view source_name) {
  Parser parser(source_name);
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == absl::string_view::npos) end = text.size();
    ++line;
    if (absl::Status s =
            parser.ParseLine(text.substr(start, end - start), line);
        !s.ok()) {
      return s;
    }
    start = end + 1;
  }
  return parser.Finish();
}

absl::StatusOr<GameConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open config file ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), path);
}

std::string SerializeConfig(const GameConfig& config) {
  std::string out;
  // Shortest text that parses back to the same double.
  auto put = [&out](absl::string_view key, double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    absl::StrAppend(&out, key, " = ",
                    absl::string_view(buffer, result.ptr - buffer), "\n");
  };
  put("learner.G_bar", config.learner.baseline_gain);
  put("learner.gamma", config.learner.accuracy_weight);
  put("learner.N_bar", config.learner.perturbation_cost);
  put("learner.Lambda", config.learner.regularizer);
  put("learner.N", config.learner.population_size);
  for (std::size_t i = 0; i < config.users.size(); ++i) {
    const UserParams& u = config.users[i];
    const std::string prefix = absl::StrCat("users[", i, "].");
    put(prefix + "G_bar", u.baseline_gain);
    put(prefix + "gamma", u.accuracy_weight);
    put(prefix + "P_bar", u.max_privacy_loss);
    put(prefix + "rho", u.privacy_rate);
    put(prefix + "N_bar", u.perturbation_cost);
  }
  put("dp.delta", config.dp_delta);
  put("dp.d", config.data_dim);
  put("solver.sigma_max", config.solver.sigma_max);
  put("solver.grid_step", config.solver.grid_step);
  put("solver.tol", config.solver.root_tol);
  put("solver.tie_epsilon", config.solver.tie_epsilon);
  return out;
}

}  // namespace obfugame
