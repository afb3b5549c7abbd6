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

#include <string>

#include "gtest/gtest.h"

namespace obfugame {
namespace {

constexpr const char kValid[] = R"(# two users
learner.G_bar = 50
learner.gamma = 2
learner.N_bar = 1.5
learner.Lambda = 0.5
learner.N = 2

users[*].G_bar = 10
users[*].gamma = 0.4
users[*].P_bar = 6
users[*].rho = 1.2
users[*].N_bar = 0.7
users[1].rho = 0.5   # override for one user

dp.delta = 0.05
dp.d = 3
solver.sigma_max = 20
)";

TEST(ParseConfigTest, ReadsEveryField) {
  const GameConfig c = *ParseConfig(kValid, "t.cfg");
  EXPECT_EQ(c.learner.baseline_gain, 50);
  EXPECT_EQ(c.learner.accuracy_weight, 2);
  EXPECT_EQ(c.learner.perturbation_cost, 1.5);
  EXPECT_EQ(c.learner.regularizer, 0.5);
  EXPECT_EQ(c.learner.population_size, 2);
  ASSERT_EQ(c.users.size(), 2u);
  EXPECT_EQ(c.users[0].privacy_rate, 1.2);
  EXPECT_EQ(c.users[1].privacy_rate, 0.5);
  EXPECT_EQ(c.users[1].perturbation_cost, 0.7);
  EXPECT_EQ(c.dp_delta, 0.05);
  EXPECT_EQ(c.data_dim, 3);
  EXPECT_EQ(c.solver.sigma_max, 20);
  EXPECT_EQ(c.solver.grid_step, SolverSettings{}.grid_step);
}

TEST(ParseConfigTest, SerializeRoundTrips) {
  const GameConfig c = *ParseConfig(kValid, "t.cfg");
  const GameConfig back = *ParseConfig(SerializeConfig(c), "round");
  EXPECT_EQ(SerializeConfig(back), SerializeConfig(c));
  EXPECT_EQ(back.users[1].privacy_rate, 0.5);
}

std::string Replace(std::string text, const std::string& from,
                    const std::string& to) {
  const std::size_t pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

std::string ErrorOf(const std::string& text) {
  auto c = ParseConfig(text, "t.cfg");
  EXPECT_FALSE(c.ok());
  return std::string(c.status().message());
}

TEST(ParseConfigTest, UnknownKeyIsLineAnchored) {
  const std::string msg =
      ErrorOf(Replace(kValid, "learner.N_bar", "learner.Nbar"));
  EXPECT_EQ(msg.rfind("t.cfg:4:", 0), 0u) << msg;
  EXPECT_NE(msg.find("learner.Nbar"), std::string::npos);
}

TEST(ParseConfigTest, DuplicateKey) {
  const std::string msg = ErrorOf(std::string(kValid) + "dp.d = 4\n");
  EXPECT_EQ(msg.rfind("t.cfg:18:", 0), 0u) << msg;
  EXPECT_NE(msg.find("duplicate"), std::string::npos);
}

TEST(ParseConfigTest, MissingKey) {
  const std::string msg = ErrorOf(Replace(kValid, "dp.delta = 0.05\n", ""));
  EXPECT_NE(msg.find("dp.delta"), std::string::npos) << msg;
  const std::string user =
      ErrorOf(Replace(kValid, "users[*].gamma = 0.4\n", ""));
  EXPECT_NE(user.find("users[0].gamma"), std::string::npos) << user;
}

TEST(ParseConfigTest, ValidationErrorPointsAtOffendingLine) {
  const std::string msg =
      ErrorOf(Replace(kValid, "users[1].rho = 0.5", "users[1].rho = -1"));
  EXPECT_EQ(msg.rfind("t.cfg:13:", 0), 0u) << msg;
}

TEST(ParseConfigTest, MalformedLines) {
  EXPECT_NE(ErrorOf(Replace(kValid, "dp.d = 3", "dp.d 3")).find("t.cfg:16:"),
            std::string::npos);
  EXPECT_NE(
      ErrorOf(Replace(kValid, "dp.d = 3", "dp.d = three")).find("not a number"),
      std::string::npos);
  EXPECT_NE(ErrorOf(Replace(kValid, "dp.d = 3", "dp.d = 2.5"))
                .find("positive integer"),
            std::string::npos);
  EXPECT_NE(
      ErrorOf(std::string(kValid) + "users[5].rho = 1\n").find("out of range"),
      std::string::npos);
  EXPECT_NE(ErrorOf(std::string(kValid) + "users[x].rho = 1\n")
                .find("bad user index"),
            std::string::npos);
}

TEST(LoadConfigTest, MissingFileIsNotFound) {
  EXPECT_EQ(LoadConfig("/nonexistent/x.cfg").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(LoadConfigTest, ShippedConfigsLoad) {
  for (const char* name : {"default.cfg", "fig3_cost10.cfg", "fig3_cost20.cfg",
                           "fig3_cost30.cfg"}) {
    EXPECT_TRUE(
        LoadConfig(std::string(OBFUGAME_SOURCE_DIR) + "/configs/" + name).ok())
        << name;
  }
}

}  // namespace
}  // namespace obfugame
