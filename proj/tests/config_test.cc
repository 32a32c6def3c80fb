// Copyright 2026 The BEVGlue Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bevglue/config.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "bevglue/errors.h"

namespace bevglue {
namespace {

TEST(KeyValuesTest, ParsesCommentsBlanksAndWhitespace) {
  const KeyValues kv = ParseKeyValues(
      "# scenario\n"
      "seed = 12\n"
      "\n"
      "  p_miss=0.25   # trailing note\n"
      "spoof_attack = true\r\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"seed", "12"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"p_miss", "0.25"}));
  EXPECT_EQ(kv[2], (std::pair<std::string, std::string>{"spoof_attack", "true"}));
}

TEST(KeyValuesTest, MissingEqualsReportsLine) {
  try {
    ParseKeyValues("seed=1\nnonsense\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseConfigTest, SetsEverySection) {
  const ExperimentConfig cfg = ParseConfig(
      "seed=7\nnum_agents=3\nloc_sigma_t=1.5\nsigma_rho=0.25\n"
      "use_edge_checks=false\nicp_boundary_samples=8\nnum_seeds=4\n");
  EXPECT_EQ(cfg.scenario.seed, 7u);
  EXPECT_EQ(cfg.scenario.num_agents, 3);
  EXPECT_EQ(cfg.scenario.loc_sigma_t, 1.5);
  EXPECT_EQ(cfg.match.sigma_rho, 0.25);
  EXPECT_FALSE(cfg.match.use_edge_checks);
  EXPECT_EQ(cfg.icp.boundary_samples_per_box, 8);
  EXPECT_EQ(cfg.eval.num_seeds, 4);
  // Untouched keys keep their defaults.
  EXPECT_EQ(cfg.scenario.num_objects, ScenarioConfig{}.num_objects);
}

TEST(ParseConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(ParseConfig("no_such_key=1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("seed=abc\n"), ConfigError);
  EXPECT_THROW(ParseConfig("p_miss=0.5x\n"), ConfigError);
  EXPECT_THROW(ParseConfig("spoof_attack=maybe\n"), ConfigError);
}

TEST(ParseConfigTest, FormatRoundTrips) {
  ExperimentConfig cfg;
  cfg.scenario.seed = 123456789012345ull;
  cfg.scenario.det_sigma_xy = 0.1 + 0.2;  // not exactly representable as 0.3
  cfg.scenario.spoof_attack = true;
  cfg.match.gamma_v = 0.123456789123;
  cfg.icp.max_pair_dist = 3.5;
  const std::string text = FormatKeyValues(FormatConfig(cfg));
  const ExperimentConfig back = ParseConfig(text);
  EXPECT_EQ(back.scenario.seed, cfg.scenario.seed);
  EXPECT_EQ(back.scenario.det_sigma_xy, cfg.scenario.det_sigma_xy);
  EXPECT_TRUE(back.scenario.spoof_attack);
  EXPECT_EQ(back.match.gamma_v, cfg.match.gamma_v);
  EXPECT_EQ(back.icp.max_pair_dist, 3.5);
  EXPECT_EQ(FormatKeyValues(FormatConfig(back)), text);
}

TEST(ParseConfigTest, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(FormatDouble(2.0), "2");
  EXPECT_EQ(std::stod(FormatDouble(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(LoadConfigTest, ReadsFileAndValidates) {
  const auto dir = std::filesystem::path(::testing::TempDir());
  const auto good = dir / "good.cfg";
  std::ofstream(good) << "seed=3\nnum_frames=20\n";
  EXPECT_EQ(LoadConfig(good).scenario.num_frames, 20);

  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "p_miss=2\n";
  EXPECT_THROW(LoadConfig(bad), ConfigError);
  EXPECT_THROW(LoadConfig(dir / "does_not_exist.cfg"), ConfigError);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST(ExperimentConfigTest, ValidatesEverySection) {
  EXPECT_NO_THROW(ExperimentConfig{}.Validate());
  ExperimentConfig c;
  c.eval.num_seeds = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.icp.max_iterations = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.match.sigma_dim = -1;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace bevglue
