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

#ifndef BEVGLUE_CONFIG_H_
#define BEVGLUE_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bevglue/icp.h"
#include "bevglue/matching.h"
#include "bevglue/sim.h"

namespace bevglue {

struct EvalConfig {
  double success_trans_error = 1.0;  // m
  double success_rot_error = 0.1;    // rad
  int num_seeds = 1;                 // consecutive seeds starting at seed
};

// Everything one experiment run depends on. Serialized as flat key=value
// text; see FormatConfig for the key list.
struct ExperimentConfig {
  ScenarioConfig scenario;
  MatchConfig match;
  IcpConfig icp;
  EvalConfig eval;

  void Validate() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses `key = value` lines. Blank lines and text after '#' are ignored.
// Throws ConfigError (with the line number) on a line without '=' or an
// empty key.
KeyValues ParseKeyValues(std::string_view text);

std::string FormatKeyValues(const KeyValues& kv);

// Throws ConfigError for an unknown key or an unparsable value.
void SetConfigValue(ExperimentConfig& cfg, std::string_view key,
                    std::string_view value);

ExperimentConfig ParseConfig(std::string_view text,
                             ExperimentConfig base = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path);

KeyValues FormatConfig(const ExperimentConfig& cfg);

// Shortest round-trippable decimal form.
std::string FormatDouble(double v);

}  // namespace bevglue

#endif  // BEVGLUE_CONFIG_H_
