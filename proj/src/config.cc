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

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bevglue/errors.h"

namespace bevglue {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw ConfigError("bad value for '" + std::string(key) + "': '" +
                    std::string(value) + "'");
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) BadValue(key, value);
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  BadValue(key, value);
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view, std::string_view)>
      set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field Number(T ExperimentConfig::*section, auto member) {
  return {
      [=](ExperimentConfig& c, std::string_view k, std::string_view v) {
        auto& field = (c.*section).*member;
        field = ParseNumber<std::remove_reference_t<decltype(field)>>(k, v);
      },
      [=](const ExperimentConfig& c) -> std::string {
        const auto& field = (c.*section).*member;
        if constexpr (std::is_floating_point_v<
                          std::remove_cvref_t<decltype(field)>>) {
          return FormatDouble(field);
        } else {
          return std::to_string(field);
        }
      }};
}

template <typename T>
Field Flag(T ExperimentConfig::*section, bool T::*member) {
  return {[=](ExperimentConfig& c, std::string_view k, std::string_view v) {
            (c.*section).*member = ParseBool(k, v);
          },
          [=](const ExperimentConfig& c) -> std::string {
            return (c.*section).*member ? "true" : "false";
          }};
}

// Ordered so FormatConfig output is stable.
const std::vector<std::pair<std::string, Field>>& Fields() {
  using E = ExperimentConfig;
  using S = ScenarioConfig;
  using M = MatchConfig;
  using I = IcpConfig;
  using V = EvalConfig;
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"seed", Number(&E::scenario, &S::seed)},
      {"num_objects", Number(&E::scenario, &S::num_objects)},
      {"num_agents", Number(&E::scenario, &S::num_agents)},
      {"world_extent", Number(&E::scenario, &S::world_extent)},
      {"num_frames", Number(&E::scenario, &S::num_frames)},
      {"frame_dt", Number(&E::scenario, &S::frame_dt)},
      {"sensing_radius", Number(&E::scenario, &S::sensing_radius)},
      {"p_miss", Number(&E::scenario, &S::p_miss)},
      {"fp_rate", Number(&E::scenario, &S::fp_rate)},
      {"det_sigma_xy", Number(&E::scenario, &S::det_sigma_xy)},
      {"det_sigma_yaw", Number(&E::scenario, &S::det_sigma_yaw)},
      {"det_sigma_dim", Number(&E::scenario, &S::det_sigma_dim)},
      {"track_reset_frames", Number(&E::scenario, &S::track_reset_frames)},
      {"object_speed_min", Number(&E::scenario, &S::object_speed_min)},
      {"object_speed_max", Number(&E::scenario, &S::object_speed_max)},
      {"object_max_turn_rate", Number(&E::scenario, &S::object_max_turn_rate)},
      {"agent_speed_max", Number(&E::scenario, &S::agent_speed_max)},
      {"agent_max_turn_rate", Number(&E::scenario, &S::agent_max_turn_rate)},
      {"max_agent_separation", Number(&E::scenario, &S::max_agent_separation)},
      {"loc_sigma_t", Number(&E::scenario, &S::loc_sigma_t)},
      {"loc_sigma_r", Number(&E::scenario, &S::loc_sigma_r)},
      {"spoof_attack", Flag(&E::scenario, &S::spoof_attack)},
      {"gamma_v", Number(&E::match, &M::gamma_v)},
      {"gamma_e", Number(&E::match, &M::gamma_e)},
      {"sigma_dim", Number(&E::match, &M::sigma_dim)},
      {"sigma_rho", Number(&E::match, &M::sigma_rho)},
      {"sigma_theta", Number(&E::match, &M::sigma_theta)},
      {"sigma_psi", Number(&E::match, &M::sigma_psi)},
      {"max_candidates", Number(&E::match, &M::max_candidates)},
      {"use_edge_checks", Flag(&E::match, &M::use_edge_checks)},
      {"icp_max_iterations", Number(&E::icp, &I::max_iterations)},
      {"icp_convergence_tol", Number(&E::icp, &I::convergence_tol)},
      {"icp_max_pair_dist", Number(&E::icp, &I::max_pair_dist)},
      {"icp_boundary_samples", Number(&E::icp, &I::boundary_samples_per_box)},
      {"success_trans_error", Number(&E::eval, &V::success_trans_error)},
      {"success_rot_error", Number(&E::eval, &V::success_rot_error)},
      {"num_seeds", Number(&E::eval, &V::num_seeds)},
  };
  return fields;
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void ExperimentConfig::Validate() const {
  scenario.Validate();
  match.Validate();
  icp.Validate();
  if (!(eval.success_trans_error > 0.0) || !(eval.success_rot_error > 0.0)) {
    throw ConfigError("success thresholds must be positive");
  }
  if (eval.num_seeds < 1) throw ConfigError("num_seeds must be positive");
}

KeyValues ParseKeyValues(std::string_view text) {
  KeyValues out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": missing '='");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::string(key), std::string(Trim(line.substr(eq + 1))));
  }
  return out;
}

std::string FormatKeyValues(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

void SetConfigValue(ExperimentConfig& cfg, std::string_view key,
                    std::string_view value) {
  for (const auto& [name, field] : Fields()) {
    if (name == key) {
      field.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig ParseConfig(std::string_view text, ExperimentConfig base) {
  for (const auto& [k, v] : ParseKeyValues(text)) SetConfigValue(base, k, v);
  base.Validate();
  return base;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseConfig(ss.str());
}

KeyValues FormatConfig(const ExperimentConfig& cfg) {
  KeyValues out;
  for (const auto& [name, field] : Fields()) out.emplace_back(name, field.get(cfg));
  return out;
}

}  // namespace bevglue
