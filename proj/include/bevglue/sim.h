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

#ifndef BEVGLUE_SIM_H_
#define BEVGLUE_SIM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bevglue/geometry.h"
#include "bevglue/matching.h"
#include "bevglue/object_graph.h"

namespace bevglue {

// Everything needed to regenerate a synthetic multi-agent scene.
struct ScenarioConfig {
  std::uint64_t seed = 0;
  int num_objects = 10;
  int num_agents = 2;
  double world_extent = 80.0;  // side of the square objects start in, m
  int num_frames = 100;
  double frame_dt = 0.1;  // s
  double sensing_radius = 40.0;

  // Detector / tracker stand-in.
  double p_miss = 0.1;
  double fp_rate = 0.5;  // expected false positives per frame
  double det_sigma_xy = 0.2;
  double det_sigma_yaw = 0.02;
  double det_sigma_dim = 0.05;
  int track_reset_frames = 3;

  // Motion.
  double object_speed_min = 0.0;  // m/s
  double object_speed_max = 3.0;
  double object_max_turn_rate = 0.1;  // rad/s
  double agent_speed_max = 2.0;
  double agent_max_turn_rate = 0.05;
  double max_agent_separation = 20.0;

  // Localization channel, read only by baselines.
  double loc_sigma_t = 0.0;  // m
  double loc_sigma_r = 0.0;  // rad
  bool spoof_attack = false;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

inline constexpr double kMinObjectSeparation = 2.0;

struct ObjectState {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double l = 0.0;
  double w = 0.0;
  std::uint32_t id = 0;

  Point2 position() const { return {x, y}; }
};

struct Observation {
  int agent_id = 0;
  int timestep = 0;
  std::vector<TrackedBox> boxes;
  // Global object id per box; empty for false positives.
  std::vector<std::optional<std::uint32_t>> truth;
};

// Immutable generated world. Ground truth is fixed at generation; detector
// noise is drawn on demand from per-(agent, frame) streams so any frame can
// be observed in any order.
class Scenario {
 public:
  const ScenarioConfig& config() const { return config_; }
  int num_frames() const { return config_.num_frames; }
  int num_agents() const { return config_.num_agents; }

  std::span<const ObjectState> objects(int t) const;
  const Se2Pose& agent_pose(int agent, int t) const;

  // Track id the agent's tracker holds for `object` at frame t, or nullopt if
  // the object was not detected.
  std::optional<TrackId> track(int agent, int t, int object) const;

  friend Scenario GenerateScenario(const ScenarioConfig& cfg);

 private:
  ScenarioConfig config_;
  std::vector<std::vector<ObjectState>> objects_;  // [t][object]
  std::vector<std::vector<Se2Pose>> agents_;       // [agent][t]
  std::vector<std::optional<TrackId>> tracks_;     // [agent][t][object]
  Se2Pose attacker_pose_;

  friend Se2Pose ReportedPose(const Scenario& s, int agent, int t);
};

// Throws GenerationError when objects or agents cannot be placed within the
// retry budget.
Scenario GenerateScenario(const ScenarioConfig& cfg);

Observation Observe(const Scenario& s, int agent, int t);

// Pose the agent's localization system claims. Under the spoofing attack all
// agents claim the same attacker-chosen pose.
Se2Pose ReportedPose(const Scenario& s, int agent, int t);

// Transform carrying agent j's frame into agent i's frame.
Se2Pose TrueRelativePose(const Scenario& s, int agent_i, int agent_j, int t);

// Box index pairs (in obs_i, in obs_j) that see the same object.
std::vector<NodePair> TrueCorrespondences(const Observation& obs_i,
                                          const Observation& obs_j);

// First track id issued to false positives; object tracks stay below it.
inline constexpr TrackId kFalsePositiveTrackBase = 0x80000000u;
inline constexpr int kMaxFalsePositivesPerFrame = 64;

}  // namespace bevglue

#endif  // BEVGLUE_SIM_H_
