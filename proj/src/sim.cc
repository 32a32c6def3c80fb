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

#include "bevglue/sim.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "bevglue/errors.h"
#include "bevglue/random.h"

namespace bevglue {
namespace {

enum Purpose : std::uint64_t {
  kWorld = 1,
  kMiss = 2,
  kDetect = 3,
  kPose = 4,
  kAttack = 5,
};

constexpr int kPlacementRetries = 1000;
constexpr int kAgentRetries = 200;

struct Unicycle {
  double x0, y0, yaw0, speed, turn_rate;

  // Closed-form constant speed, constant turn rate motion.
  void At(double t, double& x, double& y, double& yaw) const {
    yaw = yaw0 + turn_rate * t;
    if (std::abs(turn_rate) < 1e-9) {
      x = x0 + speed * t * std::cos(yaw0);
      y = y0 + speed * t * std::sin(yaw0);
    } else {
      const double r = speed / turn_rate;
      x = x0 + r * (std::sin(yaw) - std::sin(yaw0));
      y = y0 - r * (std::cos(yaw) - std::cos(yaw0));
    }
    yaw = WrapAngle(yaw);
  }
};

void Require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("ScenarioConfig: ") + what);
}

// Passenger car most of the time, otherwise a truck or bus.
void SampleDimensions(Rng& rng, double& l, double& w) {
  if (rng.Uniform() < 0.8) {
    l = rng.Uniform(3.8, 5.2);
    w = rng.Uniform(1.6, 2.1);
  } else {
    l = rng.Uniform(6.0, 12.0);
    w = rng.Uniform(2.3, 2.6);
  }
}

}  // namespace

void ScenarioConfig::Validate() const {
  Require(num_objects >= 0, "num_objects must be non-negative");
  Require(num_agents >= 2, "num_agents must be at least 2");
  Require(num_frames >= 1, "num_frames must be positive");
  Require(world_extent > 0.0, "world_extent must be positive");
  Require(frame_dt > 0.0, "frame_dt must be positive");
  Require(sensing_radius > 0.0, "sensing_radius must be positive");
  Require(p_miss >= 0.0 && p_miss <= 1.0, "p_miss must lie in [0, 1]");
  Require(fp_rate >= 0.0, "fp_rate must be non-negative");
  Require(det_sigma_xy >= 0.0 && det_sigma_yaw >= 0.0 && det_sigma_dim >= 0.0,
          "detection sigmas must be non-negative");
  Require(loc_sigma_t >= 0.0 && loc_sigma_r >= 0.0,
          "localization sigmas must be non-negative");
  Require(track_reset_frames >= 1, "track_reset_frames must be positive");
  Require(object_speed_min >= 0.0 && object_speed_max >= object_speed_min,
          "object speed range is empty");
  Require(object_max_turn_rate >= 0.0 && agent_max_turn_rate >= 0.0 &&
              agent_speed_max >= 0.0,
          "motion bounds must be non-negative");
  Require(max_agent_separation > 0.0 &&
              max_agent_separation <= sensing_radius,
          "max_agent_separation must lie in (0, sensing_radius]");
}

std::span<const ObjectState> Scenario::objects(int t) const {
  return objects_.at(static_cast<std::size_t>(t));
}

const Se2Pose& Scenario::agent_pose(int agent, int t) const {
  return agents_.at(static_cast<std::size_t>(agent))
      .at(static_cast<std::size_t>(t));
}

std::optional<TrackId> Scenario::track(int agent, int t, int object) const {
  const std::size_t n = static_cast<std::size_t>(config_.num_objects);
  const std::size_t f = static_cast<std::size_t>(config_.num_frames);
  return tracks_.at((static_cast<std::size_t>(agent) * f +
                     static_cast<std::size_t>(t)) * n +
                    static_cast<std::size_t>(object));
}

Scenario GenerateScenario(const ScenarioConfig& cfg) {
  cfg.Validate();
  Scenario s;
  s.config_ = cfg;
  const int frames = cfg.num_frames;
  const auto frame_time = [&](int t) { return t * cfg.frame_dt; };
  Rng rng(StreamSeed(cfg.seed, kWorld));

  // Agents: the first near the middle, the others around it, every pair
  // within communication range for the whole run.
  s.agents_.assign(static_cast<std::size_t>(cfg.num_agents), {});
  const double half = 0.5 * cfg.world_extent;
  bool placed = false;
  for (int attempt = 0; attempt < kAgentRetries && !placed; ++attempt) {
    std::vector<Unicycle> motion;
    for (int a = 0; a < cfg.num_agents; ++a) {
      double x, y;
      if (a == 0) {
        x = rng.Uniform(-0.25 * half, 0.25 * half);
        y = rng.Uniform(-0.25 * half, 0.25 * half);
      } else {
        const double r = rng.Uniform(0.25, 1.0) * cfg.max_agent_separation;
        const double b = rng.Uniform(-kPi, kPi);
        x = motion[0].x0 + r * std::cos(b);
        y = motion[0].y0 + r * std::sin(b);
      }
      motion.push_back({x, y, rng.Uniform(-kPi, kPi),
                        rng.Uniform(0.0, cfg.agent_speed_max),
                        rng.Uniform(-cfg.agent_max_turn_rate,
                                    cfg.agent_max_turn_rate)});
    }
    std::vector<std::vector<Se2Pose>> poses(motion.size());
    placed = true;
    for (int t = 0; t < frames && placed; ++t) {
      for (std::size_t a = 0; a < motion.size(); ++a) {
        double x, y, yaw;
        motion[a].At(frame_time(t), x, y, yaw);
        poses[a].emplace_back(yaw, x, y);
      }
      for (std::size_t a = 0; a < motion.size() && placed; ++a) {
        for (std::size_t b = a + 1; b < motion.size() && placed; ++b) {
          placed = Distance(poses[a].back().translation(),
                            poses[b].back().translation()) <=
                   cfg.max_agent_separation;
        }
      }
    }
    if (placed) s.agents_ = std::move(poses);
  }
  if (!placed) throw GenerationError("could not keep agents within range");

  // Objects: rejection sampling against every earlier trajectory.
  s.objects_.assign(static_cast<std::size_t>(frames), {});
  for (int o = 0; o < cfg.num_objects; ++o) {
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
      const Unicycle m{rng.Uniform(-half, half), rng.Uniform(-half, half),
                       rng.Uniform(-kPi, kPi),
                       rng.Uniform(cfg.object_speed_min, cfg.object_speed_max),
                       rng.Uniform(-cfg.object_max_turn_rate,
                                   cfg.object_max_turn_rate)};
      double l, w;
      SampleDimensions(rng, l, w);
      std::vector<ObjectState> track(static_cast<std::size_t>(frames));
      ok = true;
      for (int t = 0; t < frames && ok; ++t) {
        ObjectState& st = track[static_cast<std::size_t>(t)];
        m.At(frame_time(t), st.x, st.y, st.yaw);
        st.l = l;
        st.w = w;
        st.id = static_cast<std::uint32_t>(o);
        for (const ObjectState& other : s.objects_[static_cast<std::size_t>(t)]) {
          if (Distance(other.position(), st.position()) < kMinObjectSeparation) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        for (int t = 0; t < frames; ++t) {
          s.objects_[static_cast<std::size_t>(t)].push_back(
              track[static_cast<std::size_t>(t)]);
        }
      }
    }
    if (!ok) {
      throw GenerationError("could not place object " + std::to_string(o) +
                            " with minimum separation");
    }
  }

  // Detection events and tracker identities. An object keeps its id while it
  // is re-detected within track_reset_frames frames.
  const std::size_t num_obj = static_cast<std::size_t>(cfg.num_objects);
  s.tracks_.assign(static_cast<std::size_t>(cfg.num_agents) *
                       static_cast<std::size_t>(frames) * num_obj,
                   std::nullopt);
  for (int a = 0; a < cfg.num_agents; ++a) {
    TrackId next_id = 0;
    std::vector<std::optional<TrackId>> last(num_obj);
    std::vector<int> gap(num_obj, 0);
    for (int t = 0; t < frames; ++t) {
      Rng miss(StreamSeed(cfg.seed, kMiss, static_cast<std::uint64_t>(a),
                          static_cast<std::uint64_t>(t)));
      const Point2 here = s.agent_pose(a, t).translation();
      for (std::size_t o = 0; o < num_obj; ++o) {
        const bool missed = miss.Uniform() < cfg.p_miss;
        const bool visible =
            Distance(here, s.objects_[static_cast<std::size_t>(t)][o].position()) <=
            cfg.sensing_radius;
        if (!visible || missed) {
          ++gap[o];
          continue;
        }
        if (!last[o] || gap[o] >= cfg.track_reset_frames) last[o] = next_id++;
        gap[o] = 0;
        s.tracks_[(static_cast<std::size_t>(a) * static_cast<std::size_t>(frames) +
                   static_cast<std::size_t>(t)) * num_obj + o] = last[o];
      }
    }
  }

  Rng attack(StreamSeed(cfg.seed, kAttack));
  s.attacker_pose_ = Se2Pose(attack.Uniform(-kPi, kPi),
                             attack.Uniform(-half, half),
                             attack.Uniform(-half, half));
  return s;
}

Observation Observe(const Scenario& s, int agent, int t) {
  const ScenarioConfig& cfg = s.config();
  Observation obs;
  obs.agent_id = agent;
  obs.timestep = t;
  Rng rng(StreamSeed(cfg.seed, kDetect, static_cast<std::uint64_t>(agent),
                     static_cast<std::uint64_t>(t)));
  const Se2Pose to_agent = Inverse(s.agent_pose(agent, t));
  const auto objects = s.objects(t);
  for (std::size_t o = 0; o < objects.size(); ++o) {
    const auto id = s.track(agent, t, static_cast<int>(o));
    if (!id) continue;
    const ObjectState& st = objects[o];
    const Point2 c = Apply(to_agent, st.position());
    TrackedBox b;
    b.x = c.x() + rng.Normal(cfg.det_sigma_xy);
    b.y = c.y() + rng.Normal(cfg.det_sigma_xy);
    b.yaw = WrapAngle(st.yaw - s.agent_pose(agent, t).theta() +
                      rng.Normal(cfg.det_sigma_yaw));
    b.l = std::max(0.1, st.l + rng.Normal(cfg.det_sigma_dim));
    b.w = std::max(0.1, st.w + rng.Normal(cfg.det_sigma_dim));
    b.track_id = *id;
    obs.boxes.push_back(b);
    obs.truth.emplace_back(st.id);
  }

  const int fps = std::min(rng.Poisson(cfg.fp_rate), kMaxFalsePositivesPerFrame);
  for (int k = 0; k < fps; ++k) {
    const double r = cfg.sensing_radius * std::sqrt(rng.Uniform());
    const double bearing = rng.Uniform(-kPi, kPi);
    TrackedBox b;
    b.x = r * std::cos(bearing);
    b.y = r * std::sin(bearing);
    b.yaw = rng.Uniform(-kPi, kPi);
    SampleDimensions(rng, b.l, b.w);
    b.track_id = kFalsePositiveTrackBase +
                 static_cast<TrackId>(t) * kMaxFalsePositivesPerFrame +
                 static_cast<TrackId>(k);
    obs.boxes.push_back(b);
    obs.truth.emplace_back(std::nullopt);
  }

  // Detector output order carries no identity information.
  for (std::size_t k = obs.boxes.size(); k > 1; --k) {
    const std::size_t j = rng.Index(k);
    std::swap(obs.boxes[k - 1], obs.boxes[j]);
    std::swap(obs.truth[k - 1], obs.truth[j]);
  }
  return obs;
}

Se2Pose ReportedPose(const Scenario& s, int agent, int t) {
  const ScenarioConfig& cfg = s.config();
  if (cfg.spoof_attack) return s.attacker_pose_;
  const Se2Pose& truth = s.agent_pose(agent, t);
  Rng rng(StreamSeed(cfg.seed, kPose, static_cast<std::uint64_t>(agent),
                     static_cast<std::uint64_t>(t)));
  const double dx = rng.Normal(cfg.loc_sigma_t);
  const double dy = rng.Normal(cfg.loc_sigma_t);
  const double dr = rng.Normal(cfg.loc_sigma_r);
  return {truth.theta() + dr, truth.tx() + dx, truth.ty() + dy};
}

Se2Pose TrueRelativePose(const Scenario& s, int agent_i, int agent_j, int t) {
  return Compose(Inverse(s.agent_pose(agent_i, t)), s.agent_pose(agent_j, t));
}

std::vector<NodePair> TrueCorrespondences(const Observation& obs_i,
                                          const Observation& obs_j) {
  std::vector<NodePair> out;
  for (std::size_t a = 0; a < obs_i.truth.size(); ++a) {
    if (!obs_i.truth[a]) continue;
    for (std::size_t b = 0; b < obs_j.truth.size(); ++b) {
      if (obs_j.truth[b] == obs_i.truth[a]) out.push_back({a, b});
    }
  }
  return out;
}

}  // namespace bevglue
