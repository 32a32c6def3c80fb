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

#include "bevglue/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "bevglue/errors.h"
#include "bevglue/icp.h"
#include "bevglue/matching.h"
#include "bevglue/object_graph.h"
#include "bevglue/pose.h"
#include "bevglue/wire.h"

namespace bevglue {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Sig9(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string Opt(const std::optional<double>& v) { return v ? Sig9(*v) : ""; }

double Median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  if (std::isinf(v[mid])) return v[mid];
  return 0.5 * (v[mid - 1] + v[mid]);
}

void SetPoseError(FrameMetrics& fm, const Se2Pose& estimate,
                  const Se2Pose& truth) {
  fm.estimated = true;
  fm.trans_error = Distance(estimate.translation(), truth.translation());
  fm.rot_error = std::abs(WrapAngle(estimate.theta() - truth.theta()));
}

// Number of agent-i tracks matched in `before` that are still present in `gi`
// but whose partner differs in `after`.
std::size_t Churn(const CommonSubgraph& before, const CommonSubgraph& after,
                  const ObjectGraph& gi) {
  std::map<TrackId, TrackId> now;
  for (const TrackPair& tp : after.track_pairs) now.emplace(tp.i, tp.j);
  std::size_t churn = 0;
  for (const TrackPair& tp : before.track_pairs) {
    if (!gi.FindTrack(tp.i)) continue;
    const auto it = now.find(tp.i);
    if (it == now.end() || it->second != tp.j) ++churn;
  }
  return churn;
}

AlignmentMessage ToMessage(const Observation& obs) {
  AlignmentMessage m;
  m.sender_id = static_cast<std::uint32_t>(obs.agent_id);
  m.timestep = static_cast<std::uint32_t>(obs.timestep);
  m.boxes = obs.boxes;
  return m;
}

}  // namespace

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kBevGlue:
      return "bevglue";
    case Method::kIcp:
      return "icp";
    case Method::kReportedPose:
      return "reported-pose-only";
  }
  return "?";
}

Method ParseMethod(std::string_view name) {
  if (name == "bevglue") return Method::kBevGlue;
  if (name == "icp") return Method::kIcp;
  if (name == "reported-pose-only") return Method::kReportedPose;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::vector<FrameMetrics> EvaluateScenario(const Scenario& s,
                                           const ExperimentConfig& cfg,
                                           Method method, RunOptions opts,
                                           double* matcher_seconds) {
  using Clock = std::chrono::steady_clock;
  std::vector<FrameMetrics> out;
  const int agents = s.num_agents();
  std::vector<std::optional<CommonSubgraph>> prev(
      static_cast<std::size_t>(agents));

  for (int t = 0; t < s.num_frames(); ++t) {
    const Observation ego = Observe(s, 0, t);
    for (int j = 1; j < agents; ++j) {
      const Observation other = Observe(s, j, t);
      const std::vector<NodePair> truth = TrueCorrespondences(ego, other);
      const Se2Pose true_rel = TrueRelativePose(s, 0, j, t);

      FrameMetrics fm;
      fm.seed = s.config().seed;
      fm.timestep = t;
      fm.agent_i = 0;
      fm.agent_j = j;
      fm.num_covisible = truth.size();
      fm.valid = truth.size() >= 2;
      fm.trans_error = kInf;
      fm.rot_error = kInf;

      switch (method) {
        case Method::kBevGlue: {
          // The collaborator's boxes take the wire round trip.
          const std::vector<std::uint8_t> bytes = Encode(ToMessage(other));
          fm.bytes_sent = bytes.size();
          const AlignmentMessage received = Decode(bytes);

          const auto start = Clock::now();
          const ObjectGraph gi = BuildObjectGraph(ego.boxes);
          const ObjectGraph gj = BuildObjectGraph(received.boxes);
          auto& state = prev[static_cast<std::size_t>(j)];
          const CommonSubgraph match = Match(
              gi, gj, opts.tracking ? state : std::nullopt, cfg.match);
          if (matcher_seconds) {
            *matcher_seconds +=
                std::chrono::duration<double>(Clock::now() - start).count();
          }

          if (state) fm.churn = Churn(*state, match, gi);
          fm.num_matched = match.size();
          const std::set<NodePair> truth_set(truth.begin(), truth.end());
          for (const NodePair& p : match.pairs) {
            fm.num_correct += truth_set.count(p);
          }
          if (fm.num_matched > 0) {
            fm.match_precision = static_cast<double>(fm.num_correct) /
                                 static_cast<double>(fm.num_matched);
          }
          if (!truth.empty()) {
            fm.match_recall = static_cast<double>(fm.num_correct) /
                              static_cast<double>(truth.size());
          }
          if (match.size() >= 2) {
            try {
              SetPoseError(fm, EstimateRelativePose(gi, gj, match).pose,
                           true_rel);
            } catch (const DegenerateError&) {
            }
          }
          state = match;
          break;
        }
        case Method::kIcp: {
          const std::vector<Point2> source =
              BoxPoints(other.boxes, cfg.icp.boundary_samples_per_box);
          const std::vector<Point2> target =
              BoxPoints(ego.boxes, cfg.icp.boundary_samples_per_box);
          fm.bytes_sent = kHeaderBytes + kPointBytes * source.size();
          if (!source.empty() && !target.empty()) {
            const Se2Pose init = Compose(Inverse(ReportedPose(s, 0, t)),
                                         ReportedPose(s, j, t));
            SetPoseError(fm, Icp2d(source, target, init, cfg.icp).pose,
                         true_rel);
          }
          break;
        }
        case Method::kReportedPose: {
          fm.bytes_sent = kPoseMessageBytes;
          SetPoseError(fm,
                       Compose(Inverse(ReportedPose(s, 0, t)),
                               ReportedPose(s, j, t)),
                       true_rel);
          break;
        }
      }
      out.push_back(fm);
    }
  }
  return out;
}

RunSummary Summarize(std::span<const FrameMetrics> frames,
                     const ExperimentConfig& cfg, Method method,
                     double matcher_seconds) {
  RunSummary r;
  r.method = method;
  r.num_frames = frames.size();
  std::vector<double> trans, rot;
  double trans_sum = 0.0, rot_sum = 0.0;
  std::size_t finite = 0, successes = 0;
  std::size_t matched = 0, correct = 0, covisible = 0, churn = 0;
  for (const FrameMetrics& f : frames) {
    r.total_bytes += f.bytes_sent;
    churn += f.churn;
    if (!f.valid) continue;
    ++r.num_valid;
    trans.push_back(f.trans_error);
    rot.push_back(f.rot_error);
    if (f.estimated) {
      ++finite;
      trans_sum += f.trans_error;
      rot_sum += f.rot_error;
    }
    if (f.estimated && f.trans_error <= cfg.eval.success_trans_error &&
        f.rot_error <= cfg.eval.success_rot_error) {
      ++successes;
    }
    matched += f.num_matched;
    correct += f.num_correct;
    covisible += f.num_covisible;
  }
  r.invalid_fraction =
      frames.empty() ? 0.0
                     : static_cast<double>(frames.size() - r.num_valid) /
                           static_cast<double>(frames.size());
  r.median_trans_error = Median(trans);
  r.median_rot_error = Median(rot);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.mean_trans_error = finite ? trans_sum / static_cast<double>(finite) : nan;
  r.mean_rot_error = finite ? rot_sum / static_cast<double>(finite) : nan;
  r.success_rate = r.num_valid ? static_cast<double>(successes) /
                                     static_cast<double>(r.num_valid)
                               : nan;
  r.log2_bytes = MakeBandwidthReport(r.total_bytes).log2_bytes;
  if (method == Method::kBevGlue) {
    if (matched > 0) {
      r.match_precision =
          static_cast<double>(correct) / static_cast<double>(matched);
    }
    if (covisible > 0) {
      r.match_recall =
          static_cast<double>(correct) / static_cast<double>(covisible);
    }
  }
  r.churn_per_frame =
      frames.empty() ? 0.0
                     : static_cast<double>(churn) /
                           static_cast<double>(frames.size());
  r.matcher_fps = matcher_seconds > 0.0
                      ? static_cast<double>(frames.size()) / matcher_seconds
                      : 0.0;
  return r;
}

ExperimentResult RunExperiment(
    const ExperimentConfig& cfg, Method method,
    const std::optional<std::filesystem::path>& out_dir, RunOptions opts) {
  cfg.Validate();
  ExperimentResult result;
  double seconds = 0.0;
  for (int k = 0; k < cfg.eval.num_seeds; ++k) {
    ScenarioConfig sc = cfg.scenario;
    sc.seed = cfg.scenario.seed + static_cast<std::uint64_t>(k);
    const Scenario s = GenerateScenario(sc);
    std::vector<FrameMetrics> f =
        EvaluateScenario(s, cfg, method, opts, &seconds);
    result.frames.insert(result.frames.end(), f.begin(), f.end());
  }
  result.summary = Summarize(result.frames, cfg, method, seconds);
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    WriteTextFile(*out_dir / "frames.csv", FramesCsv(result.frames));
    WriteTextFile(*out_dir / "summary.txt", SummaryText(result.summary));
  }
  return result;
}

std::string FramesCsv(std::span<const FrameMetrics> frames) {
  std::string out =
      "seed,timestep,agent_i,agent_j,valid,num_covisible,num_matched,"
      "match_precision,match_recall,trans_error,rot_error,bytes_sent,churn\n";
  for (const FrameMetrics& f : frames) {
    out += std::to_string(f.seed) + "," + std::to_string(f.timestep) + "," +
           std::to_string(f.agent_i) + "," + std::to_string(f.agent_j) + "," +
           (f.valid ? "1" : "0") + "," + std::to_string(f.num_covisible) +
           "," + std::to_string(f.num_matched) + "," +
           Opt(f.match_precision) + "," + Opt(f.match_recall) + "," +
           Sig9(f.trans_error) + "," + Sig9(f.rot_error) + "," +
           std::to_string(f.bytes_sent) + "," + std::to_string(f.churn) +
           "\n";
  }
  return out;
}

std::string SummaryText(const RunSummary& s) {
  KeyValues kv = {
      {"method", std::string(MethodName(s.method))},
      {"num_frames", std::to_string(s.num_frames)},
      {"num_valid", std::to_string(s.num_valid)},
      {"invalid_fraction", Sig9(s.invalid_fraction)},
      {"median_trans_error", Sig9(s.median_trans_error)},
      {"mean_trans_error", Sig9(s.mean_trans_error)},
      {"median_rot_error", Sig9(s.median_rot_error)},
      {"mean_rot_error", Sig9(s.mean_rot_error)},
      {"success_rate", Sig9(s.success_rate)},
      {"total_bytes", std::to_string(s.total_bytes)},
      {"log2_bytes", Sig9(s.log2_bytes)},
      {"match_precision", Opt(s.match_precision)},
      {"match_recall", Opt(s.match_recall)},
      {"churn_per_frame", Sig9(s.churn_per_frame)},
  };
  return FormatKeyValues(kv);
}

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "loc_noise") return SweepAxis::kLocNoise;
  if (name == "det_noise") return SweepAxis::kDetNoise;
  if (name == "bandwidth") return SweepAxis::kBandwidth;
  if (name == "attack") return SweepAxis::kAttack;
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view SweepAxisName(SweepAxis a) {
  switch (a) {
    case SweepAxis::kLocNoise:
      return "loc_noise";
    case SweepAxis::kDetNoise:
      return "det_noise";
    case SweepAxis::kBandwidth:
      return "bandwidth";
    case SweepAxis::kAttack:
      return "attack";
  }
  return "?";
}

ExperimentConfig ApplySweepValue(ExperimentConfig cfg, SweepAxis axis,
                                 double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ConfigError("sweep values must be finite and non-negative");
  }
  switch (axis) {
    case SweepAxis::kLocNoise:
      cfg.scenario.loc_sigma_t = value;
      cfg.scenario.loc_sigma_r = value * kPi / 180.0;
      break;
    case SweepAxis::kDetNoise:
      cfg.scenario.det_sigma_xy = value;
      break;
    case SweepAxis::kBandwidth:
      if (value != std::floor(value)) {
        throw ConfigError("bandwidth sweep values are samples per box");
      }
      cfg.icp.boundary_samples_per_box = static_cast<int>(value);
      break;
    case SweepAxis::kAttack:
      if (value != 0.0 && value != 1.0) {
        throw ConfigError("attack sweep values must be 0 or 1");
      }
      cfg.scenario.spoof_attack = value == 1.0;
      break;
  }
  return cfg;
}

std::vector<SweepRow> Sweep(const ExperimentConfig& base, SweepAxis axis,
                            std::span<const double> values, Method method,
                            const std::optional<std::filesystem::path>& out_dir) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const double v : values) {
    const ExperimentConfig cfg = ApplySweepValue(base, axis, v);
    rows.push_back({std::string(SweepAxisName(axis)), v,
                    RunExperiment(cfg, method).summary});
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    WriteTextFile(*out_dir / "sweep.csv", SummaryCsv("axis", rows));
  }
  return rows;
}

std::vector<SweepRow> Ablate(const ExperimentConfig& base,
                             const std::optional<std::filesystem::path>& out_dir) {
  struct Variant {
    const char* name;
    bool edges;
    bool tracking;
  };
  constexpr Variant kVariants[] = {
      {"node-only", false, false},
      {"geometric", true, false},
      {"geometric+tracking", true, true},
  };
  std::vector<SweepRow> rows;
  double index = 0.0;
  for (const Variant& v : kVariants) {
    ExperimentConfig cfg = base;
    cfg.match.use_edge_checks = v.edges;
    rows.push_back({v.name, index++,
                    RunExperiment(cfg, Method::kBevGlue, std::nullopt,
                                  RunOptions{v.tracking})
                        .summary});
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    WriteTextFile(*out_dir / "ablation.csv", SummaryCsv("variant", rows));
  }
  return rows;
}

std::string SummaryCsv(std::string_view key_column,
                       std::span<const SweepRow> rows) {
  std::string out = std::string(key_column) +
                    ",value,method,num_frames,num_valid,median_trans_error,"
                    "mean_trans_error,median_rot_error,mean_rot_error,"
                    "success_rate,total_bytes,log2_bytes,match_precision,"
                    "match_recall,churn_per_frame\n";
  for (const SweepRow& r : rows) {
    const RunSummary& s = r.summary;
    out += r.label + "," + Sig9(r.value) + "," +
           std::string(MethodName(s.method)) + "," +
           std::to_string(s.num_frames) + "," + std::to_string(s.num_valid) +
           "," + Sig9(s.median_trans_error) + "," + Sig9(s.mean_trans_error) +
           "," + Sig9(s.median_rot_error) + "," + Sig9(s.mean_rot_error) +
           "," + Sig9(s.success_rate) + "," + std::to_string(s.total_bytes) +
           "," + Sig9(s.log2_bytes) + "," + Opt(s.match_precision) + "," +
           Opt(s.match_recall) + "," + Sig9(s.churn_per_frame) + "\n";
  }
  return out;
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace bevglue
