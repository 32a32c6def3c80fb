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

#ifndef BEVGLUE_HARNESS_H_
#define BEVGLUE_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bevglue/config.h"
#include "bevglue/sim.h"

namespace bevglue {

enum class Method { kBevGlue, kIcp, kReportedPose };

std::string_view MethodName(Method m);
// Accepts "bevglue", "icp", "reported-pose-only". Throws ConfigError.
Method ParseMethod(std::string_view name);

// Bytes a collaborator sends per frame for the two baselines.
inline constexpr std::uint64_t kPointBytes = 8;         // two f32
inline constexpr std::uint64_t kPoseMessageBytes = 26;  // header + 3 f32

struct FrameMetrics {
  std::uint64_t seed = 0;
  int timestep = 0;
  int agent_i = 0;
  int agent_j = 0;
  // At least two objects are detected by both agents.
  bool valid = false;
  std::size_t num_covisible = 0;
  std::size_t num_matched = 0;
  std::size_t num_correct = 0;
  std::optional<double> match_precision;  // absent when nothing matched
  std::optional<double> match_recall;     // absent when nothing co-visible
  bool estimated = false;
  double trans_error = 0.0;  // +inf when no estimate
  double rot_error = 0.0;
  std::uint64_t bytes_sent = 0;
  // Tracks of agent i whose partner changed since the previous frame.
  std::size_t churn = 0;
};

struct RunSummary {
  Method method = Method::kBevGlue;
  std::size_t num_frames = 0;
  std::size_t num_valid = 0;
  double invalid_fraction = 0.0;
  double median_trans_error = 0.0;
  double mean_trans_error = 0.0;  // over valid frames with an estimate
  double median_rot_error = 0.0;
  double mean_rot_error = 0.0;
  double success_rate = 0.0;
  std::uint64_t total_bytes = 0;
  double log2_bytes = 0.0;
  std::optional<double> match_precision;  // pooled over valid frames
  std::optional<double> match_recall;
  double churn_per_frame = 0.0;
  double matcher_fps = 0.0;  // wall clock; never written to result files
};

struct RunOptions {
  // Thread the previous frame's match into the next one.
  bool tracking = true;
};

// Runs one method over every frame and collaborator of `s`. Adds the time
// spent building graphs and matching to `matcher_seconds` when given.
std::vector<FrameMetrics> EvaluateScenario(const Scenario& s,
                                           const ExperimentConfig& cfg,
                                           Method method, RunOptions opts,
                                           double* matcher_seconds = nullptr);

RunSummary Summarize(std::span<const FrameMetrics> frames,
                     const ExperimentConfig& cfg, Method method,
                     double matcher_seconds);

struct ExperimentResult {
  std::vector<FrameMetrics> frames;
  RunSummary summary;
};

// Evaluates eval.num_seeds consecutive seeds. When `out_dir` is given writes
// frames.csv and summary.txt there.
ExperimentResult RunExperiment(
    const ExperimentConfig& cfg, Method method,
    const std::optional<std::filesystem::path>& out_dir = std::nullopt,
    RunOptions opts = {});

std::string FramesCsv(std::span<const FrameMetrics> frames);
std::string SummaryText(const RunSummary& s);

enum class SweepAxis { kLocNoise, kDetNoise, kBandwidth, kAttack };

SweepAxis ParseSweepAxis(std::string_view name);
std::string_view SweepAxisName(SweepAxis a);

// Applies one sweep value. kLocNoise sets loc_sigma_t = v metres and
// loc_sigma_r = v degrees; kDetNoise sets det_sigma_xy; kBandwidth sets the
// ICP samples per box; kAttack toggles spoofing (0 or 1).
ExperimentConfig ApplySweepValue(ExperimentConfig cfg, SweepAxis axis,
                                 double value);

struct SweepRow {
  std::string label;
  double value = 0.0;
  RunSummary summary;
};

// One RunExperiment per value. Throws ConfigError for an empty value list.
// Writes sweep.csv into `out_dir` when given.
std::vector<SweepRow> Sweep(
    const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
    Method method,
    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Matcher variants: node affinity only, + geometric pattern, + tracking.
// Writes ablation.csv into `out_dir` when given.
std::vector<SweepRow> Ablate(
    const ExperimentConfig& base,
    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::string SummaryCsv(std::string_view key_column,
                       std::span<const SweepRow> rows);

void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace bevglue

#endif  // BEVGLUE_HARNESS_H_
