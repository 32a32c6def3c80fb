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

// Command-line front end: scenario generation, log matching, evaluation,
// sweeps and ablations. Errors go to stderr as one line,
//   error: <kind>: <message>
// with a nonzero exit status.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bevglue/config.h"
#include "bevglue/errors.h"
#include "bevglue/harness.h"
#include "bevglue/matching.h"
#include "bevglue/object_graph.h"
#include "bevglue/pose.h"
#include "bevglue/sim.h"
#include "bevglue/wire.h"

namespace fs = std::filesystem;
using namespace bevglue;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> frames;
  std::string out = ".";
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key=value config file");
  cmd->add_option("--seed", f.seed, "scenario seed (overrides config)");
  cmd->add_option("--frames", f.frames, "frames per scenario (overrides config)");
  cmd->add_option("--out", f.out, "output directory");
}

ExperimentConfig Resolve(const CommonFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : LoadConfig(f.config);
  if (f.seed) cfg.scenario.seed = *f.seed;
  if (f.frames) cfg.scenario.num_frames = *f.frames;
  cfg.Validate();
  return cfg;
}

std::vector<double> ParseValues(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad sweep value '" + item + "'");
    }
  }
  return out;
}

void PrintSummary(const RunSummary& s) {
  std::cout << SummaryText(s) << "matcher_fps=" << s.matcher_fps << "\n";
}

int Generate(const CommonFlags& f) {
  const ExperimentConfig cfg = Resolve(f);
  const Scenario s = GenerateScenario(cfg.scenario);
  fs::create_directories(f.out);
  std::uint64_t total = 0;
  for (int a = 0; a < s.num_agents(); ++a) {
    std::vector<AlignmentMessage> log;
    for (int t = 0; t < s.num_frames(); ++t) {
      const Observation obs = Observe(s, a, t);
      log.push_back({static_cast<std::uint32_t>(a),
                     static_cast<std::uint32_t>(t), obs.boxes});
    }
    total += MakeBandwidthReport(log).total_bytes;
    WriteReplayLog(fs::path(f.out) / ("agent_" + std::to_string(a) + ".bglog"),
                   log);
  }
  KeyValues kv = FormatConfig(cfg);
  WriteTextFile(fs::path(f.out) / "scenario.txt", FormatKeyValues(kv));
  std::cout << "agents=" << s.num_agents() << "\nframes=" << s.num_frames()
            << "\ntotal_bytes=" << total << "\nlog2_bytes="
            << MakeBandwidthReport(total).log2_bytes << "\n";
  return 0;
}

int MatchLogs(const CommonFlags& f, const std::string& log_i,
              const std::string& log_j, bool tracking) {
  const ExperimentConfig cfg = Resolve(f);
  const std::vector<AlignmentMessage> a = ReadReplayLog(log_i);
  const std::vector<AlignmentMessage> b = ReadReplayLog(log_j);
  std::map<std::uint32_t, const AlignmentMessage*> by_time;
  for (const AlignmentMessage& m : b) by_time[m.timestep] = &m;

  std::string csv =
      "timestep,num_matched,confidence,theta,tx,ty,residual_rms,track_pairs\n";
  std::optional<CommonSubgraph> prev;
  for (const AlignmentMessage& mi : a) {
    const auto it = by_time.find(mi.timestep);
    if (it == by_time.end()) continue;
    const ObjectGraph gi = BuildObjectGraph(mi.boxes);
    const ObjectGraph gj = BuildObjectGraph(it->second->boxes);
    const CommonSubgraph match =
        Match(gi, gj, tracking ? prev : std::nullopt, cfg.match);
    prev = match;
    std::string pose_cols = ",,,";
    if (match.size() >= 2) {
      try {
        const PoseEstimate est = EstimateRelativePose(gi, gj, match);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g",
                      est.pose.theta(), est.pose.tx(), est.pose.ty(),
                      est.residual_rms);
        pose_cols = buf;
      } catch (const DegenerateError&) {
      }
    }
    std::string pairs;
    for (const TrackPair& tp : match.track_pairs) {
      if (!pairs.empty()) pairs += ";";
      pairs += std::to_string(tp.i) + ":" + std::to_string(tp.j);
    }
    char conf[32];
    std::snprintf(conf, sizeof(conf), "%.9g", match.confidence);
    csv += std::to_string(mi.timestep) + "," + std::to_string(match.size()) +
           "," + conf + "," + pose_cols + "," + pairs + "\n";
  }
  fs::create_directories(f.out);
  WriteTextFile(fs::path(f.out) / "matches.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BEVGlue spatial alignment toolkit"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string method = "bevglue";
  std::string axis;
  std::string values;
  std::string log_i, log_j;
  bool no_tracking = false;

  auto* gen = app.add_subcommand("generate", "scenario -> per-agent replay logs");
  AddCommon(gen, common);

  auto* match = app.add_subcommand("match", "two replay logs -> matches + pose");
  AddCommon(match, common);
  match->add_option("log_i", log_i, "ego agent replay log")->required();
  match->add_option("log_j", log_j, "collaborator replay log")->required();
  match->add_flag("--no-tracking", no_tracking, "do not thread matches in time");

  auto* eval = app.add_subcommand("evaluate", "run one method, write CSV");
  AddCommon(eval, common);
  eval->add_option("--method", method, "bevglue | icp | reported-pose-only");

  auto* sweep = app.add_subcommand("sweep", "one evaluation per axis value");
  AddCommon(sweep, common);
  sweep->add_option("--method", method, "bevglue | icp | reported-pose-only");
  sweep->add_option("--axis", axis, "loc_noise | det_noise | bandwidth | attack")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")->required();

  auto* ablate = app.add_subcommand("ablate", "matcher ablation table");
  AddCommon(ablate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*gen) return Generate(common);
    if (*match) return MatchLogs(common, log_i, log_j, !no_tracking);
    if (*eval) {
      const ExperimentResult r =
          RunExperiment(Resolve(common), ParseMethod(method), fs::path(common.out));
      PrintSummary(r.summary);
      return 0;
    }
    if (*sweep) {
      const std::vector<double> v = ParseValues(values);
      const auto rows = Sweep(Resolve(common), ParseSweepAxis(axis), v,
                              ParseMethod(method), fs::path(common.out));
      for (const SweepRow& r : rows) {
        std::cout << r.label << "=" << r.value
                  << " matcher_fps=" << r.summary.matcher_fps << "\n";
      }
      return 0;
    }
    if (*ablate) {
      const auto rows = Ablate(Resolve(common), fs::path(common.out));
      std::cout << SummaryCsv("variant", rows);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 3;
  } catch (const DecodeError& e) {
    std::cerr << "error: decode: " << e.what() << "\n";
    return 4;
  } catch (const GenerationError& e) {
    std::cerr << "error: generation: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
