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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "bevglue/config.h"
#include "bevglue/harness.h"
#include "bevglue/matching.h"
#include "bevglue/object_graph.h"
#include "bevglue/pose.h"
#include "bevglue/random.h"
#include "bevglue/sim.h"
#include "bevglue/wire.h"
#include "test_util.h"

namespace bevglue {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::AngleGap;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

double Median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExperimentConfig Corpus(int seeds) {
  ExperimentConfig cfg;
  cfg.scenario.num_frames = 100;
  cfg.eval.num_seeds = seeds;
  return cfg;
}

// 1. Edge features are unchanged by a global rigid motion.
Outcome EdgeInvariance() {
  const auto start = Clock::now();
  Rng rng(20260001);
  double worst = 0.0;
  for (int scene = 0; scene < 500; ++scene) {
    const int n = 3 + static_cast<int>(rng.Index(28));
    const auto boxes = testing::RandomBoxes(rng, n, 100.0);
    const auto moved = testing::Transform(boxes, testing::RandomPose(rng, 200.0));
    const ObjectGraph a = BuildObjectGraph(boxes), b = BuildObjectGraph(moved);
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        if (m == k) continue;
        worst = std::max({worst, std::abs(a.edge(m, k).rho - b.edge(m, k).rho),
                          AngleGap(a.edge(m, k).theta, b.edge(m, k).theta),
                          AngleGap(a.edge(m, k).psi_rel, b.edge(m, k).psi_rel)});
      }
    }
  }
  const double secs = Seconds(start);
  return {worst <= 1e-9 && secs < 5.0,
          Format("500 scenes, max deviation %.3g (tol 1e-9), %.2f s (limit 5 s)",
                 worst, secs)};
}

// 2. Greedy matcher against the exhaustive oracle on small noiseless pairs.
Outcome OracleEquivalence() {
  const auto start = Clock::now();
  const MatchConfig cfg;
  Rng rng(20260002);
  int agree = 0, violations = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const int shared = static_cast<int>(rng.Index(5));
    const int extra_i = static_cast<int>(rng.Index(static_cast<std::size_t>(7 - std::max(shared, 1))));
    const int extra_j = static_cast<int>(rng.Index(static_cast<std::size_t>(7 - std::max(shared, 1))));
    const auto world = testing::RandomBoxes(rng, shared + extra_i + extra_j, 80.0);
    std::vector<TrackedBox> a(world.begin(), world.begin() + shared + extra_i);
    std::vector<TrackedBox> b(world.begin(), world.begin() + shared);
    b.insert(b.end(), world.begin() + shared + extra_i, world.end());
    for (std::size_t k = 0; k < b.size(); ++k) b[k].track_id = static_cast<TrackId>(k);
    b = testing::Transform(b, testing::RandomPose(rng));
    const ObjectGraph gi = BuildObjectGraph(a), gj = BuildObjectGraph(b);
    const CommonSubgraph greedy = Match(gi, gj, std::nullopt, cfg);
    const CommonSubgraph exact = BruteForceMcs(gi, gj, cfg);
    if (!IsPairwiseConsistent(greedy.pairs, gi, gj, cfg)) ++violations;
    if (!IsPairwiseConsistent(exact.pairs, gi, gj, cfg)) ++violations;
    if (greedy.size() == exact.size()) ++agree;
  }
  const double secs = Seconds(start);
  const double rate = static_cast<double>(agree) / trials;
  return {rate >= 0.95 && violations == 0 && secs < 30.0,
          Format("cardinality agreement %d/%d = %.3f (need >= 0.95), "
                 "consistency violations %d, %.2f s (limit 30 s)",
                 agree, trials, rate, violations, secs)};
}

// 3. Closed-form Procrustes on noiseless correspondences.
Outcome ProcrustesExactness() {
  const auto start = Clock::now();
  Rng rng(20260003);
  double worst_rot = 0.0, worst_trans = 0.0, worst_det = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Se2Pose truth = testing::RandomPose(rng, 100.0);
    const int n = 2 + static_cast<int>(rng.Index(29));
    Correspondences c;
    while (static_cast<int>(c.p.size()) < n) {
      const Point2 p(rng.Uniform(-50, 50), rng.Uniform(-50, 50));
      if (!c.p.empty() && (p - c.p.front()).Norm() < 0.5) continue;
      c.p.push_back(p);
      c.q.push_back(Apply(truth, p));
    }
    const Se2Pose est = SolveProcrustes(c).pose;
    worst_rot = std::max(worst_rot, AngleGap(est.theta(), truth.theta()));
    worst_trans = std::max({worst_trans, std::abs(est.tx() - truth.tx()),
                            std::abs(est.ty() - truth.ty())});
    worst_det = std::max(worst_det, std::abs(est.RotationMatrix().determinant() - 1));
  }
  const double secs = Seconds(start);
  return {worst_rot <= 1e-8 && worst_trans <= 1e-8 && worst_det <= 1e-12 &&
              secs < 2.0,
          Format("max rot err %.3g rad, max trans err %.3g m (tol 1e-8), "
                 "max |det-1| %.3g (tol 1e-12), %.3f s (limit 2 s)",
                 worst_rot, worst_trans, worst_det, secs)};
}

// Reference point for 4: true correspondences fed straight to Procrustes.
std::string OracleReference(const ExperimentConfig& cfg) {
  std::vector<double> trans, rot;
  int success = 0, valid = 0;
  for (int k = 0; k < cfg.eval.num_seeds; ++k) {
    ScenarioConfig sc = cfg.scenario;
    sc.seed = cfg.scenario.seed + static_cast<std::uint64_t>(k);
    const Scenario s = GenerateScenario(sc);
    for (int t = 0; t < s.num_frames(); ++t) {
      const Observation oi = Observe(s, 0, t), oj = Observe(s, 1, t);
      const auto truth = TrueCorrespondences(oi, oj);
      if (truth.size() < 2) continue;
      ++valid;
      Correspondences c;
      for (const NodePair& p : truth) {
        c.p.push_back(oj.boxes[p.j].center());
        c.q.push_back(oi.boxes[p.i].center());
      }
      const Se2Pose est = SolveProcrustes(c).pose;
      const Se2Pose gt = TrueRelativePose(s, 0, 1, t);
      trans.push_back((est.translation() - gt.translation()).Norm());
      rot.push_back(AngleGap(est.theta(), gt.theta()));
      if (trans.back() <= 1.0 && rot.back() <= 0.1) ++success;
    }
  }
  return Format("oracle (true pairs): median trans %.3f m, median rot %.4f rad, "
                "success %.3f",
                Median(trans), Median(rot), static_cast<double>(success) / valid);
}

// 4. End-to-end pose recovery on the default corpus.
Outcome EndToEnd() {
  const ExperimentConfig cfg = Corpus(20);
  const RunSummary s = RunExperiment(cfg, Method::kBevGlue).summary;
  const double deg2 = 2.0 * kPi / 180.0;
  return {s.median_trans_error <= 0.5 && s.median_rot_error <= deg2 &&
              s.success_rate >= 0.9,
          Format("median trans %.3f m (<= 0.5), median rot %.4f rad (<= %.4f), "
                 "success %.3f (>= 0.90) over %zu valid frames; %s",
                 s.median_trans_error, s.median_rot_error, deg2, s.success_rate,
                 s.num_valid, OracleReference(cfg).c_str())};
}

// 5. BevGlue output does not depend on localization noise or spoofing.
Outcome NoiseIndependence() {
  const ExperimentConfig base = Corpus(20);
  const std::string ref = FramesCsv(RunExperiment(base, Method::kBevGlue).frames);
  int identical = 0, runs = 0;
  std::vector<ExperimentConfig> variants;
  for (double v : {0.5, 1.5, 2.5}) {
    variants.push_back(ApplySweepValue(base, SweepAxis::kLocNoise, v));
  }
  variants.push_back(ApplySweepValue(base, SweepAxis::kAttack, 1));
  variants.push_back(ApplySweepValue(variants[2], SweepAxis::kAttack, 1));
  for (const ExperimentConfig& cfg : variants) {
    ++runs;
    if (FramesCsv(RunExperiment(cfg, Method::kBevGlue).frames) == ref) ++identical;
  }
  return {identical == runs,
          Format("%d/%d variants (loc_noise 0.5/1.5/2.5, attack, attack+2.5) "
                 "byte-identical to loc_noise 0 (%zu bytes)",
                 identical, runs, ref.size())};
}

// 6. ICP needs a good initial guess; BevGlue does not.
Outcome IcpContrast() {
  const ExperimentConfig base = Corpus(20);
  const ExperimentConfig noisy = ApplySweepValue(base, SweepAxis::kLocNoise, 2.5);
  const double icp_noisy = RunExperiment(noisy, Method::kIcp).summary.success_rate;
  const double glue = RunExperiment(noisy, Method::kBevGlue).summary.success_rate;
  ExperimentConfig good = ApplySweepValue(base, SweepAxis::kLocNoise, 0.1);
  good.icp.boundary_samples_per_box = 16;
  const double icp_good = RunExperiment(good, Method::kIcp).summary.success_rate;
  return {icp_noisy < glue && icp_good >= 0.8,
          Format("sigma_t 2.5 m: icp %.3f < bevglue %.3f; sigma_t 0.1 m with 16 "
                 "boundary samples/box: icp %.3f (>= 0.80)",
                 icp_noisy, glue, icp_good)};
}

// 7. Geometric checks raise match precision; tracking does not lower it.
Outcome AblationOrdering() {
  const auto rows = Ablate(Corpus(20));
  const double node = rows[0].summary.match_precision.value_or(0);
  const double geo = rows[1].summary.match_precision.value_or(0);
  const double full = rows[2].summary.match_precision.value_or(0);
  return {node < geo && geo <= full,
          Format("precision node-only %.4f < geometric %.4f <= "
                 "geometric+tracking %.4f",
                 node, geo, full)};
}

// 8. Wire layout and round trip.
Outcome Wire() {
  bool ok = kHeaderBytes == 14 && kBoxBytes == 24;
  AlignmentMessage one{1, 2, {{1, 2, 4, 2, 0.5, 3}}};
  ok = ok && Encode(one).size() == 38 && Encode({1, 2, {}}).size() == 14;

  ScenarioConfig sc;
  sc.seed = 20260008;
  const Scenario s = GenerateScenario(sc);
  int round_trips = 0;
  for (int a = 0; a < 2; ++a) {
    for (int t = 0; t < 100; ++t) {
      const AlignmentMessage m = QuantizeForWire(
          {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(t),
           Observe(s, a, t).boxes});
      if (Decode(Encode(m)) == m) ++round_trips;
    }
  }
  AlignmentMessage thirty{0, 0, {}};
  for (int k = 0; k < 30; ++k) {
    thirty.boxes.push_back({1.0 * k, 0, 4, 2, 0, static_cast<TrackId>(k)});
  }
  const std::vector<AlignmentMessage> msgs = {thirty};
  const BandwidthReport r = MakeBandwidthReport(msgs);
  ok = ok && round_trips == 200 && r.total_bytes == 734 &&
       std::abs(r.log2_bytes - 9.52) < 0.005;
  return {ok, Format("header 14 B, record 24 B, %d/200 round trips, 30 boxes = "
                     "%llu B, log2 %.4f (~9.52)",
                     round_trips, static_cast<unsigned long long>(r.total_bytes),
                     r.log2_bytes)};
}

// 9. Build two 30-node graphs and match them.
Outcome Throughput() {
  Rng rng(20260009);
  std::vector<double> ms;
  for (int rep = 0; rep < 200; ++rep) {
    const auto world = testing::RandomBoxes(rng, 30, 100.0);
    auto other = testing::Transform(world, testing::RandomPose(rng));
    for (TrackedBox& b : other) {
      b.x += rng.Normal(0.2);
      b.y += rng.Normal(0.2);
    }
    const auto start = Clock::now();
    const ObjectGraph gi = BuildObjectGraph(world);
    const ObjectGraph gj = BuildObjectGraph(other);
    const CommonSubgraph m = Match(gi, gj, std::nullopt, MatchConfig{});
    ms.push_back(1e3 * Seconds(start));
    if (m.empty()) return {false, "empty match on a 30-node pair"};
  }
  ExperimentConfig cfg = Corpus(1);
  cfg.scenario.num_objects = 30;
  cfg.scenario.world_extent = 60.0;
  const double fps = RunExperiment(cfg, Method::kBevGlue).summary.matcher_fps;
  const double med = Median(ms);
  return {med < 11.0, Format("median %.3f ms per 30x30 build+match (< 11 ms); "
                             "harness matcher fps on 30-object scenes %.0f",
                             med, fps)};
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Every CLI subcommand reproduces its output files exactly.
Outcome CliDeterminism() {
  const fs::path root = fs::temp_directory_path() / "bevglue_acceptance_cli";
  fs::remove_all(root);
  const std::string cli = BEVGLUE_CLI_PATH;
  const fs::path cfg = root / "exp.cfg";
  fs::create_directories(root);
  std::ofstream(cfg) << "seed=11\nnum_frames=30\nloc_sigma_t=1.5\nnum_seeds=2\n";

  std::vector<std::string> runs;
  for (const char* run : {"a", "b"}) {
    const fs::path out = root / run;
    const std::string common = " --config " + cfg.string();
    const std::vector<std::string> cmds = {
        "generate" + common + " --out " + (out / "gen").string(),
        "match" + common + " " + (out / "gen" / "agent_0.bglog").string() + " " +
            (out / "gen" / "agent_1.bglog").string() + " --out " +
            (out / "match").string(),
        "evaluate" + common + " --method bevglue --out " + (out / "eval").string(),
        "evaluate" + common + " --method icp --out " + (out / "icp").string(),
        "sweep" + common + " --axis loc_noise --values 0,0.5,1.5,2.5 --out " +
            (out / "sweep").string(),
        "ablate" + common + " --out " + (out / "ablate").string(),
    };
    for (const std::string& c : cmds) {
      const std::string line = cli + " " + c + " > /dev/null";
      if (std::system(line.c_str()) != 0) return {false, "command failed: " + c};
    }
  }
  int files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path rel = fs::relative(e.path(), root / "a");
    if (ReadFile(e.path()) == ReadFile(root / "b" / rel)) ++same;
  }
  fs::remove_all(root);
  return {files > 0 && same == files,
          Format("%d/%d output files byte-identical across two invocations of "
                 "generate/match/evaluate/sweep/ablate",
                 same, files)};
}

}  // namespace
}  // namespace bevglue

int main() {
  using bevglue::Outcome;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "edge-feature SE(2) invariance", bevglue::EdgeInvariance},
      {2, "oracle equivalence", bevglue::OracleEquivalence},
      {3, "Procrustes exactness", bevglue::ProcrustesExactness},
      {4, "end-to-end pose recovery", bevglue::EndToEnd},
      {5, "noise/attack independence", bevglue::NoiseIndependence},
      {6, "ICP contrast", bevglue::IcpContrast},
      {7, "ablation ordering", bevglue::AblationOrdering},
      {8, "wire format", bevglue::Wire},
      {9, "throughput", bevglue::Throughput},
      {10, "CLI determinism", bevglue::CliDeterminism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
