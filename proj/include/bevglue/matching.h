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

#ifndef BEVGLUE_MATCHING_H_
#define BEVGLUE_MATCHING_H_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bevglue/object_graph.h"

namespace bevglue {

// Thresholds and tolerance scales for the affinity functions
//
//   node:  exp(-(|dl| + |dw|) / sigma_dim)
//   edge:  exp(-(|drho| / sigma_rho + |dtheta| / sigma_theta
//                + |dpsi| / sigma_psi))
//
// A pair is admitted when its affinity is strictly above the threshold, so
// gamma = exp(-1) corresponds to an L1 budget of one tolerance unit.
struct MatchConfig {
  double gamma_v = std::exp(-1.0);
  double gamma_e = std::exp(-1.0);
  double sigma_dim = 0.5;
  double sigma_rho = 0.5;
  double sigma_theta = 0.2;
  double sigma_psi = 0.2;
  std::size_t max_candidates = 64;
  // Off reproduces the node-affinity-only ablation: expansion admits pairs
  // on dimensions alone.
  bool use_edge_checks = true;

  // Throws ConfigError when a scale is not positive or a threshold lies
  // outside (0, 1].
  void Validate() const;
};

struct NodePair {
  std::size_t i = 0;  // node index in G_i
  std::size_t j = 0;  // node index in G_j

  auto operator<=>(const NodePair&) const = default;
};

struct CandidateSubgraph {
  std::vector<NodePair> pairs;
  double score = 0.0;
};

struct TrackPair {
  TrackId i = 0;
  TrackId j = 0;

  auto operator<=>(const TrackPair&) const = default;
};

// Result of one matching step. `pairs` is sorted by (i, j) and index-aligned
// with `track_pairs`.
struct CommonSubgraph {
  std::vector<NodePair> pairs;
  std::vector<TrackPair> track_pairs;
  double confidence = 0.0;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

double NodeAffinity(const NodeFeature& a, const NodeFeature& b,
                    const MatchConfig& cfg);

double EdgeAffinity(const EdgeFeature& a, const EdgeFeature& b,
                    const MatchConfig& cfg);

// Smaller of the two directed edge affinities between pair `a` and pair `b`.
double PairEdgeAffinity(const ObjectGraph& gi, const ObjectGraph& gj,
                        const NodePair& a, const NodePair& b,
                        const MatchConfig& cfg);

// Sum of node affinities plus edge affinities over all ordered pairs of
// distinct members. The self-term of the double sum is skipped because the
// graphs have no self-edges.
double Confidence(std::span<const NodePair> pairs, const ObjectGraph& gi,
                  const ObjectGraph& gj, const MatchConfig& cfg);

// True when every member passes the node threshold and every two members pass
// the edge threshold in both directions.
bool IsPairwiseConsistent(std::span<const NodePair> pairs,
                          const ObjectGraph& gi, const ObjectGraph& gj,
                          const MatchConfig& cfg);

// Candidate generation. Without `prev`, one single-pair candidate per node
// pair above gamma_v, best max_candidates kept. With `prev`, the pairs of the
// previous result that still resolve through both agents' track ids and
// still agree geometrically form a leading seed candidate; fresh single-pair
// candidates follow.
std::vector<CandidateSubgraph> InitCandidates(
    const ObjectGraph& gi, const ObjectGraph& gj,
    const std::optional<CommonSubgraph>& prev, const MatchConfig& cfg);

// Greedy growth of `seed`. Each round admits the best pair by
// node_affinity * (min edge affinity to current members) among those that
// pass every threshold; ties go to the lexicographically smaller pair.
CandidateSubgraph ExpandSubgraph(const CandidateSubgraph& seed,
                                 const ObjectGraph& gi, const ObjectGraph& gj,
                                 const MatchConfig& cfg);

// Largest candidate, then highest confidence, then smallest sorted pair list.
CommonSubgraph SelectMcs(std::span<const CandidateSubgraph> candidates,
                         const ObjectGraph& gi, const ObjectGraph& gj,
                         const MatchConfig& cfg);

CommonSubgraph Match(const ObjectGraph& gi, const ObjectGraph& gj,
                     const std::optional<CommonSubgraph>& prev,
                     const MatchConfig& cfg);

inline constexpr std::size_t kBruteForceMaxNodes = 8;

// Exhaustive maximum common subgraph under the same admission rules and
// tie-breaks as SelectMcs. Edge checks are always applied. Throws
// SizeLimitError when either graph has more than kBruteForceMaxNodes nodes.
CommonSubgraph BruteForceMcs(const ObjectGraph& gi, const ObjectGraph& gj,
                             const MatchConfig& cfg);

}  // namespace bevglue

#endif  // BEVGLUE_MATCHING_H_
