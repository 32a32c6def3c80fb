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

#include "bevglue/matching.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bevglue/errors.h"

namespace bevglue {
namespace {

bool IsUnitThreshold(double g) { return g > 0.0 && g <= 1.0; }

// Node affinities for all M x N pairs, row-major.
class NodeTable {
 public:
  NodeTable(const ObjectGraph& gi, const ObjectGraph& gj,
            const MatchConfig& cfg)
      : cols_(gj.size()), values_(gi.size() * gj.size()) {
    for (std::size_t m = 0; m < gi.size(); ++m) {
      for (std::size_t n = 0; n < gj.size(); ++n) {
        values_[m * cols_ + n] = NodeAffinity(gi.node(m), gj.node(n), cfg);
      }
    }
  }

  double at(std::size_t m, std::size_t n) const {
    return values_[m * cols_ + n];
  }

 private:
  std::size_t cols_;
  std::vector<double> values_;
};

struct Frontier {
  NodePair pair;
  double node_affinity;
  double min_edge_affinity;
};

CandidateSubgraph Expand(const CandidateSubgraph& seed, const ObjectGraph& gi,
                         const ObjectGraph& gj, const NodeTable& table,
                         const MatchConfig& cfg) {
  CandidateSubgraph out = seed;
  std::vector<bool> used_i(gi.size(), false);
  std::vector<bool> used_j(gj.size(), false);
  for (const NodePair& p : seed.pairs) {
    used_i[p.i] = true;
    used_j[p.j] = true;
  }

  // Lexicographic construction order doubles as the tie-break order.
  std::vector<Frontier> frontier;
  for (std::size_t m = 0; m < gi.size(); ++m) {
    if (used_i[m]) continue;
    for (std::size_t n = 0; n < gj.size(); ++n) {
      if (used_j[n]) continue;
      const double a = table.at(m, n);
      if (a > cfg.gamma_v) frontier.push_back({{m, n}, a, 1.0});
    }
  }

  auto absorb = [&](const NodePair& member) {
    std::erase_if(frontier, [&](Frontier& f) {
      if (f.pair.i == member.i || f.pair.j == member.j) return true;
      if (!cfg.use_edge_checks) return false;
      const double e = PairEdgeAffinity(gi, gj, member, f.pair, cfg);
      f.min_edge_affinity = std::min(f.min_edge_affinity, e);
      return !(f.min_edge_affinity > cfg.gamma_e);
    });
  };

  for (const NodePair& p : seed.pairs) absorb(p);

  while (!frontier.empty()) {
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      const double s =
          frontier[k].node_affinity * frontier[k].min_edge_affinity;
      if (s > best_score) {
        best_score = s;
        best = k;
      }
    }
    const NodePair chosen = frontier[best].pair;
    out.pairs.push_back(chosen);
    absorb(chosen);
  }
  out.score = Confidence(out.pairs, gi, gj, cfg);
  return out;
}

std::vector<NodePair> Sorted(std::span<const NodePair> pairs) {
  std::vector<NodePair> s(pairs.begin(), pairs.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Strict preference used by both the greedy selector and the exhaustive
// oracle: size, then confidence, then lexicographically smaller pairs.
bool Prefer(const std::vector<NodePair>& a, double conf_a,
            const std::vector<NodePair>& b, double conf_b) {
  if (a.size() != b.size()) return a.size() > b.size();
  if (conf_a != conf_b) return conf_a > conf_b;
  return a < b;
}

CommonSubgraph MakeResult(std::vector<NodePair> sorted_pairs,
                          double confidence, const ObjectGraph& gi,
                          const ObjectGraph& gj) {
  CommonSubgraph out;
  out.track_pairs.reserve(sorted_pairs.size());
  for (const NodePair& p : sorted_pairs) {
    out.track_pairs.push_back({gi.node(p.i).track_id, gj.node(p.j).track_id});
  }
  out.pairs = std::move(sorted_pairs);
  out.confidence = confidence;
  return out;
}

}  // namespace

void MatchConfig::Validate() const {
  if (!IsUnitThreshold(gamma_v) || !IsUnitThreshold(gamma_e)) {
    throw ConfigError("MatchConfig: thresholds must lie in (0, 1]");
  }
  if (!(sigma_dim > 0.0) || !(sigma_rho > 0.0) || !(sigma_theta > 0.0) ||
      !(sigma_psi > 0.0)) {
    throw ConfigError("MatchConfig: tolerance scales must be positive");
  }
  if (max_candidates == 0) {
    throw ConfigError("MatchConfig: max_candidates must be positive");
  }
}

double NodeAffinity(const NodeFeature& a, const NodeFeature& b,
                    const MatchConfig& cfg) {
  return std::exp(-(std::abs(a.l - b.l) + std::abs(a.w - b.w)) /
                  cfg.sigma_dim);
}

double EdgeAffinity(const EdgeFeature& a, const EdgeFeature& b,
                    const MatchConfig& cfg) {
  double cost = std::abs(a.rho - b.rho) / cfg.sigma_rho +
                std::abs(WrapAngle(a.psi_rel - b.psi_rel)) / cfg.sigma_psi;
  // A bearing measured from a coincident center is meaningless.
  if (!a.degenerate && !b.degenerate) {
    cost += std::abs(WrapAngle(a.theta - b.theta)) / cfg.sigma_theta;
  }
  return std::exp(-cost);
}

double PairEdgeAffinity(const ObjectGraph& gi, const ObjectGraph& gj,
                        const NodePair& a, const NodePair& b,
                        const MatchConfig& cfg) {
  const double forward = EdgeAffinity(gi.edge(a.i, b.i), gj.edge(a.j, b.j), cfg);
  const double backward =
      EdgeAffinity(gi.edge(b.i, a.i), gj.edge(b.j, a.j), cfg);
  return std::min(forward, backward);
}

double Confidence(std::span<const NodePair> pairs, const ObjectGraph& gi,
                  const ObjectGraph& gj, const MatchConfig& cfg) {
  double c = 0.0;
  for (const NodePair& p : pairs) {
    c += NodeAffinity(gi.node(p.i), gj.node(p.j), cfg);
  }
  for (const NodePair& a : pairs) {
    for (const NodePair& b : pairs) {
      if (a.i == b.i) continue;
      c += EdgeAffinity(gi.edge(a.i, b.i), gj.edge(a.j, b.j), cfg);
    }
  }
  return c;
}

bool IsPairwiseConsistent(std::span<const NodePair> pairs,
                          const ObjectGraph& gi, const ObjectGraph& gj,
                          const MatchConfig& cfg) {
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    if (!(NodeAffinity(gi.node(pairs[a].i), gj.node(pairs[a].j), cfg) >
          cfg.gamma_v)) {
      return false;
    }
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      if (pairs[a].i == pairs[b].i || pairs[a].j == pairs[b].j) return false;
      if (!(PairEdgeAffinity(gi, gj, pairs[a], pairs[b], cfg) > cfg.gamma_e)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<CandidateSubgraph> InitCandidates(
    const ObjectGraph& gi, const ObjectGraph& gj,
    const std::optional<CommonSubgraph>& prev, const MatchConfig& cfg) {
  std::vector<CandidateSubgraph> out;
  if (gi.empty() || gj.empty()) return out;

  if (prev) {
    CandidateSubgraph seeded;
    std::vector<bool> used_i(gi.size(), false);
    std::vector<bool> used_j(gj.size(), false);
    for (const TrackPair& tp : prev->track_pairs) {
      const auto m = gi.FindTrack(tp.i);
      const auto n = gj.FindTrack(tp.j);
      if (!m || !n || used_i[*m] || used_j[*n]) continue;
      const NodePair p{*m, *n};
      if (!(NodeAffinity(gi.node(p.i), gj.node(p.j), cfg) > cfg.gamma_v)) {
        continue;
      }
      // Objects may have moved apart since the previous frame; keep only
      // pairs that still agree with what has been kept so far.
      const bool consistent =
          !cfg.use_edge_checks ||
          std::all_of(seeded.pairs.begin(), seeded.pairs.end(),
                      [&](const NodePair& q) {
                        return PairEdgeAffinity(gi, gj, q, p, cfg) >
                               cfg.gamma_e;
                      });
      if (!consistent) continue;
      seeded.pairs.push_back(p);
      used_i[p.i] = true;
      used_j[p.j] = true;
    }
    if (!seeded.pairs.empty()) {
      seeded.score = Confidence(seeded.pairs, gi, gj, cfg);
      out.push_back(std::move(seeded));
    }
  }

  std::vector<CandidateSubgraph> fresh;
  for (std::size_t m = 0; m < gi.size(); ++m) {
    for (std::size_t n = 0; n < gj.size(); ++n) {
      const double a = NodeAffinity(gi.node(m), gj.node(n), cfg);
      if (a > cfg.gamma_v) fresh.push_back({{{m, n}}, a});
    }
  }
  std::stable_sort(fresh.begin(), fresh.end(),
                   [](const CandidateSubgraph& a, const CandidateSubgraph& b) {
                     return a.score > b.score;
                   });
  if (fresh.size() > cfg.max_candidates) fresh.resize(cfg.max_candidates);
  out.insert(out.end(), std::make_move_iterator(fresh.begin()),
             std::make_move_iterator(fresh.end()));
  return out;
}

CandidateSubgraph ExpandSubgraph(const CandidateSubgraph& seed,
                                 const ObjectGraph& gi, const ObjectGraph& gj,
                                 const MatchConfig& cfg) {
  return Expand(seed, gi, gj, NodeTable(gi, gj, cfg), cfg);
}

CommonSubgraph SelectMcs(std::span<const CandidateSubgraph> candidates,
                         const ObjectGraph& gi, const ObjectGraph& gj,
                         const MatchConfig& cfg) {
  std::vector<NodePair> best;
  double best_conf = 0.0;
  bool have = false;
  for (const CandidateSubgraph& c : candidates) {
    std::vector<NodePair> s = Sorted(c.pairs);
    const double conf = Confidence(s, gi, gj, cfg);
    if (!have || Prefer(s, conf, best, best_conf)) {
      best = std::move(s);
      best_conf = conf;
      have = true;
    }
  }
  if (!have) return {};
  return MakeResult(std::move(best), best_conf, gi, gj);
}

CommonSubgraph Match(const ObjectGraph& gi, const ObjectGraph& gj,
                     const std::optional<CommonSubgraph>& prev,
                     const MatchConfig& cfg) {
  const std::vector<CandidateSubgraph> seeds =
      InitCandidates(gi, gj, prev, cfg);
  if (seeds.empty()) return {};
  const NodeTable table(gi, gj, cfg);
  std::vector<CandidateSubgraph> expanded;
  expanded.reserve(seeds.size());
  for (const CandidateSubgraph& s : seeds) {
    expanded.push_back(Expand(s, gi, gj, table, cfg));
  }
  return SelectMcs(expanded, gi, gj, cfg);
}

CommonSubgraph BruteForceMcs(const ObjectGraph& gi, const ObjectGraph& gj,
                             const MatchConfig& cfg) {
  if (gi.size() > kBruteForceMaxNodes || gj.size() > kBruteForceMaxNodes) {
    throw SizeLimitError("BruteForceMcs: graphs are limited to 8 nodes");
  }
  const NodeTable table(gi, gj, cfg);
  std::vector<NodePair> current;
  std::vector<bool> used_j(gj.size(), false);
  std::vector<NodePair> best;
  double best_conf = 0.0;

  // Pairs are generated in increasing i, so `current` is always sorted.
  auto search = [&](auto&& self, std::size_t m) -> void {
    if (current.size() + (gi.size() - m) < best.size()) return;
    if (m == gi.size()) {
      const double conf = Confidence(current, gi, gj, cfg);
      if (Prefer(current, conf, best, best_conf)) {
        best = current;
        best_conf = conf;
      }
      return;
    }
    for (std::size_t n = 0; n < gj.size(); ++n) {
      if (used_j[n] || !(table.at(m, n) > cfg.gamma_v)) continue;
      const NodePair p{m, n};
      const bool ok = std::all_of(
          current.begin(), current.end(), [&](const NodePair& q) {
            return PairEdgeAffinity(gi, gj, q, p, cfg) > cfg.gamma_e;
          });
      if (!ok) continue;
      used_j[n] = true;
      current.push_back(p);
      self(self, m + 1);
      current.pop_back();
      used_j[n] = false;
    }
    self(self, m + 1);
  };
  search(search, 0);
  if (best.empty()) return {};
  return MakeResult(std::move(best), best_conf, gi, gj);
}

}  // namespace bevglue
