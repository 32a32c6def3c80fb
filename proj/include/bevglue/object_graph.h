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

#ifndef BEVGLUE_OBJECT_GRAPH_H_
#define BEVGLUE_OBJECT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bevglue/geometry.h"

namespace bevglue {

using TrackId = std::uint32_t;

// One bird's-eye-view detection in the observing agent's frame.
struct TrackedBox {
  double x = 0.0;
  double y = 0.0;
  double l = 0.0;
  double w = 0.0;
  double yaw = 0.0;
  TrackId track_id = 0;

  Point2 center() const { return {x, y}; }
  bool operator==(const TrackedBox&) const = default;
};

// Throws std::invalid_argument unless l, w > 0 and every field is finite.
void ValidateBox(const TrackedBox& box);

struct NodeFeature {
  double l = 0.0;
  double w = 0.0;
  TrackId track_id = 0;
};

// Polar description of node n seen from node m: the pole is m's center and
// the reference direction is m's heading. All three values are unchanged by
// any rigid transform applied to the whole scene.
struct EdgeFeature {
  double rho = 0.0;      // |c_n - c_m|
  double theta = 0.0;    // bearing of n, counterclockwise from m's heading
  double psi_rel = 0.0;  // yaw_n - yaw_m, wrapped
  // Centers coincide (rho below kDegenerateRho); theta is pinned to 0 and
  // carries no information.
  bool degenerate = false;
};

inline constexpr double kDegenerateRho = 1e-9;

EdgeFeature ComputeEdge(const TrackedBox& from, const TrackedBox& to);

// Fully connected directed graph over one agent's boxes. Immutable once built.
class ObjectGraph {
 public:
  ObjectGraph() = default;

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const std::vector<NodeFeature>& nodes() const { return nodes_; }
  const std::vector<Point2>& positions() const { return positions_; }
  const NodeFeature& node(std::size_t m) const { return nodes_[m]; }
  const Point2& position(std::size_t m) const { return positions_[m]; }

  // Edge m -> n. The diagonal holds a zero placeholder and is never an edge.
  const EdgeFeature& edge(std::size_t m, std::size_t n) const {
    return edges_[m * nodes_.size() + n];
  }

  std::size_t edge_count() const {
    return nodes_.size() < 2 ? 0 : nodes_.size() * (nodes_.size() - 1);
  }

  std::optional<std::size_t> FindTrack(TrackId id) const;

  friend ObjectGraph BuildObjectGraph(std::span<const TrackedBox> boxes);

 private:
  std::vector<NodeFeature> nodes_;
  std::vector<Point2> positions_;
  std::vector<EdgeFeature> edges_;
  std::unordered_map<TrackId, std::size_t> track_index_;
};

// Throws std::invalid_argument on an invalid box or a repeated track id.
ObjectGraph BuildObjectGraph(std::span<const TrackedBox> boxes);

}  // namespace bevglue

#endif  // BEVGLUE_OBJECT_GRAPH_H_
