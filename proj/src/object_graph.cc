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

#include "bevglue/object_graph.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bevglue {

void ValidateBox(const TrackedBox& box) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) ||
      !std::isfinite(box.yaw) || !std::isfinite(box.l) ||
      !std::isfinite(box.w)) {
    throw std::invalid_argument("TrackedBox: non-finite field");
  }
  if (!(box.l > 0.0) || !(box.w > 0.0)) {
    throw std::invalid_argument("TrackedBox: dimensions must be positive");
  }
}

EdgeFeature ComputeEdge(const TrackedBox& from, const TrackedBox& to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  EdgeFeature e;
  e.rho = std::hypot(dx, dy);
  e.psi_rel = WrapAngle(to.yaw - from.yaw);
  if (e.rho < kDegenerateRho) {
    e.degenerate = true;
    e.theta = 0.0;
    return e;
  }
  const Point2 local = Rotate(-from.yaw, Point2(dx, dy));
  e.theta = WrapAngle(std::atan2(local.y(), local.x()));
  return e;
}

std::optional<std::size_t> ObjectGraph::FindTrack(TrackId id) const {
  auto it = track_index_.find(id);
  if (it == track_index_.end()) return std::nullopt;
  return it->second;
}

ObjectGraph BuildObjectGraph(std::span<const TrackedBox> boxes) {
  ObjectGraph g;
  const std::size_t n = boxes.size();
  g.nodes_.reserve(n);
  g.positions_.reserve(n);
  g.track_index_.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    const TrackedBox& b = boxes[m];
    ValidateBox(b);
    if (!g.track_index_.emplace(b.track_id, m).second) {
      throw std::invalid_argument("BuildObjectGraph: duplicate track_id " +
                                  std::to_string(b.track_id));
    }
    g.nodes_.push_back({b.l, b.w, b.track_id});
    g.positions_.push_back(b.center());
  }
  g.edges_.resize(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      if (m != k) g.edges_[m * n + k] = ComputeEdge(boxes[m], boxes[k]);
    }
  }
  return g;
}

}  // namespace bevglue
