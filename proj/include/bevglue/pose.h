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

#ifndef BEVGLUE_POSE_H_
#define BEVGLUE_POSE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "bevglue/geometry.h"
#include "bevglue/matching.h"
#include "bevglue/object_graph.h"

namespace bevglue {

// Ordered point correspondences p[k] <-> q[k].
struct Correspondences {
  std::vector<Point2> p;
  std::vector<Point2> q;
};

struct PoseEstimate {
  Se2Pose pose;  // maps p-frame points onto q-frame points
  double residual_rms = 0.0;
  std::size_t num_pairs = 0;
};

inline constexpr double kMinPointSpread = 1e-9;

// Least-squares rigid transform argmin sum |R p_k + t - q_k|^2 via the SVD of
// the 2x2 cross-covariance, with the determinant correction that rules out
// reflections.
//
// Throws UnderdeterminedError for fewer than two pairs or mismatched lengths,
// and DegenerateError when all p coincide.
PoseEstimate SolveProcrustes(const Correspondences& c);

// Root-mean-square of |Apply(pose, p_k) - q_k|.
double ResidualRms(const Se2Pose& pose, const Correspondences& c);

// Relative pose that carries agent j's frame into agent i's frame, estimated
// from the matched node centers.
PoseEstimate EstimateRelativePose(const ObjectGraph& gi, const ObjectGraph& gj,
                                  const CommonSubgraph& match);

}  // namespace bevglue

#endif  // BEVGLUE_POSE_H_
