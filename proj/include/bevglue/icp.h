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

#ifndef BEVGLUE_ICP_H_
#define BEVGLUE_ICP_H_

#include <span>
#include <vector>

#include "bevglue/geometry.h"
#include "bevglue/object_graph.h"

namespace bevglue {

struct IcpConfig {
  int max_iterations = 50;
  double convergence_tol = 1e-4;  // mean shift of source points, m
  double max_pair_dist = 2.0;     // correspondence gate, m
  int boundary_samples_per_box = 0;

  void Validate() const;
};

struct IcpResult {
  Se2Pose pose;  // maps source points onto target points
  bool converged = false;
  int iterations = 0;
  // Mean squared distance of the gated pairs found in each iteration, before
  // that iteration's update.
  std::vector<double> residual_history;
};

// Point-to-point ICP: exhaustive nearest neighbour, gated association, then a
// closed-form rigid update over the gated pairs. Stops when the update moves
// source points by less than convergence_tol on average. Reports
// converged = false when the iteration cap is hit or fewer than two pairs
// survive the gate. Throws std::invalid_argument on empty input.
IcpResult Icp2d(std::span<const Point2> source, std::span<const Point2> target,
                const Se2Pose& init, const IcpConfig& cfg);

// Box centers followed by `samples_per_box` points spread evenly along each
// box outline.
std::vector<Point2> BoxPoints(std::span<const TrackedBox> boxes,
                              int samples_per_box);

}  // namespace bevglue

#endif  // BEVGLUE_ICP_H_
