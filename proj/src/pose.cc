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

#include "bevglue/pose.h"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>

#include "bevglue/errors.h"

namespace bevglue {

double ResidualRms(const Se2Pose& pose, const Correspondences& c) {
  if (c.p.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < c.p.size(); ++k) {
    const Point2 d = Apply(pose, c.p[k]) - c.q[k];
    sum += d.x() * d.x() + d.y() * d.y();
  }
  return std::sqrt(sum / static_cast<double>(c.p.size()));
}

PoseEstimate SolveProcrustes(const Correspondences& c) {
  if (c.p.size() != c.q.size()) {
    throw UnderdeterminedError("SolveProcrustes: length mismatch");
  }
  const std::size_t n = c.p.size();
  if (n < 2) {
    throw UnderdeterminedError("SolveProcrustes: need at least two pairs");
  }

  Eigen::Vector2d p_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d q_mean = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    p_mean += Eigen::Vector2d(c.p[k].x(), c.p[k].y());
    q_mean += Eigen::Vector2d(c.q[k].x(), c.q[k].y());
  }
  p_mean /= static_cast<double>(n);
  q_mean /= static_cast<double>(n);

  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  double spread = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector2d dp = Eigen::Vector2d(c.p[k].x(), c.p[k].y()) - p_mean;
    const Eigen::Vector2d dq = Eigen::Vector2d(c.q[k].x(), c.q[k].y()) - q_mean;
    h += dp * dq.transpose();
    spread = std::max(spread, dp.norm());
  }
  if (!(spread > kMinPointSpread)) {
    throw DegenerateError("SolveProcrustes: source points coincide");
  }

  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(
      h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2d& u = svd.matrixU();
  const Eigen::Matrix2d& v = svd.matrixV();
  Eigen::Matrix2d d = Eigen::Matrix2d::Identity();
  d(1, 1) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix2d r = v * d * u.transpose();

  const double theta = std::atan2(r(1, 0), r(0, 0));
  const Eigen::Vector2d t =
      q_mean - Eigen::Rotation2Dd(theta).toRotationMatrix() * p_mean;

  PoseEstimate out;
  out.pose = Se2Pose(theta, t.x(), t.y());
  out.num_pairs = n;
  out.residual_rms = ResidualRms(out.pose, c);
  return out;
}

PoseEstimate EstimateRelativePose(const ObjectGraph& gi, const ObjectGraph& gj,
                                  const CommonSubgraph& match) {
  Correspondences c;
  c.p.reserve(match.size());
  c.q.reserve(match.size());
  for (const NodePair& pr : match.pairs) {
    c.p.push_back(gj.position(pr.j));
    c.q.push_back(gi.position(pr.i));
  }
  return SolveProcrustes(c);
}

}  // namespace bevglue
