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

#include "bevglue/icp.h"

#include <limits>
#include <stdexcept>

#include "bevglue/errors.h"
#include "bevglue/pose.h"

namespace bevglue {

void IcpConfig::Validate() const {
  if (max_iterations < 1) throw ConfigError("IcpConfig: max_iterations < 1");
  if (!(convergence_tol > 0.0)) {
    throw ConfigError("IcpConfig: convergence_tol must be positive");
  }
  if (!(max_pair_dist > 0.0)) {
    throw ConfigError("IcpConfig: max_pair_dist must be positive");
  }
  if (boundary_samples_per_box < 0) {
    throw ConfigError("IcpConfig: boundary_samples_per_box < 0");
  }
}

IcpResult Icp2d(std::span<const Point2> source, std::span<const Point2> target,
                const Se2Pose& init, const IcpConfig& cfg) {
  if (source.empty() || target.empty()) {
    throw std::invalid_argument("Icp2d: empty point set");
  }
  cfg.Validate();
  const double gate_sq = cfg.max_pair_dist * cfg.max_pair_dist;

  IcpResult result;
  result.pose = init;
  Correspondences pairs;
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    result.iterations = iter;
    pairs.p.clear();
    pairs.q.clear();
    double sum_sq = 0.0;
    for (const Point2& s : source) {
      const Point2 moved = Apply(result.pose, s);
      double best = std::numeric_limits<double>::infinity();
      const Point2* nearest = nullptr;
      for (const Point2& t : target) {
        const Point2 d = t - moved;
        const double dsq = d.x() * d.x() + d.y() * d.y();
        if (dsq < best) {
          best = dsq;
          nearest = &t;
        }
      }
      if (best <= gate_sq) {
        pairs.p.push_back(s);
        pairs.q.push_back(*nearest);
        sum_sq += best;
      }
    }
    if (pairs.p.size() < 2) {
      result.converged = false;
      return result;
    }
    result.residual_history.push_back(sum_sq /
                                      static_cast<double>(pairs.p.size()));

    Se2Pose next;
    try {
      next = SolveProcrustes(pairs).pose;
    } catch (const DegenerateError&) {
      result.converged = false;
      return result;
    }
    double shift = 0.0;
    for (const Point2& s : source) {
      shift += Distance(Apply(next, s), Apply(result.pose, s));
    }
    shift /= static_cast<double>(source.size());
    result.pose = next;
    if (shift < cfg.convergence_tol) {
      result.converged = true;
      return result;
    }
  }
  result.converged = false;
  return result;
}

std::vector<Point2> BoxPoints(std::span<const TrackedBox> boxes,
                              int samples_per_box) {
  std::vector<Point2> out;
  out.reserve(boxes.size() * static_cast<std::size_t>(1 + samples_per_box));
  for (const TrackedBox& b : boxes) out.push_back(b.center());
  if (samples_per_box <= 0) return out;
  for (const TrackedBox& b : boxes) {
    const double perimeter = 2.0 * (b.l + b.w);
    for (int k = 0; k < samples_per_box; ++k) {
      // Arc length along the outline, starting at the front-left corner.
      double s = perimeter * k / samples_per_box;
      double lx, ly;
      if (s < b.l) {
        lx = 0.5 * b.l - s;
        ly = 0.5 * b.w;
      } else if ((s -= b.l) < b.w) {
        lx = -0.5 * b.l;
        ly = 0.5 * b.w - s;
      } else if ((s -= b.w) < b.l) {
        lx = -0.5 * b.l + s;
        ly = -0.5 * b.w;
      } else {
        s -= b.l;
        lx = 0.5 * b.l;
        ly = -0.5 * b.w + s;
      }
      out.push_back(Rotate(b.yaw, Point2(lx, ly)) + b.center());
    }
  }
  return out;
}

}  // namespace bevglue
