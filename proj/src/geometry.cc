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

#include "bevglue/geometry.h"

#include <cmath>
#include <stdexcept>

namespace bevglue {

double WrapAngle(double a) {
  if (!std::isfinite(a)) {
    throw std::invalid_argument("WrapAngle: non-finite angle");
  }
  // Fast path keeps already-wrapped values bit-identical.
  if (a > -kPi && a <= kPi) return a;
  double r = std::remainder(a, kTwoPi);  // exact, in [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

Point2::Point2(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::invalid_argument("Point2: non-finite coordinate");
  }
}

double Point2::Norm() const { return std::hypot(x_, y_); }

double Distance(const Point2& a, const Point2& b) { return (a - b).Norm(); }

Se2Pose::Se2Pose(double theta, double tx, double ty)
    : theta_(WrapAngle(theta)), tx_(tx), ty_(ty) {
  if (!std::isfinite(tx) || !std::isfinite(ty)) {
    throw std::invalid_argument("Se2Pose: non-finite translation");
  }
}

Eigen::Matrix2d Se2Pose::RotationMatrix() const {
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Point2 Rotate(double theta, const Point2& p) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

Point2 Apply(const Se2Pose& pose, const Point2& p) {
  return Rotate(pose.theta(), p) + pose.translation();
}

Se2Pose Compose(const Se2Pose& a, const Se2Pose& b) {
  const Point2 t = Apply(a, b.translation());
  return {a.theta() + b.theta(), t.x(), t.y()};
}

Se2Pose Inverse(const Se2Pose& a) {
  const Point2 t = Rotate(-a.theta(), a.translation()) * -1.0;
  return {-a.theta(), t.x(), t.y()};
}

}  // namespace bevglue
