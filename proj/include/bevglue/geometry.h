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

#ifndef BEVGLUE_GEOMETRY_H_
#define BEVGLUE_GEOMETRY_H_

#include <Eigen/Core>
#include <numbers>

namespace bevglue {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps `a` onto its representative in (-pi, pi]. Throws std::invalid_argument
// for NaN or infinite input.
double WrapAngle(double a);

// Planar point in meters. Rejects non-finite coordinates.
class Point2 {
 public:
  Point2() = default;
  Point2(double x, double y);

  double x() const { return x_; }
  double y() const { return y_; }

  Point2 operator+(const Point2& o) const { return {x_ + o.x_, y_ + o.y_}; }
  Point2 operator-(const Point2& o) const { return {x_ - o.x_, y_ - o.y_}; }
  Point2 operator*(double s) const { return {x_ * s, y_ * s}; }
  bool operator==(const Point2&) const = default;

  double Norm() const;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

double Distance(const Point2& a, const Point2& b);

// Rigid planar transform p -> R(theta) p + t. The angle is the stored state;
// the rotation matrix is only built on request.
class Se2Pose {
 public:
  Se2Pose() = default;
  Se2Pose(double theta, double tx, double ty);

  static Se2Pose Identity() { return {}; }

  double theta() const { return theta_; }
  double tx() const { return tx_; }
  double ty() const { return ty_; }
  Point2 translation() const { return {tx_, ty_}; }

  Eigen::Matrix2d RotationMatrix() const;

  bool operator==(const Se2Pose&) const = default;

 private:
  double theta_ = 0.0;
  double tx_ = 0.0;
  double ty_ = 0.0;
};

// Rotates `p` by `theta` about the origin.
Point2 Rotate(double theta, const Point2& p);

Point2 Apply(const Se2Pose& pose, const Point2& p);

// Returns a o b, i.e. Apply(Compose(a, b), p) == Apply(a, Apply(b, p)).
Se2Pose Compose(const Se2Pose& a, const Se2Pose& b);

Se2Pose Inverse(const Se2Pose& a);

}  // namespace bevglue

#endif  // BEVGLUE_GEOMETRY_H_
