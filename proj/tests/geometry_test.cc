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

#include <gtest/gtest.h>

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bevglue/random.h"
#include "test_util.h"

namespace bevglue {
namespace {

TEST(WrapAngleTest, Examples) {
  EXPECT_EQ(WrapAngle(0.0), 0.0);
  EXPECT_NEAR(WrapAngle(3.0 * kPi), kPi, 1e-15);
  EXPECT_EQ(WrapAngle(-kPi), kPi);
  EXPECT_EQ(WrapAngle(kPi), kPi);
  EXPECT_NEAR(WrapAngle(-3.0 * kPi / 2.0), kPi / 2.0, 1e-15);
}

TEST(WrapAngleTest, RejectsNonFinite) {
  EXPECT_THROW(WrapAngle(std::numeric_limits<double>::quiet_NaN()),
               std::invalid_argument);
  EXPECT_THROW(WrapAngle(std::numeric_limits<double>::infinity()),
               std::invalid_argument);
}

TEST(WrapAngleTest, RangeCongruenceAndIdempotence) {
  Rng rng(7);
  for (int k = 0; k < 10000; ++k) {
    const double a = rng.Uniform(-1e4, 1e4);
    const double w = WrapAngle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_EQ(WrapAngle(w), w);
    const double turns = (a - w) / kTwoPi;
    EXPECT_NEAR(turns, std::round(turns), 1e-9);
  }
}

TEST(Point2Test, RejectsNonFinite) {
  EXPECT_THROW(Point2(std::numeric_limits<double>::quiet_NaN(), 0.0),
               std::invalid_argument);
  EXPECT_THROW(Point2(0.0, -std::numeric_limits<double>::infinity()),
               std::invalid_argument);
}

TEST(Se2PoseTest, ConstructorWraps) {
  EXPECT_EQ(Se2Pose(-kPi, 0, 0).theta(), kPi);
  EXPECT_NEAR(Se2Pose(5.0 * kPi / 2.0, 0, 0).theta(), kPi / 2.0, 1e-15);
}

TEST(Se2PoseTest, ApplyExamples) {
  const Point2 a = Apply(Se2Pose::Identity(), {2, 3});
  EXPECT_EQ(a, Point2(2, 3));
  const Point2 b = Apply(Se2Pose(kPi / 2, 0, 0), {1, 0});
  EXPECT_NEAR(b.x(), 0.0, 1e-15);
  EXPECT_NEAR(b.y(), 1.0, 1e-15);
  const Point2 c = Apply(Se2Pose(kPi / 2, 1, 1), {1, 0});
  EXPECT_NEAR(c.x(), 1.0, 1e-15);
  EXPECT_NEAR(c.y(), 2.0, 1e-15);
}

TEST(Se2PoseTest, ComposeExamples) {
  const Se2Pose x(0.3, 1.5, -2.0);
  EXPECT_EQ(Compose(Se2Pose::Identity(), x), x);

  const Se2Pose c = Compose(Se2Pose(kPi / 2, 1, 0), Se2Pose(kPi / 2, 0, 0));
  EXPECT_EQ(c.theta(), kPi);
  EXPECT_NEAR(c.tx(), 1.0, 1e-15);
  EXPECT_NEAR(c.ty(), 0.0, 1e-15);
}

TEST(Se2PoseTest, InverseExamples) {
  EXPECT_EQ(Inverse(Se2Pose::Identity()), Se2Pose::Identity());

  const Se2Pose a = Inverse(Se2Pose(0, 3, -1));
  EXPECT_EQ(a.theta(), 0.0);
  EXPECT_EQ(a.tx(), -3.0);
  EXPECT_EQ(a.ty(), 1.0);

  const Se2Pose b = Inverse(Se2Pose(kPi / 2, 1, 0));
  EXPECT_NEAR(b.theta(), -kPi / 2, 1e-15);
  EXPECT_NEAR(b.tx(), 0.0, 1e-15);
  EXPECT_NEAR(b.ty(), 1.0, 1e-15);
}

TEST(Se2PoseTest, ComposeWithInverseIsIdentity) {
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Se2Pose p = testing::RandomPose(rng, 100.0);
    for (const Se2Pose& id : {Compose(p, Inverse(p)), Compose(Inverse(p), p)}) {
      EXPECT_NEAR(testing::AngleGap(id.theta(), 0.0), 0.0, 1e-12);
      EXPECT_NEAR(id.tx(), 0.0, 1e-12);
      EXPECT_NEAR(id.ty(), 0.0, 1e-12);
    }
  }
}

TEST(Se2PoseTest, ComposeMatchesSequentialApply) {
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Se2Pose a = testing::RandomPose(rng);
    const Se2Pose b = testing::RandomPose(rng);
    const Point2 p(rng.Uniform(-50, 50), rng.Uniform(-50, 50));
    const Point2 lhs = Apply(Compose(a, b), p);
    const Point2 rhs = Apply(a, Apply(b, p));
    EXPECT_NEAR(lhs.x(), rhs.x(), 1e-10);
    EXPECT_NEAR(lhs.y(), rhs.y(), 1e-10);
  }
}

TEST(Se2PoseTest, RotationDeterminantIsOne) {
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const Se2Pose p = testing::RandomPose(rng);
    EXPECT_NEAR(p.RotationMatrix().determinant(), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace bevglue
