// Copyright 2026 The mleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "mleak/ball_geometry.hpp"

namespace mleak {
namespace {

TEST(Distances, L2Ball) {
  Eigen::Vector2d w(3.0, 4.0);
  EXPECT_DOUBLE_EQ(dist_l2_to_l2ball(w, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(dist_l2_to_l2ball(w, 6.0), 0.0);
}

TEST(Distances, CubeClampsCoordinates) {
  Eigen::Vector3d w(2.0, -0.5, -3.0);
  const Eigen::Vector3d d = dist_linf_to_linfball(w, 1.0);
  EXPECT_EQ(d, Eigen::Vector3d(1.0, 0.0, 2.0));
  EXPECT_DOUBLE_EQ(dist_l2_to_ball(w, NormOrder::kLinf, 1.0), std::sqrt(5.0));
}

TEST(Distances, L1BallInL1Norm) {
  Eigen::Vector3d w(1.0, -2.0, 0.5);
  EXPECT_DOUBLE_EQ(dist_l1_to_l1ball(w, 1.5), 2.0);
  EXPECT_DOUBLE_EQ(dist_l1_to_l1ball(w, 4.0), 0.0);
}

TEST(L1Projection, SimpleCases) {
  Eigen::Vector2d w(2.0, 0.0);
  const auto p = project_l2_onto_l1ball(w, 1.0);
  EXPECT_NEAR(p.point[0], 1.0, 1e-15);
  EXPECT_NEAR(p.point[1], 0.0, 1e-15);
  EXPECT_NEAR(p.distance, 1.0, 1e-15);

  Eigen::Vector2d diag(1.0, 1.0);
  const auto q = project_l2_onto_l1ball(diag, 1.0);
  EXPECT_NEAR(q.point[0], 0.5, 1e-15);
  EXPECT_NEAR(q.point[1], 0.5, 1e-15);
  EXPECT_NEAR(q.threshold, 0.5, 1e-15);

  Eigen::Vector2d inside(0.2, -0.3);
  EXPECT_EQ(project_l2_onto_l1ball(inside, 1.0).point, inside);
  EXPECT_NEAR(project_l2_onto_l1ball(inside, 0.0).distance, inside.norm(), 1e-15);
}

// Brute-force oracle: a projection onto a convex set satisfies
// <w - P, y - P> <= 0 for every y in the set, so checking against the
// 2d signed vertices of the ball is enough.
TEST(L1Projection, VariationalInequalityOnVertices) {
  std::mt19937_64 engine(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + trial % 7;
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) w[i] = 2.0 * normal(engine);
    const double r = 0.1 + std::abs(normal(engine));
    const auto p = project_l2_onto_l1ball(w, r);
    EXPECT_LE(p.point.lpNorm<1>(), r * (1 + 1e-12));
    for (int i = 0; i < d; ++i) {
      for (double sign : {-1.0, 1.0}) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
        y[i] = sign * r;
        EXPECT_LE((w - p.point).dot(y - p.point), 1e-10);
      }
    }
  }
}

TEST(LpNorm, Orders) {
  Eigen::Vector3d v(1.0, -2.0, 2.0);
  EXPECT_DOUBLE_EQ(lp_norm(v, NormOrder::kL1), 5.0);
  EXPECT_DOUBLE_EQ(lp_norm(v, NormOrder::kL2), 3.0);
  EXPECT_DOUBLE_EQ(lp_norm(v, NormOrder::kLinf), 2.0);
}

TEST(Templates, WorkOnFloatAndBlocks) {
  Eigen::Vector4f w(3.0f, 4.0f, 9.0f, 9.0f);
  EXPECT_FLOAT_EQ(dist_l2_to_l2ball(w.head<2>(), 1.0f), 4.0f);
  EXPECT_FLOAT_EQ(lp_norm(w.head<2>(), NormOrder::kL1), 7.0f);
}

}  // namespace
}  // namespace mleak
