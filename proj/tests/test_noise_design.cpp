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

#include <cmath>

#include "mleak/leakage_bounds.hpp"
#include "mleak/noise_design.hpp"
#include "mleak/noise_models.hpp"

namespace mleak {
namespace {

TEST(OptimalNoise, SaturatingUniform) {
  const NoiseSpec s = optimal_noise(4.0);
  EXPECT_EQ(s.family, NoiseFamily::kUniformIid);
  EXPECT_NEAR(s.scale, std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(variance_per_coord(s), 4.0, 1e-14);
  EXPECT_NEAR(density_at_zero_1d(s), f0_floor(4.0), 1e-16);
  EXPECT_THROW(optimal_noise(0.0), Error);
  EXPECT_THROW(f0_floor(-1.0), Error);
}

TEST(Witnesses, FloorHoldsWithEqualityOnlyForSaturatingUniform) {
  for (double v : {0.25, 1.0, 4.0}) {
    const double floor = 1.0 / (2.0 * std::sqrt(3.0 * v));
    const auto ws = optimal_noise_witnesses(v);
    ASSERT_EQ(ws.size(), 6u);
    for (const CandidateDensity& c : ws) {
      EXPECT_LE(c.variance, v * (1 + 1e-12)) << c.name;
      if (c.name == "uniform") {
        EXPECT_NEAR(c.f0, floor, 1e-15);
      } else {
        EXPECT_GT(c.f0, floor * (1 + 1e-6)) << c.name;
      }
    }
  }
}

TEST(Ranking, UniformFirstAtEveryBudget) {
  for (double v : {0.25, 1.0, 4.0}) {
    for (int d : {1, 10, 100}) {
      const auto ranked = rank_families_for_linf(d, 0.1, 1.0, v);
      ASSERT_EQ(ranked.size(), 3u);
      EXPECT_EQ(ranked[0].noise.family, NoiseFamily::kUniformIid);
      EXPECT_LT(ranked[0].step_nats, ranked[1].step_nats);
      EXPECT_LE(ranked[1].step_nats, ranked[2].step_nats);
    }
  }
}

TEST(Ranking, ExampleValuesAtUnitBudget) {
  const auto ranked = rank_families_for_linf(10, 0.1, 1.0, 1.0);
  // Independent: 10 ln(1 + 2 (0.1) f0) with f0 = 1/(2 sqrt 3), 1/sqrt(2 pi), 1/sqrt 2.
  EXPECT_NEAR(ranked[0].step_nats, 10.0 * std::log1p(0.1 / std::sqrt(3.0)), 1e-14);
  EXPECT_NEAR(ranked[0].step_nats, 0.561298549224455, 1e-12);
  EXPECT_NEAR(ranked[0].step_nats, 0.56135, 1e-3);
  EXPECT_EQ(ranked[1].noise.family, NoiseFamily::kGaussianIso);
  EXPECT_NEAR(ranked[1].step_nats, 0.767651479505764, 1e-12);
  EXPECT_NEAR(ranked[1].step_nats, 0.76785, 1e-3);
  EXPECT_EQ(ranked[2].noise.family, NoiseFamily::kLaplaceIid);
  EXPECT_NEAR(ranked[2].step_nats, 10.0 * std::log1p(0.2 / std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(ranked[2].step_nats, 1.32274289509045, 1e-12);
}

TEST(Ranking, AgreesWithStepBound) {
  const UpdateConstraint linf{NormOrder::kLinf, 1.0};
  for (const RankedNoise& r : rank_families_for_linf(7, 0.3, 1.0, 2.0)) {
    EXPECT_NEAR(r.step_nats, step_bound(7, linf, 0.3, r.noise).nats, 1e-12);
  }
}

}  // namespace
}  // namespace mleak
