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
#include <numbers>

#include "mleak/noise_models.hpp"
#include "mleak/special_math.hpp"

namespace mleak {
namespace {

TEST(DensityAtZero, PerFamily) {
  EXPECT_NEAR(density_at_zero_1d(NoiseSpec::Gaussian(1.0)), 0.3989422804014327, 1e-15);
  EXPECT_DOUBLE_EQ(density_at_zero_1d(NoiseSpec::Laplace(3.0)), 1.5);
  EXPECT_DOUBLE_EQ(density_at_zero_1d(NoiseSpec::Uniform(2.0)), 0.25);
  EXPECT_THROW(density_at_zero_1d(NoiseSpec::Gaussian(0.0)), Error);
}

TEST(Variance, RoundTripsThroughScale) {
  for (NoiseFamily f : {NoiseFamily::kGaussianIso, NoiseFamily::kLaplaceIid,
                        NoiseFamily::kUniformIid}) {
    for (double v : {0.01, 0.25, 1.0, 4.0, 100.0}) {
      const NoiseSpec s = noise_from_variance(f, v);
      EXPECT_EQ(s.family, f);
      EXPECT_NEAR(variance_per_coord(s), v, 1e-13 * v);
      EXPECT_NEAR(std_per_coord(dilate(s, 3.0)), 3.0 * std::sqrt(v), 1e-12 * std::sqrt(v));
    }
  }
  EXPECT_THROW(noise_from_variance(NoiseFamily::kGaussianIso, 0.0), Error);
  EXPECT_THROW(dilate(NoiseSpec::Gaussian(1.0), -1.0), Error);
}

TEST(LogDensity, ProductOfCoordinates) {
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 0.05;
  for (const NoiseSpec& s : {NoiseSpec::Gaussian(0.7), NoiseSpec::Laplace(1.3),
                             NoiseSpec::Uniform(1.5)}) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += log_density_1d(s, x[i]);
    EXPECT_NEAR(log_density(NoiseAtom{s, 3}, x), sum, 1e-13);
  }
  EXPECT_EQ(log_density(NoiseAtom{NoiseSpec::Uniform(1.0), 3}, x), kNegInf);
  EXPECT_THROW(log_density(NoiseAtom{NoiseSpec::Gaussian(1.0), 2}, x), Error);
}

TEST(LogDensity, AtZeroMatchesMode) {
  const NoiseAtom atom{NoiseSpec::Gaussian(2.0), 4};
  EXPECT_NEAR(log_density_at_zero(atom), 4.0 * std::log(density_at_zero_1d(atom.spec)), 1e-13);
  EXPECT_NEAR(log_density_at_zero(atom), log_density(atom, Eigen::VectorXd::Zero(4)), 1e-13);
}

TEST(Sampling, SameSeedSameDraw) {
  const NoiseAtom atom{NoiseSpec::Laplace(2.0), 5};
  EXPECT_EQ(sample(atom, 17), sample(atom, 17));
  EXPECT_NE(sample(atom, 17), sample(atom, 18));
}

TEST(Sampling, MomentsMatchVariance) {
  for (const NoiseSpec& s : {NoiseSpec::Gaussian(0.8), NoiseSpec::Laplace(2.0),
                             NoiseSpec::Uniform(1.5)}) {
    Engine engine(derive_seed(99, {static_cast<std::uint64_t>(s.family)}));
    const NoiseAtom atom{s, 2};
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = sample(atom, engine);
      sum += x.sum();
      sq += x.squaredNorm();
    }
    const double var = variance_per_coord(s);
    EXPECT_NEAR(sum / (2.0 * n), 0.0, 5.0 * std::sqrt(var / (2.0 * n)));
    // Fourth moments are at most 6 var^2 for these families.
    EXPECT_NEAR(sq / (2.0 * n), var, 5.0 * std::sqrt(5.0 * var * var / (2.0 * n)));
    if (s.family == NoiseFamily::kUniformIid) {
      Engine e2(5);
      for (int i = 0; i < 1000; ++i) {
        EXPECT_LE(sample(atom, e2).lpNorm<Eigen::Infinity>(), s.scale);
      }
    }
  }
}

TEST(DeriveSeed, StreamsAreDistinctAndPure) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {0}), derive_seed(2, {0}));
  EXPECT_NE(derive_seed(1, {}), derive_seed(1, {0}));
}

}  // namespace
}  // namespace mleak
