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

#include "mleak/h_functional.hpp"
#include "mleak/noise_models.hpp"

namespace mleak {
namespace {

constexpr NormOrder kL1 = NormOrder::kL1;
constexpr NormOrder kL2 = NormOrder::kL2;
constexpr NormOrder kLinf = NormOrder::kLinf;

// Gaussian sigma = 1, p = 2 in polar coordinates: h = |S^{d-1}| (2 pi)^{-d/2}
// \int_0^inf (u + r)^{d-1} e^{-u^2/2} du. Written out for d = 2, 3.
double polar_h2_d2(double r) { return 1.0 + r * std::sqrt(std::numbers::pi / 2.0); }
double polar_h2_d3(double r) {
  return 1.0 + r * r + 2.0 * r * std::sqrt(2.0 / std::numbers::pi);
}

TEST(ClosedL2Gaussian, MatchesPolarIntegral) {
  EXPECT_NEAR(h_closed_l2_gaussian({2, kL2, NoiseSpec::Gaussian(1.0), 1.0}).linear(),
              2.25331413731550, 1e-13);
  EXPECT_NEAR(h_closed_l2_gaussian({3, kL2, NoiseSpec::Gaussian(1.0), 0.5}).linear(),
              2.04788456080287, 1e-13);
  for (double r : {0.0, 0.1, 0.7, 3.0, 10.0}) {
    EXPECT_NEAR(h_closed_l2_gaussian({2, kL2, NoiseSpec::Gaussian(1.0), r}).linear(),
                polar_h2_d2(r), 1e-12 * polar_h2_d2(r));
    EXPECT_NEAR(h_closed_l2_gaussian({3, kL2, NoiseSpec::Gaussian(1.0), r}).linear(),
                polar_h2_d3(r), 1e-12 * polar_h2_d3(r));
  }
}

TEST(ClosedL2Gaussian, DependsOnlyOnRadiusOverSigma) {
  for (int d : {1, 4, 30}) {
    const double a = h_closed_l2_gaussian({d, kL2, NoiseSpec::Gaussian(2.0), 1.0}).log_v;
    const double b = h_closed_l2_gaussian({d, kL2, NoiseSpec::Gaussian(0.5), 0.25}).log_v;
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(ClosedForms, BaseCaseIsOne) {
  for (double r : {0.0, 0.3, 5.0}) {
    EXPECT_NEAR(h_closed_l2_gaussian({1, kL2, NoiseSpec::Gaussian(1.0), r}).log_v, 0.0, 1e-14);
    EXPECT_NEAR(h_closed_linf_product({1, kLinf, NoiseSpec::Uniform(1.0), r}).log_v, 0.0, 1e-14);
    EXPECT_NEAR(h_closed_l1_laplace({1, kL1, NoiseSpec::Laplace(2.0), r}).log_v, 0.0, 1e-14);
    EXPECT_NEAR(h_closed_l1_gaussian_upper({1, kL1, NoiseSpec::Gaussian(1.0), r}).log_v, 0.0,
                1e-14);
  }
}

TEST(ClosedLinf, SmallDimensions) {
  // d = 2: (1 + t)^2 - t^2 = 1 + 2 t with t = 2 r f0.
  const NoiseSpec u = NoiseSpec::Uniform(1.0);
  EXPECT_NEAR(h_closed_linf_product({2, kLinf, u, 0.5}).linear(), 1.0 + 2.0 * 0.5, 1e-14);
  const double t = 2.0 * 0.3 * density_at_zero_1d(NoiseSpec::Laplace(2.0));
  EXPECT_NEAR(h_closed_linf_product({3, kLinf, NoiseSpec::Laplace(2.0), 0.3}).linear(),
              std::pow(1 + t, 3) - std::pow(t, 3), 1e-13);
}

TEST(ClosedLinf, ExampleValue) {
  // d = 10, variance 1, Gaussian, r = 0.1.
  EXPECT_NEAR(h_closed_linf_product({10, kLinf, NoiseSpec::Gaussian(1.0), 0.1}).linear(),
              2.15469994995248, 1e-12);
}

TEST(ClosedL1Laplace, PartialExponentialSums) {
  const NoiseSpec lap = NoiseSpec::Laplace(2.0);
  EXPECT_NEAR(h_closed_l1_laplace({2, kL1, lap, 0.5}).linear(), 2.0, 1e-14);
  EXPECT_NEAR(h_closed_l1_laplace({3, kL1, lap, 0.5}).linear(), 2.5, 1e-14);
  // As d grows the sum tends to e^{lambda r}.
  EXPECT_NEAR(h_closed_l1_laplace({400, kL1, lap, 0.5}).log_v, 1.0, 1e-12);
}

TEST(ClosedForms, WrongCaseIsRejected) {
  EXPECT_THROW(h_closed_l2_gaussian({2, kL1, NoiseSpec::Gaussian(1.0), 1.0}), Error);
  EXPECT_THROW(h_closed_linf_product({2, kL2, NoiseSpec::Gaussian(1.0), 1.0}), Error);
  EXPECT_THROW(h_closed_l1_laplace({2, kL1, NoiseSpec::Gaussian(1.0), 1.0}), Error);
  EXPECT_THROW(h_closed_l2_gaussian({0, kL2, NoiseSpec::Gaussian(1.0), 1.0}), Error);
  EXPECT_THROW(h_closed_l2_gaussian({2, kL2, NoiseSpec::Gaussian(1.0), -1.0}), Error);
}

TEST(ClosedForms, StableAtLargeDimension) {
  for (int d : {1000, 100000}) {
    const double v = h_closed_l2_gaussian({d, kL2, NoiseSpec::Gaussian(1.0), 0.1}).log_v;
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
    EXPECT_TRUE(std::isfinite(h_closed_linf_product({d, kLinf, NoiseSpec::Gaussian(1.0), 0.1}).log_v));
  }
}

struct QuadCase {
  int d;
  NormOrder p;
  NoiseSpec noise;
  double r;
};

LogValue closed_for(const HQuery& q) {
  if (q.p == kLinf) return h_closed_linf_product(q);
  if (q.p == kL2) return h_closed_l2_gaussian(q);
  return h_closed_l1_laplace(q);
}

TEST(HNumeric, QuadratureMatchesExactClosedForms) {
  const QuadCase cases[] = {
      {1, kL2, NoiseSpec::Gaussian(1.0), 0.5},   {2, kL2, NoiseSpec::Gaussian(1.0), 1.0},
      {2, kL2, NoiseSpec::Gaussian(0.5), 0.05},  {2, kLinf, NoiseSpec::Uniform(1.0), 0.5},
      {2, kLinf, NoiseSpec::Laplace(1.0), 2.0},  {2, kLinf, NoiseSpec::Gaussian(1.0), 1.0},
      {2, kL1, NoiseSpec::Laplace(1.0), 0.1},    {2, kL1, NoiseSpec::Laplace(1.0), 2.0},
  };
  for (const QuadCase& c : cases) {
    const HQuery q{c.d, c.p, c.noise, c.r};
    const HEstimate est = h_numeric(q, HMethod::kQuadrature, 0, 0);
    EXPECT_EQ(est.method, HMethod::kQuadrature);
    EXPECT_NEAR(est.log_h, closed_for(q).log_v, 1e-6)
        << NormOrderName(c.p) << " " << NoiseFamilyName(c.noise.family) << " r=" << c.r;
  }
}

TEST(HNumeric, UniformUnderL2HasNoClosedFormButIntegrates) {
  // r >= a: the support of sup_x f(w - x) is the Minkowski sum of the disc
  // and the square, of area pi r^2 + 8 a r + 4 a^2, minus the disc.
  const double a = 1.0, r = 1.5;
  const double expected = (8.0 * a * r + 4.0 * a * a) / (4.0 * a * a);
  const HEstimate est = h_numeric({2, kL2, NoiseSpec::Uniform(a), r}, HMethod::kQuadrature, 0, 0);
  EXPECT_NEAR(est.h(), expected, 1e-8);
}

TEST(HNumeric, MonteCarloAgreesAtThreeDimensions) {
  const HQuery q{3, kL2, NoiseSpec::Gaussian(1.0), 0.5};
  const HEstimate est = h_numeric(q, HMethod::kMonteCarlo, 200000, 11);
  EXPECT_GT(est.std_err, 0.0);
  EXPECT_NEAR(est.log_h, std::log(2.04788456080287), 4.0 * est.relative_std_err());
  // Same seed, same estimate.
  EXPECT_EQ(h_numeric(q, HMethod::kMonteCarlo, 200000, 11).log_h, est.log_h);
}

TEST(HNumeric, GaussianL1UpperBoundDominatesOracle) {
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    const HQuery q{2, kL1, NoiseSpec::Gaussian(1.0), r};
    const double oracle = h_numeric(q, HMethod::kQuadrature, 0, 0).log_h;
    EXPECT_LE(oracle, h_closed_l1_gaussian_upper(q).log_v + 1e-9) << r;
  }
}

TEST(HNumeric, Errors) {
  EXPECT_THROW(h_numeric({3, kL2, NoiseSpec::Gaussian(1.0), 1.0}, HMethod::kQuadrature, 0, 0),
               Error);
  EXPECT_THROW(h_numeric({9, kL2, NoiseSpec::Gaussian(1.0), 1.0}, HMethod::kMonteCarlo, 1000, 0),
               Error);
  EXPECT_THROW(h_numeric({2, kL2, NoiseSpec::Laplace(1.0), 1.0}, HMethod::kQuadrature, 0, 0),
               Error);
  EXPECT_THROW(h_numeric({2, kL2, NoiseSpec::Gaussian(1.0), 1.0}, HMethod::kMonteCarlo, 10, 0),
               Error);
  EXPECT_THROW(h_numeric({2, kL2, NoiseSpec::Gaussian(1.0), 1.0}, HMethod::kClosedForm, 0, 0),
               Error);
}

TEST(SupDensity, MatchesShiftToNearestBallPoint) {
  const NoiseAtom atom{NoiseSpec::Gaussian(1.0), 2};
  Eigen::Vector2d w(3.0, 4.0);
  // Nearest point of the L2 ball of radius 1 is w / 5.
  EXPECT_NEAR(log_sup_density_over_ball(atom, kL2, 1.0, w),
              log_density(atom, w - w / 5.0), 1e-13);
  Eigen::Vector2d inside(0.1, 0.2);
  EXPECT_NEAR(log_sup_density_over_ball(atom, kL2, 1.0, inside), log_density_at_zero(atom),
              1e-13);
  EXPECT_THROW(
      log_sup_density_over_ball(NoiseAtom{NoiseSpec::Laplace(1.0), 2}, kL2, 1.0, w), Error);
}

}  // namespace
}  // namespace mleak
