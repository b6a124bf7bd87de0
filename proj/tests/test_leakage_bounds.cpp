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

#include "mleak/leakage_bounds.hpp"
#include "mleak/noise_models.hpp"

namespace mleak {
namespace {

constexpr UpdateConstraint kL2Unit{NormOrder::kL2, 1.0};

// Per-step Gaussian/L2 bound with sigma = 1 and radius rho, from the polar
// form: rho^d 2^{-d/2} / Gamma(d/2 + 1) + 2^{1-d/2} / Gamma(d/2) \int (u + rho)^{d-1} e^{-u^2/2} du.
// The integral is done by composite Simpson on [0, 40].
double polar_gaussian_step(int d, double rho) {
  const int n = 20000;
  const double hi = 40.0, step = hi / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = i * step;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(u + rho, d - 1) * std::exp(-0.5 * u * u);
  }
  acc *= step / 3.0;
  const double half = 0.5 * d;
  return std::log(std::pow(rho, d) * std::pow(2.0, -half) / std::tgamma(half + 1.0) +
                  std::pow(2.0, 1.0 - half) / std::tgamma(half) * acc);
}

TEST(StepBound, GaussianL2Examples) {
  const StepLeakageTerm t1 = step_bound(1, kL2Unit, 1.0, NoiseSpec::Gaussian(1.0));
  EXPECT_NEAR(t1.nats, 0.586610729762924, 1e-12);
  EXPECT_EQ(t1.bound_case, BoundCase::kGaussianL2);
  EXPECT_TRUE(t1.is_exact_h);
  const StepLeakageTerm t2 = step_bound(2, kL2Unit, 1.0, NoiseSpec::Gaussian(1.0));
  EXPECT_NEAR(t2.nats, 1.01280532692116, 1e-12);
  EXPECT_EQ(t2.log_inside, t2.nats);
}

TEST(StepBound, GaussianL2AgainstPolarOracle) {
  for (int d : {1, 2, 3, 5, 8}) {
    for (double rho : {0.05, 0.1, 0.5, 1.0, 2.0}) {
      EXPECT_NEAR(step_bound(d, kL2Unit, rho, NoiseSpec::Gaussian(1.0)).nats,
                  polar_gaussian_step(d, rho), 1e-9)
          << d << " " << rho;
    }
  }
  // Shipped simulation setting: d = 5, eta L = 0.05, sigma = 0.5.
  EXPECT_NEAR(step_bound(5, kL2Unit, 0.05, NoiseSpec::Gaussian(0.5)).nats,
              polar_gaussian_step(5, 0.1), 1e-9);
  EXPECT_NEAR(step_bound(5, kL2Unit, 0.05, NoiseSpec::Gaussian(0.5)).nats,
              0.210153081379366, 1e-12);
}

TEST(StepBound, ProductLinfIsLog1pForm) {
  const UpdateConstraint linf{NormOrder::kLinf, 1.0};
  for (const NoiseSpec& s : {NoiseSpec::Gaussian(1.0), NoiseSpec::Laplace(2.0),
                             NoiseSpec::Uniform(0.7)}) {
    for (int d : {1, 3, 10, 1000}) {
      const double t = 2.0 * 0.1 * density_at_zero_1d(s);
      const StepLeakageTerm term = step_bound(d, linf, 0.1, s);
      EXPECT_EQ(term.bound_case, BoundCase::kProductLinf);
      EXPECT_NEAR(term.nats, d * std::log1p(t), 1e-12 * std::max(1.0, d * std::log1p(t)));
    }
  }
  EXPECT_NEAR(step_bound(10, linf, 0.1, NoiseSpec::Gaussian(1.0)).nats, 0.767651479505764,
              1e-12);
}

TEST(StepBound, LaplaceL1IsTruncatedExponential) {
  const UpdateConstraint l1{NormOrder::kL1, 1.0};
  // With lambda r = 1 the inside of the log is sum_{i<=d} 1/i!.
  double partial = 0.0, fact = 1.0;
  for (int d = 1; d <= 25; ++d) {
    if (d == 1) partial = 2.0;
    fact *= d;
    if (d > 1) partial += 1.0 / fact;
    EXPECT_NEAR(step_bound(d, l1, 0.5, NoiseSpec::Laplace(2.0)).nats, std::log(partial), 1e-13)
        << d;
  }
}

TEST(StepBound, LaplaceLimitAndMonotoneInD) {
  const UpdateConstraint l1{NormOrder::kL1, 1.0};
  // Each step adds 1/d! inside the log; once that drops below the double
  // resolution the sequence can only stay flat.
  double prev = 0.0, fact = 1.0;
  for (int d = 1; d <= 200; ++d) {
    fact *= d;
    const double v = step_bound(d, l1, 1.0, NoiseSpec::Laplace(1.0)).nats;
    if (1.0 / fact > 1e-14) {
      EXPECT_GT(v, prev) << d;
    } else {
      EXPECT_GE(v, prev) << d;
    }
    prev = v;
  }
  EXPECT_NEAR(prev, 1.0, 1e-6);
}

TEST(StepBound, GaussianUnderL1PicksTheSmallerForm) {
  const UpdateConstraint l1{NormOrder::kL1, 1.0};
  const StepLeakageTerm d1 = step_bound(1, l1, 0.8, NoiseSpec::Gaussian(1.0));
  ASSERT_EQ(d1.candidates.size(), 2u);
  EXPECT_NEAR(d1.candidates[0].nats, d1.candidates[1].nats, 1e-12);
  for (int d : {2, 5, 20}) {
    const StepLeakageTerm t = step_bound(d, l1, 0.8, NoiseSpec::Gaussian(1.0));
    double lo = t.candidates.front().nats;
    for (const CandidateBound& c : t.candidates) lo = std::min(lo, c.nats);
    EXPECT_EQ(t.nats, lo);
    // The L2-ball bound is exact for h only under p = 2.
    for (const CandidateBound& c : t.candidates) EXPECT_FALSE(c.is_exact_h);
  }
}

TEST(StepBound, SelectorForcesCase) {
  BoundOptions opts;
  opts.selector = CaseSelector::kGaussianL1;
  const UpdateConstraint l1{NormOrder::kL1, 1.0};
  EXPECT_EQ(step_bound(3, l1, 0.5, NoiseSpec::Gaussian(1.0), opts).bound_case,
            BoundCase::kGaussianL1);
  opts.selector = CaseSelector::kLaplaceL1;
  try {
    step_bound(3, l1, 0.5, NoiseSpec::Gaussian(1.0), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongCase);
  }
}

TEST(StepBound, NoClosedFormAndNumericFallback) {
  try {
    step_bound(2, kL2Unit, 1.0, NoiseSpec::Uniform(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoClosedForm);
    EXPECT_NE(std::string(e.what()).find("--fallback numeric"), std::string::npos);
  }
  BoundOptions opts;
  opts.numeric_fallback = true;
  const StepLeakageTerm t = step_bound(2, kL2Unit, 1.0, NoiseSpec::Uniform(1.0), opts);
  EXPECT_EQ(t.bound_case, BoundCase::kNumeric);
  EXPECT_FALSE(t.is_exact_h);
  // f(0) V = pi / 4 and h = 1 + 2 r / a = 3 for the square/disc Minkowski sum.
  EXPECT_NEAR(t.nats, std::log(std::numbers::pi / 4.0 + 3.0), 1e-7);
  EXPECT_THROW(step_bound(9, kL2Unit, 1.0, NoiseSpec::Uniform(1.0), opts), Error);
}

TEST(StepBound, ZeroRadiusLeaksNothing) {
  const StepLeakageTerm t = step_bound(4, UpdateConstraint{NormOrder::kL2, 0.0}, 1.0,
                                       NoiseSpec::Gaussian(1.0));
  EXPECT_EQ(t.nats, 0.0);
}

TEST(StepBound, DomainErrors) {
  EXPECT_THROW(step_bound(0, kL2Unit, 1.0, NoiseSpec::Gaussian(1.0)), Error);
  EXPECT_THROW(step_bound(2, kL2Unit, 0.0, NoiseSpec::Gaussian(1.0)), Error);
  EXPECT_THROW(step_bound(2, kL2Unit, 1.0, NoiseSpec::Gaussian(-1.0)), Error);
}

TEST(StepBound, MonotoneInEtaLAndSigma) {
  for (int d : {1, 3, 10}) {
    double prev = -1.0;
    for (int i = 0; i < 20; ++i) {
      const double eta = 0.01 * std::pow(1.4, i);
      const double v = step_bound(d, kL2Unit, eta, NoiseSpec::Gaussian(1.0)).nats;
      EXPECT_GE(v, prev);
      prev = v;
    }
    prev = 1e300;
    for (int i = 0; i < 20; ++i) {
      const double sigma = 0.05 * std::pow(1.4, i);
      const double v = step_bound(d, kL2Unit, 0.3, NoiseSpec::Gaussian(sigma)).nats;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(TotalBound, SumsStepsAndAddsBaselines) {
  TrainingSpec spec{5, kL2Unit, StepSchedule::Constant(50, 0.05, NoiseSpec::Gaussian(0.5))};
  const BoundReport r = total_bound(spec);
  ASSERT_EQ(r.per_step.size(), 50u);
  EXPECT_EQ(r.per_step.front().step_index, 1);
  EXPECT_EQ(r.per_step.back().step_index, 50);
  EXPECT_NEAR(r.total_leakage_nats, 10.5076540689683, 1e-10);
  ASSERT_TRUE(r.mi_baseline_nats.has_value());
  EXPECT_NEAR(*r.mi_baseline_nats, 50 * 2.5 * std::log1p(0.05 * 0.05 / 5.0 / 0.25), 1e-12);
  EXPECT_FALSE(r.laplace_limit_nats.has_value());
  EXPECT_EQ(r.spec_echo, spec);
}

TEST(TotalBound, MiBaselineIsBelowMaximalLeakage) {
  for (int d : {1, 2, 10}) {
    TrainingSpec spec{d, kL2Unit, StepSchedule::Constant(3, 0.4, NoiseSpec::Gaussian(1.0))};
    const BoundReport r = total_bound(spec);
    EXPECT_LT(*r.mi_baseline_nats, r.total_leakage_nats);
  }
  TrainingSpec one{2, kL2Unit, StepSchedule::Constant(1, 1.0, NoiseSpec::Gaussian(1.0))};
  EXPECT_NEAR(mi_bound_pensia(one), std::log(1.5), 1e-15);
}

TEST(TotalBound, LaplaceLimitReported) {
  TrainingSpec spec{10, {NormOrder::kL1, 2.0},
                    StepSchedule::Constant(4, 0.25, NoiseSpec::Laplace(3.0))};
  const BoundReport r = total_bound(spec);
  ASSERT_TRUE(r.laplace_limit_nats.has_value());
  EXPECT_NEAR(*r.laplace_limit_nats, 4 * 3.0 * 0.5, 1e-14);
  EXPECT_LT(r.total_leakage_nats, *r.laplace_limit_nats);
  EXPECT_FALSE(r.mi_baseline_nats.has_value());
}

TEST(TotalBound, RejectsInvalidSpec) {
  TrainingSpec spec{2, kL2Unit, {}};
  try {
    total_bound(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSpec);
  }
}

}  // namespace
}  // namespace mleak
