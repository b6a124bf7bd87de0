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

#include <algorithm>
#include <cmath>
#include <set>

#include "mleak/noise_models.hpp"
#include "mleak/sgld_sim.hpp"

namespace mleak {
namespace {

TrainingSpec SmallSpec(int T = 20) {
  return TrainingSpec{3, {NormOrder::kL2, 1.0},
                      StepSchedule::Constant(T, 0.05, NoiseSpec::Gaussian(0.5))};
}

TEST(ClipLp, ScalesIntoBall) {
  Eigen::Vector3d v(3.0, -4.0, 0.0);
  EXPECT_NEAR(clip_lp(v, NormOrder::kL2, 1.0).norm(), 1.0, 1e-15);
  EXPECT_NEAR(clip_lp(v, NormOrder::kL1, 2.0).lpNorm<1>(), 2.0, 1e-15);
  const Eigen::Vector3d c = clip_lp(v, NormOrder::kLinf, 1.0);
  EXPECT_EQ(c, Eigen::Vector3d(1.0, -1.0, 0.0));
  Eigen::Vector3d small(0.1, 0.1, 0.1);
  EXPECT_EQ(clip_lp(small, NormOrder::kL2, 1.0), small);
}

TEST(SampleIndex, EachPassIsAPermutation) {
  const int n = 37;
  for (int pass = 0; pass < 3; ++pass) {
    std::set<int> seen;
    for (int t = pass * n; t < (pass + 1) * n; ++t) seen.insert(sample_index(5, n, t));
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(*seen.begin(), 0);
    EXPECT_EQ(*seen.rbegin(), n - 1);
  }
  EXPECT_EQ(sample_index(5, n, 10), sample_index(5, n, 10));
}

TEST(Tasks, MeanHasUnitNorm) {
  TaskSpec task;
  task.d = 7;
  EXPECT_NEAR(task_mean(task).norm(), 1.0, 1e-15);
}

TEST(Tasks, LossesAreClipped) {
  TaskSpec task{TaskKind::kQuadraticWell, 3, 50, 4, 0.85};
  const Dataset data = draw_dataset(task, 50, 9);
  const Eigen::VectorXd far = Eigen::VectorXd::Constant(3, 100.0);
  for (int j = 0; j < 50; ++j) {
    const double l = clipped_loss(task, far, data, j);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 0.85);
  }
  EXPECT_NEAR(mean_loss(task, far, data), 0.85, 1e-14);
}

TEST(Tasks, LogisticGradientMatchesFiniteDifference) {
  TaskSpec task{TaskKind::kLogisticSynthetic, 4, 10, 1, 1e9};
  const Dataset data = draw_dataset(task, 10, 2);
  Eigen::VectorXd w(4);
  w << 0.1, -0.2, 0.3, 0.05;
  const Eigen::VectorXd g = surrogate_gradient(task, w, data, 3);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXd wp = w, wm = w;
    wp[i] += h;
    wm[i] -= h;
    const double fd = (clipped_loss(task, wp, data, 3) - clipped_loss(task, wm, data, 3)) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-7);
  }
}

TEST(RunTraining, UpdatesRespectConstraintAndAccountantMatches) {
  TaskSpec task{TaskKind::kQuadraticWell, 3, 40, 77, 1.0};
  const TrainingSpec spec = SmallSpec();
  const RunResult r = run_training(task, spec, 123);
  ASSERT_EQ(r.update_norms.size(), 20u);
  for (double norm : r.update_norms) EXPECT_LE(norm, 1.0 + 1e-12);
  EXPECT_NEAR(r.accountant.total_leakage_nats, total_bound(spec).total_leakage_nats, 1e-15);
  EXPECT_NEAR(r.empirical_gen, r.test_loss - r.train_loss, 1e-15);
  const RunResult again = run_training(task, spec, 123);
  EXPECT_EQ(again.final_w, r.final_w);
}

TEST(RunTraining, NoiselessDescentApproachesTheMean) {
  // Tiny noise and many steps: w drifts toward the sample mean, near mu.
  TaskSpec task{TaskKind::kQuadraticWell, 2, 400, 3, 10.0};
  TrainingSpec spec{2, {NormOrder::kL2, 10.0},
                    StepSchedule::Constant(2000, 0.01, NoiseSpec::Gaussian(1e-6))};
  const RunResult r = run_training(task, spec, 1);
  EXPECT_LT((r.final_w - task_mean(task)).norm(), 0.3);
}

TEST(RunTraining, Errors) {
  TaskSpec task{TaskKind::kQuadraticWell, 4, 10, 0, 1.0};
  EXPECT_THROW(run_training(task, SmallSpec(), 0), Error);
  task.d = 3;
  task.loss_clip = 0.0;
  EXPECT_THROW(run_training(task, SmallSpec(), 0), Error);
}

TEST(Wilson, KnownValues) {
  const auto [lo, hi] = wilson_interval(0, 100);
  EXPECT_EQ(lo, 0.0);
  // z^2 / (n + z^2)
  const double z2 = 1.959963984540054 * 1.959963984540054;
  EXPECT_NEAR(hi, z2 / (100 + z2), 1e-15);
  const auto [lo5, hi5] = wilson_interval(50, 100);
  EXPECT_NEAR(lo5 + hi5, 1.0, 1e-15);
  EXPECT_THROW(wilson_interval(5, 4), Error);
}

TEST(GenTail, WorkerCountDoesNotChangeResults) {
  TaskSpec task{TaskKind::kQuadraticWell, 3, 30, 0, 0.85};
  const TrainingSpec spec = SmallSpec(10);
  const GenTailEstimate one = estimate_gen_tail(task, spec, 0.05, 100, 42, 1);
  const GenTailEstimate four = estimate_gen_tail(task, spec, 0.05, 100, 42, 4);
  EXPECT_EQ(one.gen_errors, four.gen_errors);
  EXPECT_EQ(one.exceed_count, four.exceed_count);
  EXPECT_EQ(one.trials, 100);
  EXPECT_GE(one.wilson_hi, one.empirical_prob);
  EXPECT_LE(one.wilson_lo, one.empirical_prob);
  const GenTailEstimate other = estimate_gen_tail(task, spec, 0.05, 100, 43, 1);
  EXPECT_NE(other.gen_errors, one.gen_errors);
}

TEST(GenTail, Errors) {
  TaskSpec task{TaskKind::kQuadraticWell, 3, 30, 0, 1.0};
  EXPECT_THROW(estimate_gen_tail(task, SmallSpec(), 0.1, 99, 0), Error);
  EXPECT_THROW(estimate_gen_tail(task, SmallSpec(), -0.1, 100, 0), Error);
}

TEST(Names, TaskKinds) {
  EXPECT_EQ(ParseTaskKind(TaskKindName(TaskKind::kLogisticSynthetic)),
            TaskKind::kLogisticSynthetic);
  EXPECT_EQ(ParseTaskKind("QuadraticWell"), TaskKind::kQuadraticWell);
  EXPECT_THROW(ParseTaskKind("mnist"), Error);
}

}  // namespace
}  // namespace mleak
