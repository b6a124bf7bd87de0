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

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mleak/ball_geometry.hpp"
#include "mleak/core_model.hpp"
#include "mleak/leakage_bounds.hpp"

namespace mleak {

/// Scales v into B_p(0, L): radially for p in {1, 2}, by componentwise clamp
/// for p = inf. Vectors already inside are returned unchanged.
template <typename Derived>
VectorX<typename Derived::Scalar> clip_lp(const Eigen::MatrixBase<Derived>& v,
                                          NormOrder p,
                                          typename Derived::Scalar L) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> out = v;
  const Scalar norm = lp_norm(v, p);
  if (norm <= L) return out;
  if (p == NormOrder::kLinf) return out.cwiseMax(-L).cwiseMin(L);
  return out * (L / norm);
}

enum class TaskKind { kQuadraticWell, kLogisticSynthetic };

std::string_view TaskKindName(TaskKind kind);
TaskKind ParseTaskKind(std::string_view text);

/// Synthetic learning problem. QuadraticWell draws z ~ N(mu, I_d) with
/// ||mu||_2 = 1 along the all-ones direction and uses 0.5 ||w - z||^2;
/// LogisticSynthetic draws y = +-1 and x ~ N(y mu, I_d) with the logistic
/// loss. Reported losses are clipped to [0, loss_clip], which makes them
/// (loss_clip^2 / 4)-sub-Gaussian.
struct TaskSpec {
  TaskKind kind = TaskKind::kQuadraticWell;
  int d = 1;
  int n = 100;
  std::uint64_t data_seed = 0;
  double loss_clip = 1.0;
};

struct Dataset {
  Eigen::MatrixXd x;  // d x n
  Eigen::VectorXd y;  // labels for the logistic task, empty otherwise
};

Eigen::VectorXd task_mean(const TaskSpec& task);
Dataset draw_dataset(const TaskSpec& task, int count, std::uint64_t seed);
double clipped_loss(const TaskSpec& task, const Eigen::VectorXd& w,
                    const Dataset& data, int index);
double mean_loss(const TaskSpec& task, const Eigen::VectorXd& w,
                 const Dataset& data);
/// Gradient of the unclipped surrogate at one sample.
Eigen::VectorXd surrogate_gradient(const TaskSpec& task, const Eigen::VectorXd& w,
                                   const Dataset& data, int index);

/// Index of Z_t: cyclic passes over S, each pass a fresh permutation drawn
/// from (data_seed, pass). Never depends on the iterates.
int sample_index(std::uint64_t data_seed, int n, int t);

struct RunResult {
  Eigen::VectorXd final_w;
  std::vector<double> update_norms;  // ||clipped F||_p per step
  BoundReport accountant;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double empirical_gen = 0.0;  // test_loss - train_loss
};

/// W_0 = 0 and W_t = W_{t-1} - eta_t clip(grad) + xi_t; the output is W_T.
/// The training set is drawn from task.data_seed, the holdout (10 n samples)
/// from an independent stream, the noise from `seed`.
RunResult run_training(const TaskSpec& task, const TrainingSpec& spec,
                       std::uint64_t seed, const BoundOptions& bound_options = {});

struct GenTailEstimate {
  double empirical_prob = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  int exceed_count = 0;
  int trials = 0;
  std::vector<double> gen_errors;  // per trial, in trial order
  BoundReport accountant;
};

/// Wilson score interval at 95% for k successes out of n.
std::pair<double, double> wilson_interval(int k, int n);

/// Fraction of independent runs (fresh S, fresh noise) with
/// |gen-err| >= threshold. Trial i uses seeds derived from (seed, i) only,
/// so the result does not depend on `workers`.
GenTailEstimate estimate_gen_tail(const TaskSpec& task, const TrainingSpec& spec,
                                  double threshold, int trials,
                                  std::uint64_t seed, int workers = 1);

}  // namespace mleak
