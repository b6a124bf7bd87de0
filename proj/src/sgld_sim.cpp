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

#include "mleak/sgld_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "mleak/noise_models.hpp"

namespace mleak {
namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kHoldoutStream = 2;
constexpr std::uint64_t kPermutationStream = 3;
constexpr int kHoldoutFactor = 10;
constexpr double kWilsonZ = 1.959963984540054;

double log1p_exp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

struct TrainedModel {
  Eigen::VectorXd w;
  std::vector<double> update_norms;
  double train_loss = 0.0;
  double test_loss = 0.0;
};

TrainedModel train_once(const TaskSpec& task, const TrainingSpec& spec,
                        std::uint64_t seed) {
  const Dataset train =
      draw_dataset(task, task.n, derive_seed(task.data_seed, {kTrainStream}));
  const Dataset holdout = draw_dataset(
      task, kHoldoutFactor * task.n, derive_seed(task.data_seed, {kHoldoutStream}));
  TrainedModel model;
  model.w = Eigen::VectorXd::Zero(spec.d);
  const double L = spec.constraint.L;
  for (int t = 0; t < spec.schedule.T(); ++t) {
    const Step& step = spec.schedule.steps[t];
    const int index = sample_index(task.data_seed, task.n, t);
    const Eigen::VectorXd direction =
        clip_lp(surrogate_gradient(task, model.w, train, index),
                spec.constraint.p, L);
    const double norm = lp_norm(direction, spec.constraint.p);
    if (norm > L * (1.0 + 1e-12) + 1e-12) {
      throw std::logic_error("clipped update exceeds the Lp bound at step " +
                             std::to_string(t));
    }
    model.update_norms.push_back(norm);
    model.w += -step.eta * direction +
               sample(NoiseAtom{step.noise, spec.d},
                      derive_seed(seed, {static_cast<std::uint64_t>(t)}));
  }
  model.train_loss = mean_loss(task, model.w, train);
  model.test_loss = mean_loss(task, model.w, holdout);
  return model;
}

void check_task(const TaskSpec& task, const TrainingSpec& spec) {
  if (task.d != spec.d) {
    throw Error(ErrorCode::kDimensionMismatch, "task and training dimensions differ");
  }
  if (task.n < 1) throw Error(ErrorCode::kDomainError, "task n must be >= 1");
  if (!(task.loss_clip > 0)) {
    throw Error(ErrorCode::kDomainError, "loss clip must be > 0");
  }
}

}  // namespace

std::string_view TaskKindName(TaskKind kind) {
  return kind == TaskKind::kQuadraticWell ? "quadratic_well" : "logistic_synthetic";
}

TaskKind ParseTaskKind(std::string_view text) {
  if (text == "quadratic_well" || text == "QuadraticWell") {
    return TaskKind::kQuadraticWell;
  }
  if (text == "logistic_synthetic" || text == "LogisticSynthetic") {
    return TaskKind::kLogisticSynthetic;
  }
  throw Error(ErrorCode::kDomainError,
              "task must be quadratic_well or logistic_synthetic (got '" +
                  std::string(text) + "')");
}

Eigen::VectorXd task_mean(const TaskSpec& task) {
  return Eigen::VectorXd::Constant(task.d, 1.0 / std::sqrt(double(task.d)));
}

Dataset draw_dataset(const TaskSpec& task, int count, std::uint64_t seed) {
  Engine engine(seed);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd mu = task_mean(task);
  Dataset data;
  data.x.resize(task.d, count);
  if (task.kind == TaskKind::kLogisticSynthetic) data.y.resize(count);
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < count; ++j) {
    double label = 1.0;
    if (task.kind == TaskKind::kLogisticSynthetic) {
      label = coin(engine) ? 1.0 : -1.0;
      data.y[j] = label;
    }
    for (int i = 0; i < task.d; ++i) data.x(i, j) = label * mu[i] + normal(engine);
  }
  return data;
}

double clipped_loss(const TaskSpec& task, const Eigen::VectorXd& w,
                    const Dataset& data, int index) {
  double loss = 0.0;
  if (task.kind == TaskKind::kQuadraticWell) {
    loss = 0.5 * (w - data.x.col(index)).squaredNorm();
  } else {
    loss = log1p_exp(-data.y[index] * w.dot(data.x.col(index)));
  }
  return std::clamp(loss, 0.0, task.loss_clip);
}

double mean_loss(const TaskSpec& task, const Eigen::VectorXd& w,
                 const Dataset& data) {
  double total = 0.0;
  for (int j = 0; j < data.x.cols(); ++j) total += clipped_loss(task, w, data, j);
  return total / static_cast<double>(data.x.cols());
}

Eigen::VectorXd surrogate_gradient(const TaskSpec& task, const Eigen::VectorXd& w,
                                   const Dataset& data, int index) {
  if (task.kind == TaskKind::kQuadraticWell) return w - data.x.col(index);
  const double y = data.y[index];
  const double margin = y * w.dot(data.x.col(index));
  // d/dw log(1 + e^{-m}) = -y x sigmoid(-m)
  const double weight = 1.0 / (1.0 + std::exp(margin));
  return -y * weight * data.x.col(index);
}

int sample_index(std::uint64_t data_seed, int n, int t) {
  const int pass = t / n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Engine engine(derive_seed(data_seed, {kPermutationStream,
                                        static_cast<std::uint64_t>(pass)}));
  std::shuffle(order.begin(), order.end(), engine);
  return order[t % n];
}

RunResult run_training(const TaskSpec& task, const TrainingSpec& spec,
                       std::uint64_t seed, const BoundOptions& bound_options) {
  require_valid(spec);
  check_task(task, spec);
  RunResult result;
  result.accountant = total_bound(spec, bound_options);
  TrainedModel model = train_once(task, spec, seed);
  result.final_w = std::move(model.w);
  result.update_norms = std::move(model.update_norms);
  result.train_loss = model.train_loss;
  result.test_loss = model.test_loss;
  result.empirical_gen = model.test_loss - model.train_loss;
  return result;
}

std::pair<double, double> wilson_interval(int k, int n) {
  if (n <= 0 || k < 0 || k > n) {
    throw Error(ErrorCode::kDomainError, "Wilson interval needs 0 <= k <= n, n > 0");
  }
  const double z2 = kWilsonZ * kWilsonZ;
  const double phat = static_cast<double>(k) / n;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      kWilsonZ * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  const double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = k == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

GenTailEstimate estimate_gen_tail(const TaskSpec& task, const TrainingSpec& spec,
                                  double threshold, int trials,
                                  std::uint64_t seed, int workers) {
  require_valid(spec);
  check_task(task, spec);
  if (trials < 100) {
    throw Error(ErrorCode::kDomainError, "estimate_gen_tail needs >= 100 trials");
  }
  if (!(threshold >= 0)) throw Error(ErrorCode::kDomainError, "threshold must be >= 0");
  GenTailEstimate out;
  out.accountant = total_bound(spec);
  out.trials = trials;
  out.gen_errors.assign(trials, 0.0);

  const auto run_trial = [&](int i) {
    TaskSpec fresh = task;
    fresh.data_seed = derive_seed(seed, {static_cast<std::uint64_t>(i), 0});
    const TrainedModel model = train_once(
        fresh, spec, derive_seed(seed, {static_cast<std::uint64_t>(i), 1}));
    out.gen_errors[i] = model.test_loss - model.train_loss;
  };
  workers = std::clamp(workers, 1, trials);
  if (workers == 1) {
    for (int i = 0; i < trials; ++i) run_trial(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (int k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        try {
          for (int i = k; i < trials; i += workers) run_trial(i);
        } catch (...) {
          failures[k] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : failures) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (double g : out.gen_errors) {
    if (std::abs(g) >= threshold) ++out.exceed_count;
  }
  out.empirical_prob = static_cast<double>(out.exceed_count) / trials;
  std::tie(out.wilson_lo, out.wilson_hi) = wilson_interval(out.exceed_count, trials);
  return out;
}

}  // namespace mleak
