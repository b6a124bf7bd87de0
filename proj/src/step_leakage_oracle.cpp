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

#include "mleak/step_leakage_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mleak/ball_geometry.hpp"
#include "mleak/special_math.hpp"
#include "quadrature.hpp"

namespace mleak {
namespace {

constexpr int kMaxQuadratureDim = 2;
constexpr int kMaxMonteCarloDim = 5;
constexpr int kBatches = 32;
constexpr std::int64_t kDefaultMonteCarloBudget = 400'000;

Eigen::MatrixXd unique_columns(const Eigen::MatrixXd& shifts) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < shifts.cols(); ++j) {
    bool dup = false;
    for (Eigen::Index k : keep) {
      if (shifts.col(j) == shifts.col(k)) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  Eigen::MatrixXd out(shifts.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(j) = shifts.col(keep[j]);
  return out;
}

// Pointwise max of the shifted log-densities.
double log_max_density(const NoiseAtom& atom, const Eigen::MatrixXd& shifts,
                       const Eigen::VectorXd& w) {
  double best = kNegInf;
  for (Eigen::Index j = 0; j < shifts.cols(); ++j) {
    best = std::max(best, log_density(atom, w - shifts.col(j)));
  }
  return best;
}

// Candidate kinks of w2 -> max_j f(w - s_j) at fixed w1 (d = 2).
std::vector<double> inner_breaks(const NoiseSpec& noise,
                                 const Eigen::MatrixXd& s, double w1) {
  std::vector<double> out;
  const Eigen::Index m = s.cols();
  for (Eigen::Index j = 0; j < m; ++j) {
    out.push_back(s(1, j));
    if (noise.family == NoiseFamily::kUniformIid) {
      out.push_back(s(1, j) - noise.scale);
      out.push_back(s(1, j) + noise.scale);
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double dy = s(1, j) - s(1, i);
      if (dy == 0) continue;
      if (noise.family == NoiseFamily::kGaussianIso) {
        // |w - s_i|^2 = |w - s_j|^2 is a line.
        const double c = s.col(j).squaredNorm() - s.col(i).squaredNorm();
        out.push_back((c - 2.0 * w1 * (s(0, j) - s(0, i))) / (2.0 * dy));
      } else if (noise.family == NoiseFamily::kLaplaceIid) {
        // |w2 - s_i2| - |w2 - s_j2| = |w1 - s_j1| - |w1 - s_i1|, middle piece.
        const double c = std::abs(w1 - s(0, j)) - std::abs(w1 - s(0, i));
        const double sign = dy > 0 ? 1.0 : -1.0;
        out.push_back((sign * c + s(1, i) + s(1, j)) / 2.0);
      }
    }
  }
  return out;
}

std::vector<double> outer_breaks(const NoiseSpec& noise,
                                 const Eigen::MatrixXd& s) {
  std::vector<double> out;
  const Eigen::Index m = s.cols();
  for (Eigen::Index j = 0; j < m; ++j) {
    out.push_back(s(0, j));
    if (noise.family == NoiseFamily::kUniformIid) {
      out.push_back(s(0, j) - noise.scale);
      out.push_back(s(0, j) + noise.scale);
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      out.push_back(0.5 * (s(0, i) + s(0, j)));
      if (noise.family != NoiseFamily::kGaussianIso) continue;
      // Circumcenters are where three Voronoi cells meet.
      for (Eigen::Index k = j + 1; k < m; ++k) {
        const Eigen::Vector2d a = s.col(i), b = s.col(j), c = s.col(k);
        const double det = 2.0 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) +
                                  c.x() * (a.y() - b.y()));
        if (std::abs(det) < 1e-14) continue;
        out.push_back((a.squaredNorm() * (b.y() - c.y()) +
                       b.squaredNorm() * (c.y() - a.y()) +
                       c.squaredNorm() * (a.y() - b.y())) /
                      det);
      }
    }
  }
  return out;
}

HEstimate quadrature(const StepShiftSet& s, const Eigen::MatrixXd& shifts,
                     std::int64_t budget) {
  const NoiseAtom atom{s.noise, s.d()};
  detail::QuadratureOptions opts;
  opts.rel_tol = 1e-11;
  if (budget > 0) {
    opts.max_intervals = static_cast<int>(std::min<std::int64_t>(budget, 1'000'000));
  }
  const bool uniform = s.noise.family == NoiseFamily::kUniformIid;
  const double a = s.noise.scale;
  std::int64_t evals = 0;

  const auto range = [&](int row) {
    const double lo = shifts.row(row).minCoeff();
    const double hi = shifts.row(row).maxCoeff();
    return uniform ? std::pair{lo - a, hi + a}
                   : std::pair{-detail::kInf, detail::kInf};
  };

  double integral = 0.0;
  if (s.d() == 1) {
    Eigen::VectorXd w(1);
    auto f = [&](double x) {
      w[0] = x;
      return std::exp(log_max_density(atom, shifts, w));
    };
    std::vector<double> breaks;
    for (Eigen::Index j = 0; j < shifts.cols(); ++j) {
      breaks.push_back(shifts(0, j));
      if (uniform) {
        breaks.push_back(shifts(0, j) - a);
        breaks.push_back(shifts(0, j) + a);
      }
      for (Eigen::Index k = j + 1; k < shifts.cols(); ++k) {
        breaks.push_back(0.5 * (shifts(0, j) + shifts(0, k)));
      }
    }
    const auto [lo, hi] = range(0);
    integral = detail::integrate_piecewise(f, lo, hi, breaks, opts, &evals);
  } else {
    Eigen::VectorXd w(2);
    const auto [lo2, hi2] = range(1);
    auto inner = [&](double w1) {
      auto f = [&](double w2) {
        w[0] = w1;
        w[1] = w2;
        return std::exp(log_max_density(atom, shifts, w));
      };
      return detail::integrate_piecewise(f, lo2, hi2,
                                         inner_breaks(s.noise, shifts, w1),
                                         opts, &evals);
    };
    const auto [lo1, hi1] = range(0);
    integral = detail::integrate_piecewise(inner, lo1, hi1,
                                           outer_breaks(s.noise, shifts), opts,
                                           &evals);
  }
  return {std::log(integral), HMethod::kQuadrature, 0.0, evals};
}

HEstimate monte_carlo(const StepShiftSet& s, const Eigen::MatrixXd& shifts,
                      std::int64_t budget, std::uint64_t seed) {
  const NoiseAtom atom{s.noise, s.d()};
  const Eigen::Index m = shifts.cols();
  const std::int64_t per_batch = std::max<std::int64_t>(1, budget / kBatches);
  std::vector<double> means(kBatches, 0.0);
  std::vector<double> logs(static_cast<std::size_t>(m));
  for (int b = 0; b < kBatches; ++b) {
    Engine engine(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
    std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
    double acc = 0.0;
    for (std::int64_t n = 0; n < per_batch; ++n) {
      const Eigen::VectorXd w = shifts.col(pick(engine)) + sample(atom, engine);
      for (Eigen::Index j = 0; j < m; ++j) {
        logs[j] = log_density(atom, w - shifts.col(j));
      }
      const double top = *std::max_element(logs.begin(), logs.end());
      const double mixture = log_sum_exp(logs) - std::log(static_cast<double>(m));
      acc += std::exp(top - mixture);
    }
    means[b] = acc / static_cast<double>(per_batch);
  }
  double mean = 0.0;
  for (double v : means) mean += v;
  mean /= kBatches;
  double var = 0.0;
  for (double v : means) var += (v - mean) * (v - mean);
  var /= (kBatches - 1);
  return {std::log(mean), HMethod::kMonteCarlo, std::sqrt(var / kBatches),
          per_batch * kBatches};
}

}  // namespace

HEstimate exact_step_leakage(const StepShiftSet& s, HMethod method,
                             std::int64_t budget, std::uint64_t seed) {
  if (s.m() < 1) throw Error(ErrorCode::kEmptyInput, "shift set is empty");
  if (s.d() < 1) throw Error(ErrorCode::kDomainError, "shift dimension must be >= 1");
  if (!s.shifts.allFinite()) {
    throw Error(ErrorCode::kDomainError, "shifts must be finite");
  }
  if (!(s.noise.scale > 0)) {
    throw Error(ErrorCode::kDomainError, "noise scale must be > 0");
  }
  if (method == HMethod::kQuadrature && s.d() > kMaxQuadratureDim) {
    throw Error(ErrorCode::kUnsupportedDimension, "quadrature oracle supports d <= 2");
  }
  if (method == HMethod::kMonteCarlo && s.d() > kMaxMonteCarloDim) {
    throw Error(ErrorCode::kUnsupportedDimension, "Monte-Carlo oracle supports d <= 5");
  }
  if (method == HMethod::kClosedForm) {
    throw Error(ErrorCode::kDomainError, "exact leakage needs Quadrature or MonteCarlo");
  }
  const Eigen::MatrixXd shifts = unique_columns(s.shifts);
  // A single distinct shift integrates one density: exactly zero leakage.
  if (shifts.cols() == 1) return {0.0, method, 0.0, 0};
  if (method == HMethod::kQuadrature) return quadrature(s, shifts, budget);
  if (budget == 0) budget = kDefaultMonteCarloBudget;
  if (budget < 2 * kBatches) {
    throw Error(ErrorCode::kDomainError, "Monte-Carlo budget must cover 32 batches");
  }
  return monte_carlo(s, shifts, budget, seed);
}

BoundGap bound_gap_report(const StepShiftSet& s,
                          const UpdateConstraint& constraint, double eta,
                          std::int64_t mc_budget, std::uint64_t seed) {
  const double radius = eta * constraint.L;
  for (Eigen::Index j = 0; j < s.shifts.cols(); ++j) {
    const double norm = lp_norm(s.shifts.col(j), constraint.p);
    if (norm > radius + 1e-9) {
      throw Error(ErrorCode::kShiftOutsideBall,
                  "shift " + std::to_string(j) + " has norm " +
                      std::to_string(norm) + " > eta L = " +
                      std::to_string(radius));
    }
  }
  const HEstimate exact =
      s.d() <= kMaxQuadratureDim
          ? exact_step_leakage(s, HMethod::kQuadrature, 0, seed)
          : exact_step_leakage(s, HMethod::kMonteCarlo, mc_budget, seed);
  const StepLeakageTerm bound = step_bound(s.d(), constraint, eta, s.noise);
  BoundGap out;
  out.exact_nats = exact.log_h;
  out.exact_rel_std_err = exact.relative_std_err();
  out.bound_nats = bound.nats;
  out.bound_case = bound.bound_case;
  out.gap = bound.nats - exact.log_h;
  out.dominates = out.gap >= -std::max(1e-9, 3.0 * out.exact_rel_std_err);
  return out;
}

}  // namespace mleak
