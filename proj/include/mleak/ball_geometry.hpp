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

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "mleak/core_model.hpp"

// Distances from a point to centered Lp balls and Euclidean projections onto
// them. Everything here is header-only and templated on the Eigen expression
// type so that callers can pass blocks, maps or temporaries.

namespace mleak {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// max(||w||_2 - r, 0): the nearest point of B_2(0, r) is r w / ||w||.
template <typename Derived>
typename Derived::Scalar dist_l2_to_l2ball(const Eigen::MatrixBase<Derived>& w,
                                           typename Derived::Scalar r) {
  using std::max;
  return max(w.norm() - r, typename Derived::Scalar(0));
}

/// Per-coordinate distances max(|w_i| - r, 0). The nearest point of the cube
/// is the componentwise clamp, so any monotone norm of this vector is the
/// distance in that norm.
template <typename Derived>
VectorX<typename Derived::Scalar> dist_linf_to_linfball(
    const Eigen::MatrixBase<Derived>& w, typename Derived::Scalar r) {
  using Scalar = typename Derived::Scalar;
  return (w.derived().array().abs() - r).max(Scalar(0)).matrix();
}

/// L1 distance from w to B_1(0, r): max(||w||_1 - r, 0). On the positive
/// octant the minimizer can be taken coordinatewise below w, where the
/// objective is sum(w_i) - r; other octants follow by sign symmetry.
template <typename Derived>
typename Derived::Scalar dist_l1_to_l1ball(const Eigen::MatrixBase<Derived>& w,
                                           typename Derived::Scalar r) {
  using std::max;
  return max(w.template lpNorm<1>() - r, typename Derived::Scalar(0));
}

template <typename Scalar>
struct L1Projection {
  VectorX<Scalar> point;
  Scalar distance = 0;  // Euclidean
  Scalar threshold = 0;  // soft-threshold level; 0 when w is inside
};

/// Exact Euclidean projection onto B_1(0, r) by sort-based soft
/// thresholding, O(d log d).
template <typename Derived>
L1Projection<typename Derived::Scalar> project_l2_onto_l1ball(
    const Eigen::MatrixBase<Derived>& w, typename Derived::Scalar r) {
  using Scalar = typename Derived::Scalar;
  L1Projection<Scalar> out;
  out.point = w;
  const Eigen::Index d = w.size();
  if (w.template lpNorm<1>() <= r) return out;
  if (r <= 0) {
    out.point.setZero();
    out.distance = w.norm();
    return out;
  }
  std::vector<Scalar> u(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) u[i] = std::abs(w[i]);
  std::sort(u.begin(), u.end(), std::greater<Scalar>());
  // Largest k with u_k > (sum_{j<=k} u_j - r) / k; ties resolved by the
  // cumulative-sum rule (keep the last index that satisfies it).
  Scalar running = 0;
  Scalar theta = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    running += u[k];
    const Scalar candidate = (running - r) / Scalar(k + 1);
    if (u[k] > candidate) theta = candidate;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const Scalar mag = std::max(std::abs(w[i]) - theta, Scalar(0));
    out.point[i] = w[i] < 0 ? -mag : mag;
  }
  out.threshold = theta;
  out.distance = (w - out.point).norm();
  return out;
}

/// ||v||_p for the three supported orders.
template <typename Derived>
typename Derived::Scalar lp_norm(const Eigen::MatrixBase<Derived>& v,
                                 NormOrder p) {
  switch (p) {
    case NormOrder::kL1:
      return v.template lpNorm<1>();
    case NormOrder::kL2:
      return v.norm();
    case NormOrder::kLinf:
      return v.template lpNorm<Eigen::Infinity>();
  }
  return typename Derived::Scalar(0);
}

/// Euclidean distance from w to B_p(0, r), exact for all three orders.
template <typename Derived>
typename Derived::Scalar dist_l2_to_ball(const Eigen::MatrixBase<Derived>& w,
                                         NormOrder p,
                                         typename Derived::Scalar r) {
  switch (p) {
    case NormOrder::kL1:
      return project_l2_onto_l1ball(w, r).distance;
    case NormOrder::kL2:
      return dist_l2_to_l2ball(w, r);
    case NormOrder::kLinf:
      return dist_linf_to_linfball(w, r).norm();
  }
  return typename Derived::Scalar(0);
}

}  // namespace mleak
