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

#include <Eigen/Dense>

#include "mleak/core_model.hpp"
#include "mleak/noise_models.hpp"
#include "mleak/special_math.hpp"

// The tail functional
//
//   h(d, p, f, r) = \int_{w \notin B_p(0, r)} sup_{x \in B_p(0, r)} f(w - x) dw,
//
// which together with f(0) V_p(d, r) makes up the per-step leakage bound.
// Closed forms exist for (p=2, Gaussian), (p=inf, any product law),
// (p=1, Laplace), plus an upper bound for (p=1, Gaussian). `h_numeric`
// evaluates the definition directly and is the oracle for all of them.

namespace mleak {

struct HQuery {
  int d = 1;
  NormOrder p = NormOrder::kL2;
  NoiseSpec noise;
  double r = 0.0;  // ball radius, eta * L in every bound
};

enum class HMethod { kClosedForm, kQuadrature, kMonteCarlo };

std::string_view HMethodName(HMethod method);

struct HEstimate {
  double log_h = 0.0;
  HMethod method = HMethod::kClosedForm;
  double std_err = 0.0;     // standard error of h itself (linear scale)
  std::int64_t budget = 0;  // integrand evaluations or samples used

  double h() const;
  /// std_err / h, the standard error of log h to first order.
  double relative_std_err() const;
};

LogValue h_closed_l2_gaussian(const HQuery& q);

/// ln[(1 + 2 r f0(0))^d - (2 r f0(0))^d] for any product law.
LogValue h_closed_linf_product(const HQuery& q);

/// ln sum_{i<d} (lambda r)^i / i!.
LogValue h_closed_l1_laplace(const HQuery& q);

/// Upper bound on h for (p=1, Gaussian), obtained from the hyperplane lower
/// bound on the distance to B_1. Not an equality for d >= 2. At r = 0 this
/// returns the exact value h = 1 instead of the (looser) formula limit.
LogValue h_closed_l1_gaussian_upper(const HQuery& q);

/// ln sup_{x in B_p(0,r)} f(w - x), computed exactly through ball_geometry.
/// Throws UnsupportedPair for (Laplace, p=2).
double log_sup_density_over_ball(const NoiseAtom& atom, NormOrder p, double r,
                                 const Eigen::Ref<const Eigen::VectorXd>& w);

/// Direct numerical evaluation of h. Quadrature needs d <= 2 and uses
/// adaptive Gauss-Kronrod on the positive orthant with breakpoints at the
/// integrand's kinks; `budget` caps the subintervals of each one-dimensional pass (0 = 1000).
/// MonteCarlo needs d <= 8 and importance-samples from the same family
/// dilated by (1 + r / std), with the standard error from 32 batch means.
HEstimate h_numeric(const HQuery& q, HMethod method, std::int64_t budget,
                    std::uint64_t seed);

}  // namespace mleak
