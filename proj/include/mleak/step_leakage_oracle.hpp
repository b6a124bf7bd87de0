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

#include <Eigen/Dense>

#include "mleak/core_model.hpp"
#include "mleak/h_functional.hpp"
#include "mleak/leakage_bounds.hpp"

namespace mleak {

/// The finite set {eta F(w_{t-1}, z) : z in supp Z_t} of update shifts, one
/// per column of `shifts` (d x m).
struct StepShiftSet {
  Eigen::MatrixXd shifts;
  NoiseSpec noise;

  int d() const { return static_cast<int>(shifts.rows()); }
  int m() const { return static_cast<int>(shifts.cols()); }
};

/// ln \int max_i f(w - s_i) dw, the exact single-step conditional leakage in
/// nats. Quadrature needs d <= 2, MonteCarlo d <= 5 (sampling from the
/// equal-weight mixture of the shifted laws, so each weight lies in [1, m]).
/// budget = 0 picks the method default: 1000 subintervals per quadrature
/// pass, 400000 Monte-Carlo samples.
HEstimate exact_step_leakage(const StepShiftSet& s, HMethod method,
                             std::int64_t budget = 0,
                             std::uint64_t seed = 0);

struct BoundGap {
  double exact_nats = 0.0;
  double exact_rel_std_err = 0.0;
  double bound_nats = 0.0;
  double gap = 0.0;  // bound - exact
  BoundCase bound_case = BoundCase::kGaussianL2;
  /// gap >= -max(1e-9, 3 * exact_rel_std_err)
  bool dominates = true;
};

/// Pairs the exact leakage with the matching step_bound. Every shift must lie
/// in B_p(0, eta L) (1e-9 slack) or ShiftOutsideBall is raised. Quadrature is
/// used for d <= 2, Monte Carlo above.
BoundGap bound_gap_report(const StepShiftSet& s,
                          const UpdateConstraint& constraint, double eta,
                          std::int64_t mc_budget = 400'000,
                          std::uint64_t seed = 0);

}  // namespace mleak
