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

#include "mleak/core_model.hpp"

namespace mleak {

/// sqrt(2 sigma^2 I / n). A maximal-leakage value may be passed in place of
/// the mutual information, since it is never smaller.
double expected_gen_bound(double mi_nats, const GenQuery& q);

struct TailBound {
  double probability;  // clamped to [0, 1]
  double raw;          // 2 exp(exponent), may exceed 1
  double exponent;     // -(alpha-1)/alpha * (n t^2 / (2 sigma^2) - info)

  bool vacuous() const { return raw >= 1.0; }
};

/// Pr(|gen-err| >= t) <= 2 exp(-(n t^2 / (2 sigma^2) - leakage)).
TailBound tail_bound_maxleak(double leak_nats, const GenQuery& q);

/// Sibson order-alpha version; `info_nats` must upper-bound I_alpha.
TailBound tail_bound_alpha(double info_nats, double alpha, const GenQuery& q);

/// Smallest n with tail_bound_maxleak(leak, n) <= target_prob.
std::int64_t required_n(double leak_nats, double target_prob, double threshold,
                        double subgauss_var);

}  // namespace mleak
