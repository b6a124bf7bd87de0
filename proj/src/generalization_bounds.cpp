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

#include "mleak/generalization_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mleak {
namespace {

void check_info(double nats) {
  if (!(nats >= 0) || !std::isfinite(nats)) {
    throw Error(ErrorCode::kDomainError, "information value must be finite and >= 0");
  }
}

TailBound make_tail(double exponent) {
  const double raw = 2.0 * std::exp(exponent);
  return {std::min(1.0, raw), raw, exponent};
}

double concentration_term(const GenQuery& q) {
  return static_cast<double>(q.n) * q.threshold * q.threshold /
         (2.0 * q.subgauss_var);
}

}  // namespace

double expected_gen_bound(double mi_nats, const GenQuery& q) {
  check_info(mi_nats);
  require_valid(q);
  return std::sqrt(2.0 * q.subgauss_var * mi_nats / static_cast<double>(q.n));
}

TailBound tail_bound_maxleak(double leak_nats, const GenQuery& q) {
  check_info(leak_nats);
  require_valid(q);
  return make_tail(-(concentration_term(q) - leak_nats));
}

TailBound tail_bound_alpha(double info_nats, double alpha, const GenQuery& q) {
  check_info(info_nats);
  if (!(alpha > 1)) throw Error(ErrorCode::kDomainError, "alpha must be > 1");
  require_valid(q);
  const double factor = std::isinf(alpha) ? 1.0 : (alpha - 1.0) / alpha;
  return make_tail(-factor * (concentration_term(q) - info_nats));
}

std::int64_t required_n(double leak_nats, double target_prob, double threshold,
                        double subgauss_var) {
  check_info(leak_nats);
  if (!(target_prob > 0 && target_prob < 1)) {
    throw Error(ErrorCode::kDomainError, "target probability must be in (0, 1)");
  }
  if (!(threshold > 0) || !(subgauss_var > 0)) {
    throw Error(ErrorCode::kDomainError, "threshold and subgauss_var must be > 0");
  }
  const double scale = 2.0 * subgauss_var / (threshold * threshold);
  const double exact = scale * (leak_nats + std::log(2.0 / target_prob));
  if (exact > 9.0e15) throw Error(ErrorCode::kDomainError, "required n overflows");
  std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(exact)));
  // The ceiling can land one off when `exact` sits on an integer; settle it
  // against the forward bound.
  const auto ok = [&](std::int64_t m) {
    return tail_bound_maxleak(leak_nats, GenQuery{m, subgauss_var, threshold})
               .probability <= target_prob;
  };
  while (!ok(n)) ++n;
  while (n > 1 && ok(n - 1)) --n;
  return n;
}

}  // namespace mleak
