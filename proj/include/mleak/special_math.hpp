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
#include <limits>
#include <span>

#include "mleak/core_model.hpp"

namespace mleak {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Natural log of a non-negative quantity; -inf encodes zero. Products become
/// sums and sums go through log-sum-exp, so (2 pi sigma^2)^{d/2} style
/// factors never overflow.
struct LogValue {
  double log_v = kNegInf;

  static LogValue FromLinear(double v);
  static LogValue Zero() { return {}; }
  static LogValue One() { return {0.0}; }

  double linear() const;
  bool is_zero() const { return log_v == kNegInf; }

  friend LogValue operator*(LogValue a, LogValue b);
  friend LogValue operator/(LogValue a, LogValue b);
  friend LogValue operator+(LogValue a, LogValue b);
  /// Requires a >= b; returns log(e^a - e^b).
  friend LogValue operator-(LogValue a, LogValue b);
  LogValue pow(double k) const;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln C(n, k) for 0 <= k <= n. Uses the Stirling-remainder form so that the
/// result keeps full relative precision even when ln Gamma(n+1) is ~1e7.
double log_binomial(std::int64_t n, std::int64_t k);

/// ln sum_i exp(v_i); the max element is factored out. -inf entries are
/// allowed (they contribute zero); an all -inf input returns -inf.
double log_sum_exp(std::span<const double> values);

/// ln V_p(d, r), the Lebesgue volume of the d-dimensional Lp ball of radius r.
LogValue log_ball_volume(NormOrder p, int d, double r);

/// Same for any real p >= 1 (or +inf):
///   V_p(d, r) = (2 Gamma(1 + 1/p))^d / Gamma(1 + d/p) r^d.
LogValue log_ball_volume_general(double p, int d, double r);

/// log(1 - e^x) for x <= 0, accurate near both ends.
double log1m_exp(double x);

}  // namespace mleak
