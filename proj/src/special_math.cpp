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

#include "mleak/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mleak {
namespace {

// Stirling remainder: ln n! - (n ln n - n + 0.5 ln(2 pi n)).
double stirling_error(double n) {
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) -
           (n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n));
  }
  const double nn = n * n;
  // Asymptotic series; truncation error < 1e-17 for n > 15.
  return (1.0 / 12.0 -
          (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0) / nn) / nn) / nn) /
         n;
}

}  // namespace

LogValue LogValue::FromLinear(double v) {
  if (v < 0 || std::isnan(v)) {
    throw Error(ErrorCode::kDomainError, "LogValue of a negative quantity");
  }
  return {v == 0 ? kNegInf : std::log(v)};
}

double LogValue::linear() const { return std::exp(log_v); }

LogValue operator*(LogValue a, LogValue b) {
  if (a.is_zero() || b.is_zero()) return LogValue::Zero();
  return {a.log_v + b.log_v};
}

LogValue operator/(LogValue a, LogValue b) {
  if (b.is_zero()) throw Error(ErrorCode::kDomainError, "division by zero");
  if (a.is_zero()) return LogValue::Zero();
  return {a.log_v - b.log_v};
}

LogValue operator+(LogValue a, LogValue b) {
  const double v[2] = {a.log_v, b.log_v};
  return {log_sum_exp(v)};
}

LogValue operator-(LogValue a, LogValue b) {
  if (b.is_zero()) return a;
  if (b.log_v > a.log_v) {
    throw Error(ErrorCode::kDomainError, "LogValue subtraction below zero");
  }
  return {a.log_v + log1m_exp(b.log_v - a.log_v)};
}

LogValue LogValue::pow(double k) const {
  if (k == 0) return One();
  if (is_zero()) return Zero();
  return {k * log_v};
}

double log1m_exp(double x) {
  if (x > 0) throw Error(ErrorCode::kDomainError, "log1m_exp needs x <= 0");
  if (x == 0) return kNegInf;
  // Maechler's switch point -ln 2.
  return x > -std::numbers::ln2 ? std::log(-std::expm1(x))
                                : std::log1p(-std::exp(x));
}

double log_gamma(double x) {
  if (!(x > 0)) {
    throw Error(ErrorCode::kDomainError,
                "log_gamma needs x > 0 (got " + std::to_string(x) + ")");
  }
  return std::lgamma(x);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw Error(ErrorCode::kDomainError, "log_binomial needs 0 <= k <= n");
  }
  if (k == 0 || k == n) return 0.0;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double md = nd - kd;
  // n ln n - k ln k - m ln m = k ln(n/k) - m ln(1 - k/n), both terms >= 0.
  const double entropy_part = kd * std::log(nd / kd) - md * std::log1p(-kd / nd);
  return entropy_part +
         0.5 * std::log(nd / (2.0 * std::numbers::pi * kd * md)) +
         stirling_error(nd) - stirling_error(kd) - stirling_error(md);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyInput, "log_sum_exp of an empty list");
  }
  const double top = *std::max_element(values.begin(), values.end());
  if (top == kNegInf) return kNegInf;
  if (std::isinf(top) || std::isnan(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

LogValue log_ball_volume(NormOrder p, int d, double r) {
  switch (p) {
    case NormOrder::kL1:
      return log_ball_volume_general(1.0, d, r);
    case NormOrder::kL2:
      return log_ball_volume_general(2.0, d, r);
    case NormOrder::kLinf:
      return log_ball_volume_general(std::numeric_limits<double>::infinity(),
                                     d, r);
  }
  throw Error(ErrorCode::kDomainError, "unknown norm order");
}

LogValue log_ball_volume_general(double p, int d, double r) {
  if (d < 1) throw Error(ErrorCode::kDomainError, "ball dimension must be >= 1");
  if (!(r >= 0)) throw Error(ErrorCode::kDomainError, "ball radius must be >= 0");
  if (!(p >= 1)) throw Error(ErrorCode::kDomainError, "ball order must be >= 1");
  if (r == 0) return LogValue::Zero();
  const double dd = static_cast<double>(d);
  if (std::isinf(p)) return {dd * std::log(2.0 * r)};
  return {dd * (std::numbers::ln2 + log_gamma(1.0 + 1.0 / p)) -
          log_gamma(1.0 + dd / p) + dd * std::log(r)};
}

}  // namespace mleak
