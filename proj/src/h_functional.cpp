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

#include "mleak/h_functional.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mleak/ball_geometry.hpp"
#include "quadrature.hpp"

namespace mleak {
namespace {

constexpr int kMonteCarloBatches = 32;
constexpr int kMaxQuadratureDim = 2;
constexpr int kMaxMonteCarloDim = 8;

void check_query(const HQuery& q) {
  if (q.d < 1) throw Error(ErrorCode::kDomainError, "h needs d >= 1");
  if (!(q.r >= 0) || !std::isfinite(q.r)) {
    throw Error(ErrorCode::kDomainError, "h needs a finite radius r >= 0");
  }
  if (!(q.noise.scale > 0)) {
    throw Error(ErrorCode::kDomainError, "noise scale must be positive");
  }
}

void require_case(const HQuery& q, NormOrder p, NoiseFamily family,
                  const char* what) {
  if (q.p != p || q.noise.family != family) {
    throw Error(ErrorCode::kWrongCase,
                std::string(what) + " does not apply to (p=" +
                    std::string(NormOrderName(q.p)) + ", " +
                    std::string(NoiseFamilyName(q.noise.family)) + ")");
  }
}

// sum_{i=0}^{d-1} C(d-1, i) a^{d-1-i} b^i Gamma((i+1)/2), in logs. The
// binomial expansion of \int_0^inf (rho + a)^{d-1} e^{-rho^2} rho-type
// integrals shows up in both Gaussian closed forms.
double log_gaussian_radial_sum(int d, double log_a, double log_b) {
  std::vector<double> terms(d);
  for (int i = 0; i < d; ++i) {
    const int j = d - 1 - i;
    double t = log_binomial(d - 1, i) + log_gamma(0.5 * (i + 1));
    if (j > 0) t += j * log_a;
    if (i > 0) t += i * log_b;
    terms[i] = t;
  }
  return log_sum_exp(terms);
}

// Upper end of the support along the last coordinate for uniform noise, given
// the positive-orthant coordinate `w1` (d = 2 only). Returns +inf for
// families with unbounded support.
double uniform_support_end(const HQuery& q, double w1) {
  if (q.noise.family != NoiseFamily::kUniformIid) return detail::kInf;
  const double a = q.noise.scale;
  const double excess = std::max(w1 - a, 0.0);
  switch (q.p) {
    case NormOrder::kL1:
      return excess > q.r ? a : a + q.r - excess;
    case NormOrder::kL2:
      return excess > q.r ? a : a + std::sqrt(q.r * q.r - excess * excess);
    case NormOrder::kLinf:
      return a + q.r;
  }
  return detail::kInf;
}

double ball_lower_edge(const HQuery& q, double w1) {
  if (w1 >= q.r) return 0.0;
  switch (q.p) {
    case NormOrder::kL1:
      return q.r - w1;
    case NormOrder::kL2:
      return std::sqrt(q.r * q.r - w1 * w1);
    case NormOrder::kLinf:
      return q.r;
  }
  return 0.0;
}

HEstimate h_quadrature(const HQuery& q, std::int64_t budget) {
  const NoiseAtom atom{q.noise, q.d};
  detail::QuadratureOptions opts;
  if (budget > 0) {
    opts.max_intervals = static_cast<int>(std::min<std::int64_t>(budget, 1'000'000));
  }
  std::int64_t evals = 0;
  const bool uniform = q.noise.family == NoiseFamily::kUniformIid;
  const double a = q.noise.scale;

  double h = 0.0;
  if (q.d == 1) {
    Eigen::VectorXd w(1);
    auto f = [&](double x) {
      w[0] = x;
      return std::exp(log_sup_density_over_ball(atom, q.p, q.r, w));
    };
    std::vector<double> breaks;
    if (uniform) breaks.push_back(a + q.r);
    const double hi = uniform ? a + q.r : detail::kInf;
    h = 2.0 * detail::integrate_piecewise(f, q.r, hi, breaks, opts, &evals);
  } else {
    Eigen::VectorXd w(2);
    auto inner = [&](double w1) {
      const double lo = ball_lower_edge(q, w1);
      const double hi = uniform_support_end(q, w1);
      if (!(hi > lo)) return 0.0;
      auto f = [&](double w2) {
        w[0] = w1;
        w[1] = w2;
        return std::exp(log_sup_density_over_ball(atom, q.p, q.r, w));
      };
      std::vector<double> breaks = {q.r, w1 - q.r, w1 + q.r};
      if (uniform) breaks.push_back(a);
      return detail::integrate_piecewise(f, lo, hi, breaks, opts, &evals);
    };
    std::vector<double> outer_breaks = {q.r};
    if (uniform) {
      outer_breaks.push_back(a);
      outer_breaks.push_back(a + q.r);
    }
    const double outer_hi = uniform ? a + q.r : detail::kInf;
    double total = 0.0;
    if (q.p == NormOrder::kL2 && q.r > 0) {
      // w1 = r sin(theta) removes the square-root edge of the disk.
      auto mapped = [&](double theta) {
        return inner(q.r * std::sin(theta)) * q.r * std::cos(theta);
      };
      std::vector<double> theta_breaks;
      if (uniform && a < q.r) theta_breaks.push_back(std::asin(a / q.r));
      total += detail::integrate_piecewise(mapped, 0.0, std::numbers::pi / 2,
                                           theta_breaks, opts, &evals);
      if (uniform) {
        // The support edge a + sqrt(r^2 - (w1 - a)^2) ends in a square root
        // at w1 = a + r; w1 = a + r sin(theta) smooths it.
        const double split = std::max(a, q.r);
        total += detail::integrate_piecewise(inner, q.r, split, {}, opts, &evals);
        auto edge = [&](double theta) {
          return inner(a + q.r * std::sin(theta)) * q.r * std::cos(theta);
        };
        total += detail::integrate_piecewise(edge, std::asin((split - a) / q.r),
                                             std::numbers::pi / 2, {}, opts, &evals);
      } else {
        total += detail::integrate_piecewise(inner, q.r, outer_hi, outer_breaks,
                                             opts, &evals);
      }
    } else {
      total += detail::integrate_piecewise(inner, 0.0, outer_hi, outer_breaks,
                                           opts, &evals);
    }
    h = 4.0 * total;
  }
  return {std::log(h), HMethod::kQuadrature, 0.0, evals};
}

HEstimate h_monte_carlo(const HQuery& q, std::int64_t budget,
                        std::uint64_t seed) {
  const NoiseAtom atom{q.noise, q.d};
  const double std0 = std_per_coord(q.noise);
  const NoiseAtom proposal{dilate(q.noise, 1.0 + q.r / std0), q.d};
  const std::int64_t per_batch =
      std::max<std::int64_t>(1, budget / kMonteCarloBatches);
  std::vector<double> batch_means(kMonteCarloBatches, 0.0);
  for (int b = 0; b < kMonteCarloBatches; ++b) {
    Engine engine(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
    double acc = 0.0;
    for (std::int64_t s = 0; s < per_batch; ++s) {
      const Eigen::VectorXd w = sample(proposal, engine);
      if (lp_norm(w, q.p) <= q.r) continue;
      acc += std::exp(log_sup_density_over_ball(atom, q.p, q.r, w) -
                      log_density(proposal, w));
    }
    batch_means[b] = acc / static_cast<double>(per_batch);
  }
  double mean = 0.0;
  for (double m : batch_means) mean += m;
  mean /= kMonteCarloBatches;
  double var = 0.0;
  for (double m : batch_means) var += (m - mean) * (m - mean);
  var /= (kMonteCarloBatches - 1);
  return {std::log(mean), HMethod::kMonteCarlo,
          std::sqrt(var / kMonteCarloBatches), per_batch * kMonteCarloBatches};
}

}  // namespace

std::string_view HMethodName(HMethod method) {
  switch (method) {
    case HMethod::kClosedForm:
      return "closed_form";
    case HMethod::kQuadrature:
      return "quadrature";
    case HMethod::kMonteCarlo:
      return "monte_carlo";
  }
  return "?";
}

double HEstimate::h() const { return std::exp(log_h); }

double HEstimate::relative_std_err() const { return std_err / h(); }

LogValue h_closed_l2_gaussian(const HQuery& q) {
  check_query(q);
  require_case(q, NormOrder::kL2, NoiseFamily::kGaussianIso,
               "h_closed_l2_gaussian");
  if (q.r == 0) return LogValue::One();
  // (r / (sigma sqrt 2))^{d-1-i} Gamma((i+1)/2) C(d-1,i), over Gamma(d/2).
  const double log_a = std::log(q.r / (q.noise.scale * std::numbers::sqrt2));
  return {log_gaussian_radial_sum(q.d, log_a, 0.0) - log_gamma(0.5 * q.d)};
}

LogValue h_closed_linf_product(const HQuery& q) {
  check_query(q);
  if (q.p != NormOrder::kLinf) {
    throw Error(ErrorCode::kWrongCase, "h_closed_linf_product needs p = inf");
  }
  const double t = 2.0 * q.r * density_at_zero_1d(q.noise);
  if (t == 0) return LogValue::One();
  const double d = q.d;
  // (1+t)^d - t^d = (1+t)^d (1 - (t/(1+t))^d)
  return {d * std::log1p(t) + log1m_exp(d * (std::log(t) - std::log1p(t)))};
}

LogValue h_closed_l1_laplace(const HQuery& q) {
  check_query(q);
  require_case(q, NormOrder::kL1, NoiseFamily::kLaplaceIid,
               "h_closed_l1_laplace");
  const double x = q.noise.scale * q.r;
  if (x == 0) return LogValue::One();
  const double log_x = std::log(x);
  std::vector<double> terms(q.d);
  for (int i = 0; i < q.d; ++i) terms[i] = i * log_x - log_gamma(i + 1.0);
  return {log_sum_exp(terms)};
}

LogValue h_closed_l1_gaussian_upper(const HQuery& q) {
  check_query(q);
  require_case(q, NormOrder::kL1, NoiseFamily::kGaussianIso,
               "h_closed_l1_gaussian_upper");
  if (q.r == 0) return LogValue::One();
  const double d = q.d;
  const double sigma = q.noise.scale;
  const double s = sigma * std::sqrt(2.0 * d);  // sigma sqrt(2d)
  // 2^d (2 pi sigma^2)^{-d/2} / (d-1)! * R^{d-1} s sum_i C(d-1,i) (s/R)^i
  // Gamma((i+1)/2) / 2
  const double log_prefactor = (d - 1.0) * std::numbers::ln2 -
                               0.5 * d * std::log(2.0 * std::numbers::pi * sigma * sigma) -
                               log_gamma(d) + std::log(s);
  return {log_prefactor +
          log_gaussian_radial_sum(q.d, std::log(q.r), std::log(s))};
}

double log_sup_density_over_ball(const NoiseAtom& atom, NormOrder p, double r,
                                 const Eigen::Ref<const Eigen::VectorXd>& w) {
  const double d = atom.d;
  const double s = atom.spec.scale;
  switch (atom.spec.family) {
    case NoiseFamily::kGaussianIso: {
      const double dist = dist_l2_to_ball(w, p, r);
      return -0.5 * d * std::log(2.0 * std::numbers::pi * s * s) -
             dist * dist / (2.0 * s * s);
    }
    case NoiseFamily::kLaplaceIid: {
      double dist1 = 0.0;
      if (p == NormOrder::kL1) {
        dist1 = dist_l1_to_l1ball(w, r);
      } else if (p == NormOrder::kLinf) {
        dist1 = dist_linf_to_linfball(w, r).lpNorm<1>();
      } else {
        throw Error(ErrorCode::kUnsupportedPair,
                    "no exact inner supremum for (laplace, p=2)");
      }
      return d * std::log(s / 2.0) - s * dist1;
    }
    case NoiseFamily::kUniformIid: {
      // The cube w + [-a, a]^d meets B_p(0, r) iff its nearest point to the
      // origin, the clamp of w, lies in the ball.
      const Eigen::VectorXd gap = dist_linf_to_linfball(w, s);
      return lp_norm(gap, p) <= r ? -d * std::log(2.0 * s) : kNegInf;
    }
  }
  return kNegInf;
}

HEstimate h_numeric(const HQuery& q, HMethod method, std::int64_t budget,
                    std::uint64_t seed) {
  check_query(q);
  if (q.noise.family == NoiseFamily::kLaplaceIid && q.p == NormOrder::kL2) {
    throw Error(ErrorCode::kUnsupportedPair,
                "no exact inner supremum for (laplace, p=2)");
  }
  switch (method) {
    case HMethod::kQuadrature:
      if (q.d > kMaxQuadratureDim) {
        throw Error(ErrorCode::kUnsupportedDimension,
                    "quadrature oracle supports d <= 2");
      }
      return h_quadrature(q, budget);
    case HMethod::kMonteCarlo:
      if (q.d > kMaxMonteCarloDim) {
        throw Error(ErrorCode::kUnsupportedDimension,
                    "Monte-Carlo oracle supports d <= 8");
      }
      if (budget < kMonteCarloBatches * 2) {
        throw Error(ErrorCode::kDomainError,
                    "Monte-Carlo budget must cover 32 batches");
      }
      return h_monte_carlo(q, budget, seed);
    case HMethod::kClosedForm:
      break;
  }
  throw Error(ErrorCode::kDomainError, "h_numeric needs Quadrature or MonteCarlo");
}

}  // namespace mleak
