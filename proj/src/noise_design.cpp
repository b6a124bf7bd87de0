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

#include "mleak/noise_design.hpp"

#include <algorithm>
#include <cmath>

#include "mleak/noise_models.hpp"

namespace mleak {
namespace {

void check_budget(double variance_budget) {
  if (!(variance_budget > 0) || !std::isfinite(variance_budget)) {
    throw Error(ErrorCode::kDomainError, "variance budget must be > 0");
  }
}

}  // namespace

NoiseSpec optimal_noise(double variance_budget) {
  check_budget(variance_budget);
  return NoiseSpec::Uniform(std::sqrt(3.0 * variance_budget));
}

double f0_floor(double variance_budget) {
  check_budget(variance_budget);
  return 1.0 / (2.0 * std::sqrt(3.0 * variance_budget));
}

std::vector<RankedNoise> rank_families_for_linf(int d, double eta, double L,
                                                double variance_budget) {
  check_budget(variance_budget);
  if (d < 1) throw Error(ErrorCode::kDomainError, "d must be >= 1");
  std::vector<RankedNoise> out;
  for (NoiseFamily family : {NoiseFamily::kUniformIid, NoiseFamily::kGaussianIso,
                             NoiseFamily::kLaplaceIid}) {
    const NoiseSpec noise = noise_from_variance(family, variance_budget);
    const double t = 2.0 * eta * L * density_at_zero_1d(noise);
    out.push_back({noise, d * std::log1p(t)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedNoise& a, const RankedNoise& b) {
                     return a.step_nats < b.step_nats;
                   });
  return out;
}

std::vector<CandidateDensity> optimal_noise_witnesses(double variance_budget) {
  check_budget(variance_budget);
  const double v = variance_budget;
  std::vector<CandidateDensity> out;
  const double a = std::sqrt(3.0 * v);
  out.push_back({"uniform", 1.0 / (2.0 * a), v});
  out.push_back({"gaussian", density_at_zero_1d(noise_from_variance(NoiseFamily::kGaussianIso, v)), v});
  out.push_back({"laplace", density_at_zero_1d(noise_from_variance(NoiseFamily::kLaplaceIid, v)), v});
  // Triangular on [-c, c]: f(0) = 1/c, variance c^2/6.
  const double c = std::sqrt(6.0 * v);
  out.push_back({"triangular", 1.0 / c, c * c / 6.0});
  // (U(-b, b) + U(-2b, 2b)) / 2: variance (b^2 + 4 b^2) / 6.
  const double b = std::sqrt(6.0 * v / 5.0);
  out.push_back({"uniform_mixture",
                 0.5 * (1.0 / (2.0 * b) + 1.0 / (4.0 * b)),
                 (b * b + 4.0 * b * b) / 6.0});
  const double a_half = std::sqrt(3.0 * v / 2.0);
  out.push_back({"uniform_half_budget", 1.0 / (2.0 * a_half), a_half * a_half / 3.0});
  return out;
}

}  // namespace mleak
