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

#include <string>
#include <vector>

#include "mleak/core_model.hpp"

namespace mleak {

/// The variance-constrained law with the smallest density at zero:
/// U(-sqrt(3 v), sqrt(3 v)).
NoiseSpec optimal_noise(double variance_budget);

/// 1 / (2 sqrt(3 v)); no symmetric, unimodal density with variance <= v has
/// a smaller value at zero.
double f0_floor(double variance_budget);

struct RankedNoise {
  NoiseSpec noise;
  double step_nats;  // d ln(1 + 2 eta L f0(0))
};

/// Per-step p = inf bound of each family at equal per-coordinate variance,
/// sorted ascending. Only f0(0) matters, so uniform always comes first.
std::vector<RankedNoise> rank_families_for_linf(int d, double eta, double L,
                                                double variance_budget);

/// A symmetric, non-increasing-on-[0, inf) density summarized by the two
/// numbers the optimal-noise argument depends on.
struct CandidateDensity {
  std::string name;
  double f0;
  double variance;
};

/// Witnesses at the given budget: saturating uniform, Gaussian, Laplace,
/// triangular, an equal mixture of U(-a, a) and U(-2a, 2a), and a uniform
/// that does not use the whole budget.
std::vector<CandidateDensity> optimal_noise_witnesses(double variance_budget);

}  // namespace mleak
