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
#include <optional>
#include <string_view>
#include <vector>

#include "mleak/core_model.hpp"
#include "mleak/h_functional.hpp"

namespace mleak {

/// Which closed form produced a per-step term.
enum class BoundCase {
  kGaussianL2,    // isotropic Gaussian, valid for every p <= 2
  kProductLinf,   // any product law under p = inf
  kLaplaceL1,     // i.i.d. Laplace under p = 1
  kGaussianL1,    // Gaussian under p = 1 via the hyperplane distance bound
  kNumeric,       // general bound with a numerically estimated h
};

std::string_view BoundCaseName(BoundCase c);

/// kBest evaluates every applicable closed form and keeps the smallest;
/// the other values force a specific case (WrongCase if it does not apply).
enum class CaseSelector {
  kBest,
  kGaussianL2,
  kProductLinf,
  kLaplaceL1,
  kGaussianL1,
};

struct CandidateBound {
  BoundCase bound_case;
  double nats;
  bool is_exact_h;  // h is exact for the requested p, not only an upper bound
};

struct StepLeakageTerm {
  int step_index = 0;  // 1-based, t = 1..T
  double log_inside = 0.0;  // ln[f(0) V_p(d, eta L) + h]
  double nats = 0.0;        // equals log_inside
  BoundCase bound_case = BoundCase::kGaussianL2;
  bool is_exact_h = true;
  double h_std_err = 0.0;  // nonzero only for kNumeric via Monte Carlo
  /// Every applicable closed form that was evaluated; `bound_case` is the
  /// minimum among them.
  std::vector<CandidateBound> candidates;
};

struct BoundOptions {
  CaseSelector selector = CaseSelector::kBest;
  /// When no closed form covers (p, family), fall back to the general bound
  /// with h_numeric (d <= 8 only) instead of raising NoClosedForm.
  bool numeric_fallback = false;
  std::int64_t numeric_budget = 1'000'000;
  std::uint64_t seed = 0;
};

struct BoundReport {
  std::vector<StepLeakageTerm> per_step;
  double total_leakage_nats = 0.0;
  std::optional<double> mi_baseline_nats;
  std::optional<double> laplace_limit_nats;
  TrainingSpec spec_echo;
};

StepLeakageTerm step_bound(int d, const UpdateConstraint& constraint,
                           double eta, const NoiseSpec& noise,
                           const BoundOptions& options = {});

BoundReport total_bound(const TrainingSpec& spec,
                        const BoundOptions& options = {});

/// (d/2) sum_t ln(1 + eta_t^2 L^2 / (d sigma_t^2)); mutual-information
/// baseline for Gaussian noise with p <= 2.
double mi_bound_pensia(const TrainingSpec& spec);

/// sum_t lambda_t eta_t L, the d -> inf limit of the Laplace/L1 bound.
double laplace_limit(const TrainingSpec& spec);

}  // namespace mleak
