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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mleak/errors.hpp"

namespace mleak {

/// Norm order of the update-boundedness constraint. Bounds are only proved
/// for these three orders; general p lives in `log_ball_volume_general`.
enum class NormOrder { kL1, kL2, kLinf };

enum class NoiseFamily { kGaussianIso, kLaplaceIid, kUniformIid };

std::string_view NormOrderName(NormOrder p);
std::string_view NoiseFamilyName(NoiseFamily family);
NormOrder ParseNormOrder(std::string_view text);
NoiseFamily ParseNoiseFamily(std::string_view text);

/// Per-step additive noise. `scale` is the family's native parameter:
///   - Gaussian: per-coordinate standard deviation sigma,
///   - Laplace: rate lambda of the density (lambda/2) exp(-lambda |x|),
///   - Uniform: half-width a of U(-a, a).
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kGaussianIso;
  double scale = 1.0;

  static NoiseSpec Gaussian(double sigma) {
    return {NoiseFamily::kGaussianIso, sigma};
  }
  static NoiseSpec Laplace(double lambda) {
    return {NoiseFamily::kLaplaceIid, lambda};
  }
  static NoiseSpec Uniform(double half_width) {
    return {NoiseFamily::kUniformIid, half_width};
  }

  bool operator==(const NoiseSpec&) const = default;
};

/// Assumption on the update direction: sup ||F(w, z)||_p <= L.
struct UpdateConstraint {
  NormOrder p = NormOrder::kL2;
  double L = 1.0;

  bool operator==(const UpdateConstraint&) const = default;
};

struct Step {
  double eta = 0.0;
  NoiseSpec noise;

  bool operator==(const Step&) const = default;
};

struct StepSchedule {
  std::vector<Step> steps;

  static StepSchedule Constant(int T, double eta, NoiseSpec noise) {
    return StepSchedule{std::vector<Step>(T < 0 ? 0 : T, Step{eta, noise})};
  }
  int T() const { return static_cast<int>(steps.size()); }

  bool operator==(const StepSchedule&) const = default;
};

struct TrainingSpec {
  int d = 1;
  UpdateConstraint constraint;
  StepSchedule schedule;

  bool operator==(const TrainingSpec&) const = default;
};

/// Parameters of a generalization query. `threshold` is the tail threshold of
/// the high-probability bound; alpha = +inf selects the maximal-leakage form.
struct GenQuery {
  std::int64_t n = 1;
  double subgauss_var = 0.25;
  double threshold = 0.1;
  double alpha = std::numeric_limits<double>::infinity();
};

enum class SpecError {
  kZeroDimension,
  kNegativeBound,
  kNonFiniteBound,
  kEmptySchedule,
  kNonPositiveEta,
  kNonPositiveScale,
};

std::string_view SpecErrorName(SpecError e);

struct SpecIssue {
  SpecError code;
  std::string field;  // e.g. "schedule.steps[3].eta"
};

struct ValidationResult {
  std::optional<TrainingSpec> spec;
  std::vector<SpecIssue> issues;

  bool ok() const { return issues.empty(); }
};

/// Checks every TrainingSpec invariant; on success the spec is returned
/// unchanged, otherwise one issue per violated field.
ValidationResult validate_spec(const TrainingSpec& spec);

/// Throwing convenience wrapper around validate_spec.
const TrainingSpec& require_valid(const TrainingSpec& spec);

/// GenQuery invariants: n >= 1, subgauss_var > 0, threshold > 0, alpha > 1.
void require_valid(const GenQuery& query);

}  // namespace mleak
