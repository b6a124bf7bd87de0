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

#include "mleak/core_model.hpp"

#include <cmath>
#include <sstream>

namespace mleak {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomainError:
      return "DomainError";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kWrongCase:
      return "WrongCase";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kUnsupportedDimension:
      return "UnsupportedDimension";
    case ErrorCode::kUnsupportedPair:
      return "UnsupportedPair";
    case ErrorCode::kNoClosedForm:
      return "NoClosedForm";
    case ErrorCode::kShiftOutsideBall:
      return "ShiftOutsideBall";
    case ErrorCode::kConfigParseError:
      return "ConfigParseError";
    case ErrorCode::kInvalidSpec:
      return "InvalidSpec";
  }
  return "Unknown";
}

std::string_view NormOrderName(NormOrder p) {
  switch (p) {
    case NormOrder::kL1:
      return "1";
    case NormOrder::kL2:
      return "2";
    case NormOrder::kLinf:
      return "inf";
  }
  return "?";
}

std::string_view NoiseFamilyName(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kGaussianIso:
      return "gaussian";
    case NoiseFamily::kLaplaceIid:
      return "laplace";
    case NoiseFamily::kUniformIid:
      return "uniform";
  }
  return "?";
}

NormOrder ParseNormOrder(std::string_view text) {
  if (text == "1") return NormOrder::kL1;
  if (text == "2") return NormOrder::kL2;
  if (text == "inf" || text == "infinity" || text == "Inf") {
    return NormOrder::kLinf;
  }
  throw Error(ErrorCode::kDomainError,
              "norm order must be one of 1, 2, inf (got '" +
                  std::string(text) + "')");
}

NoiseFamily ParseNoiseFamily(std::string_view text) {
  if (text == "gaussian") return NoiseFamily::kGaussianIso;
  if (text == "laplace") return NoiseFamily::kLaplaceIid;
  if (text == "uniform") return NoiseFamily::kUniformIid;
  throw Error(ErrorCode::kDomainError,
              "noise family must be gaussian, laplace or uniform (got '" +
                  std::string(text) + "')");
}

std::string_view SpecErrorName(SpecError e) {
  switch (e) {
    case SpecError::kZeroDimension:
      return "ZeroDimension";
    case SpecError::kNegativeBound:
      return "NegativeBound";
    case SpecError::kNonFiniteBound:
      return "NonFiniteBound";
    case SpecError::kEmptySchedule:
      return "EmptySchedule";
    case SpecError::kNonPositiveEta:
      return "NonPositiveEta";
    case SpecError::kNonPositiveScale:
      return "NonPositiveScale";
  }
  return "Unknown";
}

ValidationResult validate_spec(const TrainingSpec& spec) {
  std::vector<SpecIssue> issues;
  if (spec.d < 1) issues.push_back({SpecError::kZeroDimension, "d"});
  if (!std::isfinite(spec.constraint.L)) {
    issues.push_back({SpecError::kNonFiniteBound, "constraint.L"});
  } else if (spec.constraint.L < 0) {
    issues.push_back({SpecError::kNegativeBound, "constraint.L"});
  }
  if (spec.schedule.steps.empty()) {
    issues.push_back({SpecError::kEmptySchedule, "schedule.steps"});
  }
  for (std::size_t t = 0; t < spec.schedule.steps.size(); ++t) {
    const Step& step = spec.schedule.steps[t];
    const std::string prefix = "schedule.steps[" + std::to_string(t) + "]";
    // NaN fails both comparisons, so test the positive condition.
    if (!(step.eta > 0) || !std::isfinite(step.eta)) {
      issues.push_back({SpecError::kNonPositiveEta, prefix + ".eta"});
    }
    if (!(step.noise.scale > 0) || !std::isfinite(step.noise.scale)) {
      issues.push_back({SpecError::kNonPositiveScale, prefix + ".noise.scale"});
    }
  }
  if (!issues.empty()) return {std::nullopt, std::move(issues)};
  return {spec, {}};
}

const TrainingSpec& require_valid(const TrainingSpec& spec) {
  ValidationResult result = validate_spec(spec);
  if (result.ok()) return spec;
  std::ostringstream msg;
  for (std::size_t i = 0; i < result.issues.size(); ++i) {
    if (i) msg << "; ";
    msg << SpecErrorName(result.issues[i].code) << " at "
        << result.issues[i].field;
  }
  throw Error(ErrorCode::kInvalidSpec, msg.str());
}

void require_valid(const GenQuery& query) {
  if (query.n < 1) throw Error(ErrorCode::kDomainError, "n must be >= 1");
  if (!(query.subgauss_var > 0)) {
    throw Error(ErrorCode::kDomainError, "subgauss_var must be > 0");
  }
  if (!(query.threshold > 0)) {
    throw Error(ErrorCode::kDomainError, "threshold must be > 0");
  }
  if (!(query.alpha > 1)) {
    throw Error(ErrorCode::kDomainError, "alpha must be > 1");
  }
}

}  // namespace mleak
