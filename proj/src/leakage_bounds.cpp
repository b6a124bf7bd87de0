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

#include "mleak/leakage_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mleak/special_math.hpp"

namespace mleak {
namespace {

constexpr int kMaxNumericDim = 8;

// ln[f(0) V_p(d, r) + h]
double assemble(int d, NormOrder p, const NoiseSpec& noise, double r,
                LogValue h) {
  const LogValue f0{d * std::log(density_at_zero_1d(noise))};
  return (f0 * log_ball_volume(p, d, r) + h).log_v;
}

bool selected(CaseSelector selector, CaseSelector which) {
  return selector == CaseSelector::kBest || selector == which;
}

std::vector<CandidateBound> closed_form_candidates(int d, NormOrder p,
                                                   const NoiseSpec& noise,
                                                   double r,
                                                   CaseSelector selector) {
  std::vector<CandidateBound> out;
  const bool gaussian = noise.family == NoiseFamily::kGaussianIso;
  if (gaussian && p != NormOrder::kLinf &&
      selected(selector, CaseSelector::kGaussianL2)) {
    // Valid for p = 1 too: B_1 is inside B_2, so the p = 2 bound dominates.
    const HQuery q{d, NormOrder::kL2, noise, r};
    out.push_back({BoundCase::kGaussianL2,
                   assemble(d, NormOrder::kL2, noise, r, h_closed_l2_gaussian(q)),
                   p == NormOrder::kL2});
  }
  if (gaussian && p == NormOrder::kL1 &&
      selected(selector, CaseSelector::kGaussianL1)) {
    const HQuery q{d, NormOrder::kL1, noise, r};
    out.push_back({BoundCase::kGaussianL1,
                   assemble(d, NormOrder::kL1, noise, r,
                            h_closed_l1_gaussian_upper(q)),
                   false});
  }
  if (p == NormOrder::kLinf && selected(selector, CaseSelector::kProductLinf)) {
    // f(0) V_inf + h collapses to (1 + 2 r f0(0))^d.
    const double t = 2.0 * r * density_at_zero_1d(noise);
    out.push_back({BoundCase::kProductLinf, d * std::log1p(t), true});
  }
  if (noise.family == NoiseFamily::kLaplaceIid && p == NormOrder::kL1 &&
      selected(selector, CaseSelector::kLaplaceL1)) {
    // f(0) V_1(d, r) = (lambda r)^d / d!, the next term of the series, so the
    // whole inside is h at d + 1. Summing it as one series keeps the value
    // non-decreasing in d after rounding.
    const HQuery next{d + 1, NormOrder::kL1, noise, r};
    out.push_back({BoundCase::kLaplaceL1, h_closed_l1_laplace(next).log_v, true});
  }
  return out;
}

}  // namespace

std::string_view BoundCaseName(BoundCase c) {
  switch (c) {
    case BoundCase::kGaussianL2:
      return "gaussian_l2";
    case BoundCase::kProductLinf:
      return "product_linf";
    case BoundCase::kLaplaceL1:
      return "laplace_l1";
    case BoundCase::kGaussianL1:
      return "gaussian_l1";
    case BoundCase::kNumeric:
      return "numeric";
  }
  return "?";
}

StepLeakageTerm step_bound(int d, const UpdateConstraint& constraint,
                           double eta, const NoiseSpec& noise,
                           const BoundOptions& options) {
  if (d < 1) throw Error(ErrorCode::kDomainError, "d must be >= 1");
  if (!(eta > 0)) throw Error(ErrorCode::kDomainError, "eta must be > 0");
  if (!(constraint.L >= 0) || !std::isfinite(constraint.L)) {
    throw Error(ErrorCode::kDomainError, "L must be finite and >= 0");
  }
  if (!(noise.scale > 0)) {
    throw Error(ErrorCode::kDomainError, "noise scale must be > 0");
  }
  const double r = eta * constraint.L;
  StepLeakageTerm term;
  term.candidates =
      closed_form_candidates(d, constraint.p, noise, r, options.selector);

  if (term.candidates.empty() && options.selector != CaseSelector::kBest) {
    throw Error(ErrorCode::kWrongCase,
                "the selected closed form does not apply to (p=" +
                    std::string(NormOrderName(constraint.p)) + ", " +
                    std::string(NoiseFamilyName(noise.family)) + ")");
  }

  if (r == 0) {
    // Zero-radius ball: h = 1 and V = 0 for every case.
    for (CandidateBound& c : term.candidates) c.nats = 0.0;
    term.bound_case = term.candidates.empty() ? BoundCase::kNumeric
                                              : term.candidates.front().bound_case;
    term.is_exact_h = true;
    return term;
  }

  const bool exact_available =
      std::any_of(term.candidates.begin(), term.candidates.end(),
                  [](const CandidateBound& c) { return c.is_exact_h; });
  const bool try_numeric = options.numeric_fallback && !exact_available &&
                           options.selector == CaseSelector::kBest &&
                           d <= kMaxNumericDim;
  if (term.candidates.empty() && !try_numeric) {
    throw Error(ErrorCode::kNoClosedForm,
                "no closed form for (p=" +
                    std::string(NormOrderName(constraint.p)) + ", " +
                    std::string(NoiseFamilyName(noise.family)) + ")" +
                    (d > kMaxNumericDim
                         ? std::string("; numeric fallback needs d <= 8")
                         : std::string("; rerun with --fallback numeric")));
  }
  double numeric_std_err = 0.0;
  if (try_numeric) {
    // Also covers closed forms that only upper-bound h.
    const HQuery q{d, constraint.p, noise, r};
    const HMethod method = d <= 2 ? HMethod::kQuadrature : HMethod::kMonteCarlo;
    const HEstimate est = h_numeric(
        q, method, method == HMethod::kQuadrature ? 0 : options.numeric_budget,
        options.seed);
    term.candidates.push_back(
        {BoundCase::kNumeric,
         assemble(d, constraint.p, noise, r, LogValue{est.log_h}), false});
    numeric_std_err = est.std_err;
  }
  const auto best = std::min_element(
      term.candidates.begin(), term.candidates.end(),
      [](const CandidateBound& a, const CandidateBound& b) {
        return a.nats < b.nats;
      });
  term.log_inside = best->nats;
  term.nats = best->nats;
  term.bound_case = best->bound_case;
  term.is_exact_h = best->is_exact_h;
  if (best->bound_case == BoundCase::kNumeric) term.h_std_err = numeric_std_err;
  return term;
}

BoundReport total_bound(const TrainingSpec& spec, const BoundOptions& options) {
  require_valid(spec);
  BoundReport report;
  report.spec_echo = spec;
  for (int t = 0; t < spec.schedule.T(); ++t) {
    const Step& step = spec.schedule.steps[t];
    BoundOptions step_options = options;
    step_options.seed = derive_seed(options.seed, {static_cast<std::uint64_t>(t)});
    StepLeakageTerm term =
        step_bound(spec.d, spec.constraint, step.eta, step.noise, step_options);
    term.step_index = t + 1;
    report.total_leakage_nats += term.nats;
    report.per_step.push_back(std::move(term));
  }
  const auto all_family = [&](NoiseFamily family) {
    return std::all_of(spec.schedule.steps.begin(), spec.schedule.steps.end(),
                       [&](const Step& s) { return s.noise.family == family; });
  };
  if (spec.constraint.p != NormOrder::kLinf &&
      all_family(NoiseFamily::kGaussianIso)) {
    report.mi_baseline_nats = mi_bound_pensia(spec);
  }
  if (spec.constraint.p == NormOrder::kL1 &&
      all_family(NoiseFamily::kLaplaceIid)) {
    report.laplace_limit_nats = laplace_limit(spec);
  }
  return report;
}

double mi_bound_pensia(const TrainingSpec& spec) {
  require_valid(spec);
  if (spec.constraint.p == NormOrder::kLinf) {
    throw Error(ErrorCode::kWrongCase, "MI baseline needs p <= 2");
  }
  const double d = spec.d;
  double total = 0.0;
  for (const Step& step : spec.schedule.steps) {
    if (step.noise.family != NoiseFamily::kGaussianIso) {
      throw Error(ErrorCode::kWrongCase, "MI baseline needs Gaussian noise");
    }
    const double r = step.eta * spec.constraint.L;
    const double sigma = step.noise.scale;
    total += 0.5 * d * std::log1p(r * r / (d * sigma * sigma));
  }
  return total;
}

double laplace_limit(const TrainingSpec& spec) {
  require_valid(spec);
  if (spec.constraint.p != NormOrder::kL1) {
    throw Error(ErrorCode::kWrongCase, "Laplace limit needs p = 1");
  }
  double total = 0.0;
  for (const Step& step : spec.schedule.steps) {
    if (step.noise.family != NoiseFamily::kLaplaceIid) {
      throw Error(ErrorCode::kWrongCase, "Laplace limit needs Laplace noise");
    }
    total += step.noise.scale * step.eta * spec.constraint.L;
  }
  return total;
}

}  // namespace mleak
