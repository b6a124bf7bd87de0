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

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "mleak/ball_geometry.hpp"
#include "mleak/cli_reports.hpp"
#include "mleak/h_functional.hpp"
#include "mleak/noise_design.hpp"
#include "mleak/noise_models.hpp"
#include "mleak/step_leakage_oracle.hpp"

namespace mleak {
namespace {

constexpr double kLogTol = 1e-6;
constexpr double kRecurrenceTol = 1e-12;
const double kRadii[] = {0.1, 0.5, 1.0, 2.0};

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string radius_tag(double r) { return "r=" + fmt(r); }

HEstimate oracle_h(const HQuery& q, const VerifySettings& s, std::uint64_t stream) {
  const bool quad = q.d <= 2;
  return h_numeric(q, quad ? HMethod::kQuadrature : HMethod::kMonteCarlo,
                   quad ? 0 : s.budget, derive_seed(s.seed, {stream}));
}

VerifyRow equivalence_row(const std::string& name, LogValue closed, const HEstimate& est) {
  const double rel = est.relative_std_err();
  return {name, closed.log_v, est.log_h, rel,
          std::abs(est.log_h - closed.log_v) <= std::max(kLogTol, 3.0 * rel)};
}

void h_closed_suite(const VerifySettings& s, std::vector<VerifyRow>& rows) {
  std::uint64_t stream = 0;
  for (int d = s.d_lo; d <= s.d_hi; ++d) {
    const std::string dtag = "/d=" + std::to_string(d) + "/";
    for (double r : kRadii) {
      const HQuery l2{d, NormOrder::kL2, NoiseSpec::Gaussian(1.0), r};
      rows.push_back(equivalence_row("h/l2_gaussian" + dtag + radius_tag(r),
                                     h_closed_l2_gaussian(l2), oracle_h(l2, s, ++stream)));
      for (NoiseSpec noise : {NoiseSpec::Gaussian(1.0), NoiseSpec::Laplace(1.0),
                              NoiseSpec::Uniform(1.0)}) {
        const HQuery q{d, NormOrder::kLinf, noise, r};
        rows.push_back(equivalence_row(
            "h/linf_" + std::string(NoiseFamilyName(noise.family)) + dtag + radius_tag(r),
            h_closed_linf_product(q), oracle_h(q, s, ++stream)));
      }
      const HQuery l1{d, NormOrder::kL1, NoiseSpec::Laplace(1.0), r};
      rows.push_back(equivalence_row("h/l1_laplace" + dtag + radius_tag(r),
                                     h_closed_l1_laplace(l1), oracle_h(l1, s, ++stream)));

      // Gaussian under p = 1 has only an upper bound for d >= 2; at d = 1
      // every ball is the same interval and the two bounds coincide.
      const HQuery g1{d, NormOrder::kL1, NoiseSpec::Gaussian(1.0), r};
      if (d == 1) {
        const LogValue upper = h_closed_l1_gaussian_upper(g1);
        const LogValue exact = h_closed_l2_gaussian(l2);
        rows.push_back({"h/l1_gaussian_equals_l2" + dtag + radius_tag(r), upper.log_v,
                        exact.log_v, 0.0, std::abs(upper.log_v - exact.log_v) <= 1e-12});
      } else {
        const LogValue upper = h_closed_l1_gaussian_upper(g1);
        const HEstimate est = oracle_h(g1, s, ++stream);
        const double rel = est.relative_std_err();
        rows.push_back({"h/l1_gaussian_upper" + dtag + radius_tag(r), upper.log_v,
                        est.log_h, rel,
                        est.log_h <= upper.log_v + std::max(kLogTol, 3.0 * rel)});
      }
    }
  }
}

Eigen::VectorXd random_in_ball(int d, NormOrder p, double R, Engine& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  // A third of the draws sit on the sphere, where the bounds are tightest.
  const bool boundary = unit(engine) < 1.0 / 3.0;
  const double radius = boundary ? R : R * std::pow(unit(engine), 1.0 / d);
  Eigen::VectorXd v(d);
  if (p == NormOrder::kLinf) {
    for (int i = 0; i < d; ++i) v[i] = R * (2.0 * unit(engine) - 1.0);
    if (boundary) {
      const int i = std::uniform_int_distribution<int>(0, d - 1)(engine);
      v[i] = unit(engine) < 0.5 ? -R : R;
    }
    return v;
  }
  for (int i = 0; i < d; ++i) {
    v[i] = p == NormOrder::kL2 ? normal(engine)
                               : std::exponential_distribution<double>(1.0)(engine) *
                                     (unit(engine) < 0.5 ? -1.0 : 1.0);
  }
  return v * (radius / lp_norm(v, p));
}

void dominance_suite(const VerifySettings& s, std::vector<VerifyRow>& rows) {
  struct Combo {
    NoiseSpec noise;
    NormOrder p;
  };
  const Combo combos[] = {
      {NoiseSpec::Gaussian(1.0), NormOrder::kL1},
      {NoiseSpec::Gaussian(1.0), NormOrder::kL2},
      {NoiseSpec::Gaussian(1.0), NormOrder::kLinf},
      {NoiseSpec::Laplace(1.0), NormOrder::kL1},
      {NoiseSpec::Laplace(1.0), NormOrder::kLinf},
      {NoiseSpec::Uniform(1.0), NormOrder::kLinf},
  };
  std::uint64_t stream = 1000;
  for (int d : s.dims) {
    for (const Combo& c : combos) {
      for (int m : {2, 5}) {
        Engine engine(derive_seed(s.seed, {++stream}));
        std::uniform_real_distribution<double> log_r(std::log(0.05), std::log(2.0));
        for (int k = 0; k < s.grid; ++k) {
          const double R = std::exp(log_r(engine));
          StepShiftSet set{Eigen::MatrixXd(d, m), c.noise};
          for (int j = 0; j < m; ++j) set.shifts.col(j) = random_in_ball(d, c.p, R, engine);
          const BoundGap gap = bound_gap_report(set, UpdateConstraint{c.p, R}, 1.0);
          rows.push_back({"dominance/" + std::string(NoiseFamilyName(c.noise.family)) +
                              "/p=" + std::string(NormOrderName(c.p)) +
                              "/d=" + std::to_string(d) + "/m=" + std::to_string(m) +
                              "/" + std::to_string(k),
                          gap.bound_nats, gap.exact_nats, gap.exact_rel_std_err,
                          gap.dominates});
        }
      }
    }
  }
  // Two antipodal shifts in d = 1: the exact value is ln(2 Phi(r / sigma)).
  for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 1.0}) {
    StepShiftSet set{Eigen::MatrixXd(1, 2), NoiseSpec::Gaussian(1.0)};
    set.shifts << -r, r;
    const BoundGap gap =
        bound_gap_report(set, UpdateConstraint{NormOrder::kL2, r}, 1.0);
    const double phi = 0.5 * std::erfc(-r / std::numbers::sqrt2);
    const double expected = std::log(2.0 * phi);
    const bool tight = r > 0.5 || gap.gap <= 0.05;
    rows.push_back({"two_point/gaussian/" + radius_tag(r), expected, gap.exact_nats, 0.0,
                    gap.dominates && tight && std::abs(gap.exact_nats - expected) <= 1e-6});
  }
}

void thm4_suite(std::vector<VerifyRow>& rows) {
  for (double v : {0.25, 1.0, 4.0}) {
    const double floor = f0_floor(v);
    const std::string vtag = "/v=" + fmt(v) + "/";
    for (const CandidateDensity& c : optimal_noise_witnesses(v)) {
      const bool saturating = c.name == "uniform";
      const bool at_floor = std::abs(c.f0 - floor) <= 1e-12 * floor;
      const bool ok = c.f0 >= floor * (1.0 - 1e-12) && c.variance <= v * (1.0 + 1e-12) &&
                      at_floor == saturating;
      rows.push_back({"thm4/f0_floor" + vtag + c.name, floor, c.f0, 0.0, ok});
    }
    for (double eta_l : {0.01, 0.1, 1.0}) {
      for (int d : {1, 10, 100}) {
        const auto ranked = rank_families_for_linf(d, 1.0, eta_l, v);
        const StepLeakageTerm term = step_bound(
            d, UpdateConstraint{NormOrder::kLinf, eta_l}, 1.0, optimal_noise(v));
        rows.push_back({"thm4/rank" + vtag + "etaL=" + fmt(eta_l) + "/d=" +
                            std::to_string(d),
                        ranked.front().step_nats, term.nats, 0.0,
                        ranked.front().noise.family == NoiseFamily::kUniformIid &&
                            std::abs(ranked.front().step_nats - term.nats) <=
                                1e-12 * std::max(1.0, term.nats)});
      }
    }
  }
}

void recurrence_suite(std::vector<VerifyRow>& rows) {
  const auto rel_ok = [](double a, double b) {
    return std::abs(a - b) <= kRecurrenceTol * std::max(std::abs(a), std::abs(b));
  };
  for (double r : {0.05, 0.5, 2.0}) {
    for (NoiseSpec noise : {NoiseSpec::Gaussian(1.0), NoiseSpec::Laplace(1.0),
                            NoiseSpec::Uniform(1.0)}) {
      const double t = 2.0 * r * density_at_zero_1d(noise);
      const std::string tag = "recurrence/linf_" +
                              std::string(NoiseFamilyName(noise.family)) + "/" +
                              radius_tag(r) + "/d=";
      const double h1 = h_closed_linf_product({1, NormOrder::kLinf, noise, r}).linear();
      rows.push_back({tag + "1", h1, 1.0, 0.0, rel_ok(h1, 1.0)});
      for (int d = 2; d <= 50; ++d) {
        const double prev = h_closed_linf_product({d - 1, NormOrder::kLinf, noise, r}).linear();
        const double cur = h_closed_linf_product({d, NormOrder::kLinf, noise, r}).linear();
        const double rec = (1.0 + t) * prev + std::pow(t, d - 1);
        rows.push_back({tag + std::to_string(d), cur, rec, 0.0, rel_ok(cur, rec)});
      }
    }
    const NoiseSpec lap = NoiseSpec::Laplace(1.0);
    const std::string tag = "recurrence/l1_laplace/" + radius_tag(r) + "/d=";
    const double h1 = h_closed_l1_laplace({1, NormOrder::kL1, lap, r}).linear();
    rows.push_back({tag + "1", h1, 1.0, 0.0, rel_ok(h1, 1.0)});
    double term = 1.0;  // (lambda r)^{d-1} / (d-1)!
    for (int d = 2; d <= 50; ++d) {
      term *= lap.scale * r / (d - 1);
      const double prev = h_closed_l1_laplace({d - 1, NormOrder::kL1, lap, r}).linear();
      const double cur = h_closed_l1_laplace({d, NormOrder::kL1, lap, r}).linear();
      const double rec = prev + term;
      rows.push_back({tag + std::to_string(d), cur, rec, 0.0, rel_ok(cur, rec)});
    }
  }
}

}  // namespace

VerifySuite ParseVerifySuite(std::string_view text) {
  if (text == "h-closed") return VerifySuite::kHClosed;
  if (text == "dominance") return VerifySuite::kDominance;
  if (text == "thm4") return VerifySuite::kThm4;
  if (text == "recurrences") return VerifySuite::kRecurrences;
  if (text == "all") return VerifySuite::kAll;
  throw Error(ErrorCode::kDomainError,
              "suite must be h-closed, dominance, thm4, recurrences or all");
}

std::vector<VerifyRow> run_verify(const VerifySettings& s) {
  if (s.d_lo < 1 || s.d_hi < s.d_lo || s.d_hi > 8) {
    throw Error(ErrorCode::kDomainError, "h-closed dimensions must satisfy 1 <= lo <= hi <= 8");
  }
  for (int d : s.dims) {
    if (d < 1 || d > 2) throw Error(ErrorCode::kDomainError, "dominance dims must be 1 or 2");
  }
  std::vector<VerifyRow> rows;
  const bool all = s.suite == VerifySuite::kAll;
  if (all || s.suite == VerifySuite::kHClosed) h_closed_suite(s, rows);
  if (all || s.suite == VerifySuite::kDominance) dominance_suite(s, rows);
  if (all || s.suite == VerifySuite::kThm4) thm4_suite(rows);
  if (all || s.suite == VerifySuite::kRecurrences) recurrence_suite(rows);
  return rows;
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::string out = "case,closed_form,oracle,std_err,verdict\n";
  for (const VerifyRow& r : rows) {
    out += r.case_name + "," + fmt(r.closed_form) + "," + fmt(r.oracle) + "," +
           fmt(r.std_err) + "," + (r.pass ? "PASS" : "FAIL") + "\n";
  }
  return out;
}

int cmd_verify(const VerifySettings& settings, const RunOptions& options,
               std::ostream& out) {
  const std::vector<VerifyRow> rows = run_verify(settings);
  const std::string csv = verify_csv(rows);
  std::filesystem::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "verify.csv", csv);
  out << csv;
  std::size_t failed = 0;
  for (const VerifyRow& r : rows) failed += r.pass ? 0 : 1;
  out << rows.size() - failed << "/" << rows.size() << " passed\n";
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace mleak
