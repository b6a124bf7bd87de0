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

#include "mleak/cli_reports.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mleak/noise_design.hpp"
#include "mleak/noise_models.hpp"

namespace mleak {
namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double bits(double nats) { return nats / std::numbers::ln2; }

json amount(double nats) { return json{{"nats", nats}, {"bits", bits(nats)}}; }

json tail_json(const TailBound& tail) {
  return json{{"probability", tail.probability},
              {"raw_exponent", tail.exponent},
              {"log_raw_bound", std::numbers::ln2 + tail.exponent},
              {"vacuous", tail.vacuous()}};
}

json alpha_json(double alpha) {
  return std::isinf(alpha) ? json("inf") : json(alpha);
}

TailBound tail_for(double leak_nats, const GenQuery& q) {
  return std::isinf(q.alpha) ? tail_bound_maxleak(leak_nats, q)
                             : tail_bound_alpha(leak_nats, q.alpha, q);
}

BoundOptions bound_options(const RunOptions& options) {
  BoundOptions b;
  b.numeric_fallback = options.fallback_numeric;
  b.numeric_budget = options.budget;
  b.seed = options.seed.value_or(0);
  return b;
}

GenQuery gen_query(const Config& config, const RunOptions& options) {
  GenQuery q = config.gen;
  if (options.zero_one_loss) q.subgauss_var = 0.25;
  return q;
}

std::string unit_suffix(Units u) { return u == Units::kNats ? "nats" : "bits"; }

}  // namespace

Units ParseUnits(std::string_view text) {
  if (text == "nats") return Units::kNats;
  if (text == "bits") return Units::kBits;
  throw Error(ErrorCode::kDomainError, "units must be nats or bits");
}

double to_units(double nats, Units units) {
  return units == Units::kNats ? nats : bits(nats);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---- bound ------------------------------------------------------------------

BoundRun run_bound(const Config& config, const RunOptions& options) {
  BoundRun run;
  run.report = total_bound(config.spec, bound_options(options));
  run.gen = gen_query(config, options);
  run.tail = tail_for(run.report.total_leakage_nats, run.gen);
  run.expected_gen = expected_gen_bound(
      run.report.mi_baseline_nats.value_or(run.report.total_leakage_nats), run.gen);
  return run;
}

std::string bound_report_json(const BoundRun& run) {
  const TrainingSpec& spec = run.report.spec_echo;
  json steps = json::array();
  for (const StepLeakageTerm& term : run.report.per_step) {
    const Step& step = spec.schedule.steps[term.step_index - 1];
    json candidates = json::array();
    for (const CandidateBound& c : term.candidates) {
      candidates.push_back({{"case", BoundCaseName(c.bound_case)},
                            {"nats", c.nats},
                            {"is_exact_h", c.is_exact_h},
                            {"best", c.bound_case == term.bound_case}});
    }
    steps.push_back({{"step", term.step_index},
                     {"eta", step.eta},
                     {"noise_family", NoiseFamilyName(step.noise.family)},
                     {"noise_scale", step.noise.scale},
                     {"case", BoundCaseName(term.bound_case)},
                     {"nats", term.nats},
                     {"bits", bits(term.nats)},
                     {"is_exact_h", term.is_exact_h},
                     {"h_std_err", term.h_std_err},
                     {"candidates", candidates}});
  }
  json doc{
      {"schema_version", kReportSchemaVersion},
      {"spec",
       {{"d", spec.d},
        {"p", NormOrderName(spec.constraint.p)},
        {"L", spec.constraint.L},
        {"T", spec.schedule.T()}}},
      {"total_leakage", amount(run.report.total_leakage_nats)},
      {"per_step", steps},
  };
  if (run.report.mi_baseline_nats) doc["mi_baseline"] = amount(*run.report.mi_baseline_nats);
  if (run.report.laplace_limit_nats) {
    doc["laplace_limit"] = amount(*run.report.laplace_limit_nats);
  }
  doc["generalization"] = {
      {"n", run.gen.n},
      {"threshold", run.gen.threshold},
      {"subgauss_var", run.gen.subgauss_var},
      {"alpha", alpha_json(run.gen.alpha)},
      {"expected_gen_bound", run.expected_gen},
      {"expected_gen_source", run.report.mi_baseline_nats ? "mi_baseline" : "max_leakage"},
      {"tail_bound", tail_json(run.tail)},
  };
  return doc.dump(2) + "\n";
}

std::string per_step_csv(const BoundRun& run) {
  std::string out = "step,eta,noise_family,noise_scale,case,nats,is_exact_h\n";
  for (const StepLeakageTerm& term : run.report.per_step) {
    const Step& step = run.report.spec_echo.schedule.steps[term.step_index - 1];
    out += std::to_string(term.step_index) + "," + fmt(step.eta) + "," +
           std::string(NoiseFamilyName(step.noise.family)) + "," +
           fmt(step.noise.scale) + "," + std::string(BoundCaseName(term.bound_case)) +
           "," + fmt(term.nats) + "," + (term.is_exact_h ? "true" : "false") + "\n";
  }
  return out;
}

std::string cumulative_csv(const BoundRun& run) {
  std::string out = "step,cumulative_nats,tail_probability\n";
  double total = 0.0;
  for (const StepLeakageTerm& term : run.report.per_step) {
    total += term.nats;
    out += std::to_string(term.step_index) + "," + fmt(total) + "," +
           fmt(tail_for(total, run.gen).probability) + "\n";
  }
  return out;
}

int cmd_bound(const Config& config, const RunOptions& options, std::ostream& out) {
  const BoundRun run = run_bound(config, options);
  std::filesystem::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "report.json", bound_report_json(run));
  write_file_atomic(options.out_dir / "per_step.csv", per_step_csv(run));
  if (options.emit_plot_data) {
    write_file_atomic(options.out_dir / "cumulative.csv", cumulative_csv(run));
  }
  const std::string u = unit_suffix(options.units);
  out << "total leakage: " << fmt(to_units(run.report.total_leakage_nats, options.units))
      << " " << u << "\n";
  if (run.report.mi_baseline_nats) {
    out << "MI baseline:   " << fmt(to_units(*run.report.mi_baseline_nats, options.units))
        << " " << u << "\n";
  }
  out << "tail bound:    " << fmt(run.tail.probability) << " (raw exponent "
      << fmt(run.tail.exponent) << (run.tail.vacuous() ? ", vacuous" : "") << ")\n";
  out << "wrote " << (options.out_dir / "report.json").string() << "\n";
  return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

SweepAxis ParseSweepAxis(std::string_view text) {
  if (text == "d") return SweepAxis::kD;
  if (text == "sigma") return SweepAxis::kSigma;
  if (text == "eta") return SweepAxis::kEta;
  if (text == "p") return SweepAxis::kP;
  throw Error(ErrorCode::kConfigParseError, "sweep axis must be d, sigma, eta or p");
}

std::vector<SweepRow> run_sweep(const Config& config, const SweepSettings& sweep,
                                const RunOptions& options) {
  const GenQuery gen = gen_query(config, options);
  std::vector<std::pair<std::string, TrainingSpec>> grid;
  if (sweep.axis == SweepAxis::kP) {
    for (NormOrder p : {NormOrder::kL1, NormOrder::kL2, NormOrder::kLinf}) {
      TrainingSpec spec = config.spec;
      spec.constraint.p = p;
      grid.emplace_back(std::string(NormOrderName(p)), spec);
    }
  } else {
    if (sweep.points < 1) throw Error(ErrorCode::kDomainError, "sweep needs >= 1 point");
    if (!(sweep.lo > 0) || !(sweep.hi >= sweep.lo)) {
      throw Error(ErrorCode::kDomainError, "sweep range needs 0 < lo <= hi");
    }
    std::set<int> seen;
    for (int i = 0; i < sweep.points; ++i) {
      const double frac = sweep.points == 1 ? 0.0 : double(i) / (sweep.points - 1);
      TrainingSpec spec = config.spec;
      std::string label;
      if (sweep.axis == SweepAxis::kD) {
        const int d = static_cast<int>(std::lround(sweep.lo + frac * (sweep.hi - sweep.lo)));
        if (!seen.insert(d).second) continue;
        spec.d = d;
        label = std::to_string(d);
      } else {
        const double v = sweep.lo * std::pow(sweep.hi / sweep.lo, frac);
        for (Step& step : spec.schedule.steps) {
          if (sweep.axis == SweepAxis::kEta) {
            step.eta = v;
          } else {
            step.noise = noise_from_variance(step.noise.family, v * v);
          }
        }
        label = fmt(v);
      }
      grid.emplace_back(label, spec);
    }
  }
  std::vector<SweepRow> rows;
  for (const auto& [label, spec] : grid) {
    const BoundReport report = total_bound(spec, bound_options(options));
    SweepRow row;
    row.value = label;
    row.total_nats = report.total_leakage_nats;
    row.mi_baseline_nats = report.mi_baseline_nats;
    row.tail = tail_for(report.total_leakage_nats, gen);
    row.bound_case = report.per_step.front().bound_case;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis, Units units) {
  static const std::map<SweepAxis, std::string> names{
      {SweepAxis::kD, "d"}, {SweepAxis::kSigma, "sigma"},
      {SweepAxis::kEta, "eta"}, {SweepAxis::kP, "p"}};
  const std::string u = unit_suffix(units);
  std::string out = names.at(axis) + ",total_leakage_" + u + ",mi_baseline_" + u +
                    ",tail_probability,raw_exponent,case\n";
  for (const SweepRow& r : rows) {
    out += r.value + "," + fmt(to_units(r.total_nats, units)) + "," +
           (r.mi_baseline_nats ? fmt(to_units(*r.mi_baseline_nats, units)) : "") + "," +
           fmt(r.tail.probability) + "," + fmt(r.tail.exponent) + "," +
           std::string(BoundCaseName(r.bound_case)) + "\n";
  }
  return out;
}

int cmd_sweep(const Config& config, const SweepSettings& sweep,
              const RunOptions& options, std::ostream& out) {
  const std::string csv = sweep_csv(run_sweep(config, sweep, options), sweep.axis,
                                    options.units);
  std::filesystem::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "sweep.csv", csv);
  out << csv;
  return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kValid: return "VALID";
    case Verdict::kVacuous: return "VACUOUS";
    case Verdict::kViolation: return "VIOLATION";
  }
  return "?";
}

Verdict classify(const GenTailEstimate& est, const TailBound& tail) {
  if (tail.vacuous()) return Verdict::kVacuous;
  if (est.empirical_prob <= tail.probability && est.wilson_hi <= tail.probability) {
    return Verdict::kValid;
  }
  return Verdict::kViolation;
}

SimulationRun run_simulation(const Config& config, const RunOptions& options) {
  if (!config.simulation) {
    throw Error(ErrorCode::kConfigParseError, "config has no [simulation] table");
  }
  const SimulationSettings& s = *config.simulation;
  const int trials = options.trials.value_or(s.trials);
  if (trials < 100) {
    throw Error(ErrorCode::kDomainError,
                "simulate needs at least 100 trials (got " + std::to_string(trials) + ")");
  }
  TaskSpec task;
  task.kind = s.task;
  task.d = config.spec.d;
  task.n = s.n;
  task.loss_clip = s.loss_clip;

  SimulationRun run;
  run.estimate = estimate_gen_tail(task, config.spec, s.threshold, trials,
                                   options.seed.value_or(s.seed),
                                   options.workers.value_or(s.workers));
  run.gen.n = s.n;
  run.gen.threshold = s.threshold;
  // Losses in [0, B] are (B^2 / 4)-sub-Gaussian.
  run.gen.subgauss_var = s.loss_clip * s.loss_clip / 4.0;
  run.gen.alpha = config.gen.alpha;
  run.tail = tail_for(run.estimate.accountant.total_leakage_nats, run.gen);
  run.verdict = classify(run.estimate, run.tail);
  return run;
}

std::string trials_csv(const SimulationRun& run) {
  std::string out = "trial,gen_err,exceeded\n";
  const double threshold = run.gen.threshold;
  for (std::size_t i = 0; i < run.estimate.gen_errors.size(); ++i) {
    const double g = run.estimate.gen_errors[i];
    out += std::to_string(i) + "," + fmt(g) + "," +
           (std::abs(g) >= threshold ? "1" : "0") + "\n";
  }
  return out;
}

std::string simulation_summary_json(const Config& config, const SimulationRun& run) {
  const SimulationSettings& s = *config.simulation;
  json doc{
      {"schema_version", kReportSchemaVersion},
      {"task", TaskKindName(s.task)},
      {"d", config.spec.d},
      {"n", s.n},
      {"T", config.spec.schedule.T()},
      {"trials", run.estimate.trials},
      {"threshold", run.gen.threshold},
      {"loss_clip", s.loss_clip},
      {"subgauss_var", run.gen.subgauss_var},
      {"empirical_tail", run.estimate.empirical_prob},
      {"exceed_count", run.estimate.exceed_count},
      {"wilson_95", {{"lo", run.estimate.wilson_lo}, {"hi", run.estimate.wilson_hi}}},
      {"accountant", {{"total_leakage", amount(run.estimate.accountant.total_leakage_nats)}}},
      {"tail_bound", tail_json(run.tail)},
      {"verdict", VerdictName(run.verdict)},
  };
  return doc.dump(2) + "\n";
}

int cmd_simulate(const Config& config, const RunOptions& options, std::ostream& out) {
  const SimulationRun run = run_simulation(config, options);
  std::filesystem::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "trials.csv", trials_csv(run));
  write_file_atomic(options.out_dir / "summary.json", simulation_summary_json(config, run));
  out << "empirical tail: " << fmt(run.estimate.empirical_prob) << " (95% Wilson ["
      << fmt(run.estimate.wilson_lo) << ", " << fmt(run.estimate.wilson_hi) << "])\n"
      << "tail bound:     " << fmt(run.tail.probability) << "\n"
      << "verdict:        " << VerdictName(run.verdict) << "\n";
  return run.verdict == Verdict::kViolation ? kExitVerifyFailed : kExitOk;
}

// ---- optimize-noise ---------------------------------------------------------

int cmd_optimize_noise(const Config& config, double variance_budget,
                       const RunOptions& options, std::ostream& out) {
  const TrainingSpec& spec = config.spec;
  std::map<NoiseFamily, std::pair<NoiseSpec, double>> totals;
  std::vector<NoiseFamily> order;
  for (const Step& step : spec.schedule.steps) {
    for (const RankedNoise& r :
         rank_families_for_linf(spec.d, step.eta, spec.constraint.L, variance_budget)) {
      auto [it, inserted] = totals.try_emplace(r.noise.family, r.noise, 0.0);
      if (inserted) order.push_back(r.noise.family);
      it->second.second += r.step_nats;
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](NoiseFamily a, NoiseFamily b) {
    return totals[a].second < totals[b].second;
  });
  const std::string u = unit_suffix(options.units);
  std::string ranking = "rank,family,scale,f0,total_linf_bound_" + u + "\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& [noise, total] = totals[order[i]];
    ranking += std::to_string(i + 1) + "," + std::string(NoiseFamilyName(noise.family)) +
               "," + fmt(noise.scale) + "," + fmt(density_at_zero_1d(noise)) + "," +
               fmt(to_units(total, options.units)) + "\n";
  }
  const double floor = f0_floor(variance_budget);
  std::string witnesses = "name,f0,variance,f0_floor,ratio\n";
  for (const CandidateDensity& c : optimal_noise_witnesses(variance_budget)) {
    witnesses += c.name + "," + fmt(c.f0) + "," + fmt(c.variance) + "," + fmt(floor) +
                 "," + fmt(c.f0 / floor) + "\n";
  }
  std::filesystem::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "noise_ranking.csv", ranking);
  write_file_atomic(options.out_dir / "noise_witnesses.csv", witnesses);
  const NoiseSpec best = optimal_noise(variance_budget);
  out << "optimal noise: uniform(-" << fmt(best.scale) << ", " << fmt(best.scale)
      << "), f0 = " << fmt(floor) << "\n"
      << ranking;
  return kExitOk;
}

}  // namespace mleak
