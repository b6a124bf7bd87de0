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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mleak/core_model.hpp"
#include "mleak/generalization_bounds.hpp"
#include "mleak/leakage_bounds.hpp"
#include "mleak/sgld_sim.hpp"

namespace mleak {

inline constexpr int kReportSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitVerifyFailed = 2 };

enum class Units { kNats, kBits };
Units ParseUnits(std::string_view text);
double to_units(double nats, Units units);

struct SimulationSettings {
  TaskKind task = TaskKind::kQuadraticWell;
  int n = 100;
  int trials = 500;
  std::uint64_t seed = 0;
  double loss_clip = 1.0;
  double threshold = 0.1;
  int workers = 1;
};

struct Config {
  TrainingSpec spec;
  GenQuery gen;
  /// Set when [noise] gave variance_budget instead of scale.
  std::optional<double> variance_budget;
  std::optional<SimulationSettings> simulation;
};

/// Builds a Config from TOML text. Unknown tables or keys, wrong types and
/// invariant violations raise ConfigParseError naming "line N, table.key".
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Overrides applied after parsing; they mirror the CLI flags.
struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::int64_t budget = 1'000'000;
  bool fallback_numeric = false;
  Units units = Units::kNats;
  bool zero_one_loss = false;
  bool emit_plot_data = false;
  std::optional<int> trials;   // simulate only
  std::optional<int> workers;  // simulate only
};

/// Writes `contents` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// ---- bound ------------------------------------------------------------------

struct BoundRun {
  BoundReport report;
  GenQuery gen;
  TailBound tail;
  double expected_gen = 0.0;
};

BoundRun run_bound(const Config& config, const RunOptions& options);
std::string bound_report_json(const BoundRun& run);
std::string per_step_csv(const BoundRun& run);
/// step, cumulative_nats, tail_probability: the bound after each prefix.
std::string cumulative_csv(const BoundRun& run);
int cmd_bound(const Config& config, const RunOptions& options, std::ostream& out);

// ---- verify -----------------------------------------------------------------

enum class VerifySuite { kHClosed, kDominance, kThm4, kRecurrences, kAll };
VerifySuite ParseVerifySuite(std::string_view text);

struct VerifySettings {
  VerifySuite suite = VerifySuite::kAll;
  int d_lo = 1;
  int d_hi = 3;
  std::vector<int> dims{1, 2};
  int grid = 100;  // random shift sets per dominance configuration
  std::int64_t budget = 1'000'000;
  std::uint64_t seed = 0;
};

struct VerifyRow {
  std::string case_name;
  double closed_form = 0.0;
  double oracle = 0.0;
  double std_err = 0.0;
  bool pass = false;
};

std::vector<VerifyRow> run_verify(const VerifySettings& settings);
std::string verify_csv(const std::vector<VerifyRow>& rows);
int cmd_verify(const VerifySettings& settings, const RunOptions& options,
               std::ostream& out);

// ---- sweep ------------------------------------------------------------------

enum class SweepAxis { kD, kSigma, kEta, kP };
SweepAxis ParseSweepAxis(std::string_view text);

struct SweepSettings {
  SweepAxis axis = SweepAxis::kSigma;
  double lo = 0.1;
  double hi = 10.0;
  int points = 20;  // log-spaced for sigma and eta, integer steps for d
};

struct SweepRow {
  std::string value;
  double total_nats = 0.0;
  std::optional<double> mi_baseline_nats;
  TailBound tail{};
  BoundCase bound_case = BoundCase::kGaussianL2;
};

std::vector<SweepRow> run_sweep(const Config& config, const SweepSettings& sweep,
                                const RunOptions& options);
std::string sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis, Units units);
int cmd_sweep(const Config& config, const SweepSettings& sweep,
              const RunOptions& options, std::ostream& out);

// ---- simulate ---------------------------------------------------------------

enum class Verdict { kValid, kVacuous, kViolation };
std::string_view VerdictName(Verdict v);

struct SimulationRun {
  GenTailEstimate estimate;
  GenQuery gen;
  TailBound tail;
  Verdict verdict = Verdict::kValid;
};

/// VACUOUS when the raw tail bound is >= 1, VALID when both the empirical
/// tail and its upper Wilson limit are <= the bound, VIOLATION otherwise.
Verdict classify(const GenTailEstimate& est, const TailBound& tail);

SimulationRun run_simulation(const Config& config, const RunOptions& options);
std::string trials_csv(const SimulationRun& run);
std::string simulation_summary_json(const Config& config, const SimulationRun& run);
int cmd_simulate(const Config& config, const RunOptions& options, std::ostream& out);

// ---- optimize-noise ---------------------------------------------------------

int cmd_optimize_noise(const Config& config, double variance_budget,
                       const RunOptions& options, std::ostream& out);

}  // namespace mleak
