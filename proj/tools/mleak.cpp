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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "mleak/cli_reports.hpp"
#include "mleak/noise_design.hpp"

namespace {

// "a..b" or "a:b"; a single value gives a one-point range.
std::pair<double, double> parse_range(const std::string& text) {
  std::size_t sep = text.find("..");
  std::size_t skip = 2;
  if (sep == std::string::npos) {
    sep = text.find(':');
    skip = 1;
  }
  try {
    if (sep == std::string::npos) {
      const double v = std::stod(text);
      return {v, v};
    }
    return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + skip))};
  } catch (const std::exception&) {
    throw mleak::Error(mleak::ErrorCode::kConfigParseError,
                       "cannot parse range '" + text + "' (use lo..hi)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal-leakage bounds for noisy iterative learning algorithms"};
  app.require_subcommand(1);

  std::string config_path;
  mleak::RunOptions opts;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string fallback = "none";
  std::string units = "nats";
  std::string loss;
  std::string emit;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", config_path, "TOML configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", out_dir, "Directory for report files")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--budget", opts.budget, "Monte-Carlo sample budget")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--fallback", fallback, "Use 'numeric' to integrate h when no closed form applies")
        ->check(CLI::IsMember({"none", "numeric"}));
    cmd->add_option("--units", units, "Units for console and sweep output")
        ->check(CLI::IsMember({"nats", "bits"}));
    cmd->add_option("--loss", loss, "Loss preset; 'zero-one' sets subgauss_var = 1/4")
        ->check(CLI::IsMember({"zero-one"}));
  };

  CLI::App* bound = app.add_subcommand("bound", "Per-step and total leakage with tail bounds");
  add_common(bound, true);
  bound->add_option("--emit", emit, "'plot-data' also writes cumulative.csv")
      ->check(CLI::IsMember({"plot-data"}));

  mleak::VerifySettings verify_settings;
  std::string suite = "all";
  std::string d_range = "1..3";
  int dim = 0;
  CLI::App* verify = app.add_subcommand("verify", "Oracle and dominance suites");
  add_common(verify, false);
  verify->add_option("suite", suite, "h-closed, dominance, thm4, recurrences or all")
      ->check(CLI::IsMember({"h-closed", "dominance", "thm4", "recurrences", "all"}));
  verify->add_option("--d", d_range, "Dimension range for h-closed, e.g. 1..3");
  verify->add_option("--dim", dim, "Restrict dominance to one dimension (1 or 2)")
      ->check(CLI::Range(1, 2));
  verify->add_option("--grid", verify_settings.grid, "Random shift sets per configuration")
      ->check(CLI::PositiveNumber);

  mleak::SweepSettings sweep_settings;
  std::string axis = "sigma";
  std::string range = "0.1..10";
  CLI::App* sweep = app.add_subcommand("sweep", "Bound along one parameter axis");
  add_common(sweep, true);
  sweep->add_option("--axis", axis, "d, sigma, eta or p")
      ->check(CLI::IsMember({"d", "sigma", "eta", "p"}));
  sweep->add_option("--range", range, "lo..hi (ignored for p)");
  sweep->add_option("--points", sweep_settings.points, "Grid points")
      ->check(CLI::PositiveNumber);

  int trials = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "Empirical tail against the accountant");
  add_common(simulate, true);
  simulate->add_option("--trials", trials, "Independent training runs (>= 100)");
  int workers = 0;
  simulate->add_option("--workers", workers, "Threads; results do not depend on it")
      ->check(CLI::PositiveNumber);

  double variance = 0.0;
  CLI::App* optimize = app.add_subcommand("optimize-noise",
                                          "Rank noise families under a variance budget (p = inf)");
  add_common(optimize, true);
  optimize->add_option("--variance", variance, "Per-coordinate variance budget")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mleak::kExitOk : mleak::kExitUsage;
  }

  try {
    opts.out_dir = out_dir;
    opts.fallback_numeric = fallback == "numeric";
    opts.units = mleak::ParseUnits(units);
    opts.zero_one_loss = loss == "zero-one";
    opts.emit_plot_data = emit == "plot-data";
    if (app.get_subcommands().front()->count("--seed") > 0) {
      opts.seed = seed;
    }

    if (app.got_subcommand(verify)) {
      verify_settings.suite = mleak::ParseVerifySuite(suite);
      const auto [lo, hi] = parse_range(d_range);
      verify_settings.d_lo = static_cast<int>(lo);
      verify_settings.d_hi = static_cast<int>(hi);
      if (dim > 0) verify_settings.dims = {dim};
      verify_settings.budget = opts.budget;
      verify_settings.seed = opts.seed.value_or(0);
      return mleak::cmd_verify(verify_settings, opts, std::cout);
    }

    const mleak::Config config = mleak::load_config(config_path);
    if (app.got_subcommand(bound)) return mleak::cmd_bound(config, opts, std::cout);
    if (app.got_subcommand(sweep)) {
      sweep_settings.axis = mleak::ParseSweepAxis(axis);
      std::tie(sweep_settings.lo, sweep_settings.hi) = parse_range(range);
      return mleak::cmd_sweep(config, sweep_settings, opts, std::cout);
    }
    if (app.got_subcommand(simulate)) {
      if (simulate->count("--trials") > 0) opts.trials = trials;
      if (workers > 0) opts.workers = workers;
      return mleak::cmd_simulate(config, opts, std::cout);
    }
    if (optimize->count("--variance") == 0 && !config.variance_budget) {
      std::cerr << "error: optimize-noise needs --variance or [noise].variance_budget\n";
      return mleak::kExitUsage;
    }
    return mleak::cmd_optimize_noise(
        config, optimize->count("--variance") > 0 ? variance : *config.variance_budget,
        opts, std::cout);
  } catch (const mleak::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mleak::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mleak::kExitUsage;
  }
}
