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

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "mleak/cli_reports.hpp"
#include "mleak/noise_design.hpp"
#include "mleak/noise_models.hpp"
#include "mleak/toml_subset.hpp"

namespace mleak {
namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"algorithm", {"d", "p", "L", "T"}},
      {"noise", {"family", "scale", "variance_budget"}},
      {"schedule", {"eta", "noise_scale"}},
      {"generalization", {"n", "threshold", "subgauss_var", "loss", "alpha"}},
      {"simulation",
       {"task", "n", "trials", "seed", "loss_clip", "threshold", "workers"}},
  };
  return keys;
}

class TableView {
 public:
  TableView(const TomlDocument& doc, std::string name) : name_(std::move(name)) {
    auto it = doc.find(name_);
    if (it != doc.end()) table_ = &it->second;
  }

  bool present() const { return table_ != nullptr; }
  bool has(const std::string& key) const {
    return table_ && table_->values.count(key);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    int line = table_ ? table_->line : 0;
    if (has(key)) line = table_->values.at(key).line;
    std::string where = name_ + "." + key;
    throw Error(ErrorCode::kConfigParseError,
                (line > 0 ? "line " + std::to_string(line) + ", " : std::string()) +
                    where + ": " + what);
  }

  const TomlValue& get(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key");
    return table_->values.at(key);
  }

  double number(const std::string& key) const {
    const TomlValue& v = get(key);
    if (!v.is_number()) {
      fail(key, "expected a number, got " + std::string(TomlKindName(v.kind)));
    }
    return v.as_double();
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::kInteger) {
      fail(key, "expected an integer, got " + std::string(TomlKindName(v.kind)));
    }
    return v.integer;
  }

  std::string string(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::kString) {
      fail(key, "expected a string, got " + std::string(TomlKindName(v.kind)));
    }
    return v.string;
  }

  std::vector<double> numbers(const std::string& key) const {
    const TomlValue& v = get(key);
    std::vector<double> out;
    if (v.kind != TomlValue::Kind::kArray) {
      fail(key, "expected an array of numbers");
    }
    for (const TomlValue& item : v.array) {
      if (!item.is_number()) fail(key, "array entries must be numbers");
      out.push_back(item.as_double());
    }
    return out;
  }

 private:
  std::string name_;
  const TomlTable* table_ = nullptr;
};

void check_known(const TomlDocument& doc) {
  for (const auto& [name, table] : doc) {
    if (name.empty()) {
      if (!table.values.empty()) {
        const auto& [key, v] = *table.values.begin();
        throw Error(ErrorCode::kConfigParseError,
                    "line " + std::to_string(v.line) + ", " + key +
                        ": keys must live inside a table");
      }
      continue;
    }
    auto it = known_keys().find(name);
    if (it == known_keys().end()) {
      throw Error(ErrorCode::kConfigParseError,
                  "line " + std::to_string(table.line) + ", [" + name +
                      "]: unknown table");
    }
    for (const auto& [key, v] : table.values) {
      if (!it->second.count(key)) {
        throw Error(ErrorCode::kConfigParseError,
                    "line " + std::to_string(v.line) + ", " + name + "." + key +
                        ": unknown key");
      }
    }
  }
}

NormOrder read_norm(const TableView& t) {
  const TomlValue& v = t.get("p");
  if (v.kind == TomlValue::Kind::kInteger && (v.integer == 1 || v.integer == 2)) {
    return v.integer == 1 ? NormOrder::kL1 : NormOrder::kL2;
  }
  if (v.kind == TomlValue::Kind::kFloat && std::isinf(v.floating) && v.floating > 0) {
    return NormOrder::kLinf;
  }
  if (v.kind == TomlValue::Kind::kString) {
    try {
      return ParseNormOrder(v.string);
    } catch (const Error&) {
    }
  }
  t.fail("p", "must be 1, 2 or \"inf\"");
}

int positive_int(const TableView& t, const std::string& key) {
  const std::int64_t v = t.integer(key);
  if (v < 1 || v > std::numeric_limits<int>::max()) t.fail(key, "must be >= 1");
  return static_cast<int>(v);
}

}  // namespace

Config parse_config(std::string_view text) {
  const TomlDocument doc = parse_toml(text);
  check_known(doc);
  Config config;

  const TableView algo(doc, "algorithm");
  const TableView noise(doc, "noise");
  const TableView sched(doc, "schedule");
  const TableView gen(doc, "generalization");
  const TableView sim(doc, "simulation");
  if (!algo.present()) algo.fail("d", "missing table [algorithm]");

  config.spec.d = positive_int(algo, "d");
  config.spec.constraint.p = read_norm(algo);
  config.spec.constraint.L = algo.number("L");
  if (!(config.spec.constraint.L >= 0) || !std::isfinite(config.spec.constraint.L)) {
    algo.fail("L", "must be finite and >= 0");
  }

  NoiseSpec base;
  if (noise.has("family")) {
    try {
      base.family = ParseNoiseFamily(noise.string("family"));
    } catch (const Error&) {
      noise.fail("family", "must be gaussian, laplace or uniform");
    }
  }
  if (noise.has("scale") == noise.has("variance_budget")) {
    noise.fail("scale", "give exactly one of scale and variance_budget");
  }
  if (noise.has("scale")) {
    base.scale = noise.number("scale");
    if (!(base.scale > 0) || !std::isfinite(base.scale)) {
      noise.fail("scale", "must be finite and > 0");
    }
  } else {
    const double v = noise.number("variance_budget");
    if (!(v > 0) || !std::isfinite(v)) {
      noise.fail("variance_budget", "must be finite and > 0");
    }
    config.variance_budget = v;
    base = noise.has("family") ? noise_from_variance(base.family, v) : optimal_noise(v);
  }

  std::vector<double> etas;
  if (!sched.has("eta")) sched.fail("eta", "missing required key");
  if (sched.get("eta").kind == TomlValue::Kind::kArray) {
    etas = sched.numbers("eta");
    if (etas.empty()) sched.fail("eta", "per-step array is empty");
    if (algo.has("T") && positive_int(algo, "T") != static_cast<int>(etas.size())) {
      sched.fail("eta", "array length differs from algorithm.T");
    }
  } else {
    etas.assign(static_cast<std::size_t>(positive_int(algo, "T")), sched.number("eta"));
  }
  std::vector<double> scales(etas.size(), base.scale);
  if (sched.has("noise_scale")) {
    scales = sched.numbers("noise_scale");
    if (scales.size() != etas.size()) {
      sched.fail("noise_scale", "array length differs from the number of steps");
    }
  }
  for (std::size_t t = 0; t < etas.size(); ++t) {
    config.spec.schedule.steps.push_back(
        Step{etas[t], NoiseSpec{base.family, scales[t]}});
  }

  const ValidationResult valid = validate_spec(config.spec);
  if (!valid.ok()) {
    const SpecIssue& issue = valid.issues.front();
    if (issue.field.find(".eta") != std::string::npos) {
      sched.fail("eta", issue.field + " must be > 0");
    }
    if (issue.field.find(".scale") != std::string::npos) {
      sched.has("noise_scale") ? sched.fail("noise_scale", issue.field + " must be > 0")
                               : noise.fail("scale", issue.field + " must be > 0");
    }
    algo.fail("d", std::string(SpecErrorName(issue.code)) + " at " + issue.field);
  }

  if (sim.present()) {
    SimulationSettings s;
    if (sim.has("task")) {
      try {
        s.task = ParseTaskKind(sim.string("task"));
      } catch (const Error&) {
        sim.fail("task", "must be quadratic_well or logistic_synthetic");
      }
    }
    s.n = positive_int(sim, "n");
    s.trials = sim.has("trials") ? positive_int(sim, "trials") : s.trials;
    if (sim.has("seed")) {
      const std::int64_t seed = sim.integer("seed");
      if (seed < 0) sim.fail("seed", "must be >= 0");
      s.seed = static_cast<std::uint64_t>(seed);
    }
    s.loss_clip = sim.number_or("loss_clip", s.loss_clip);
    if (!(s.loss_clip > 0) || !std::isfinite(s.loss_clip)) {
      sim.fail("loss_clip", "must be finite and > 0");
    }
    s.threshold = sim.number_or("threshold", gen.number_or("threshold", s.threshold));
    if (!(s.threshold > 0)) sim.fail("threshold", "must be > 0");
    s.workers = sim.has("workers") ? positive_int(sim, "workers") : 1;
    config.simulation = s;
  }

  if (gen.present()) {
    config.gen.n = gen.has("n") ? positive_int(gen, "n")
                                : (config.simulation ? config.simulation->n
                                                     : positive_int(gen, "n"));
    config.gen.threshold = gen.number_or("threshold", config.gen.threshold);
    if (!(config.gen.threshold > 0)) gen.fail("threshold", "must be > 0");
    if (gen.has("loss") && gen.has("subgauss_var")) {
      gen.fail("loss", "give at most one of loss and subgauss_var");
    }
    if (gen.has("loss")) {
      if (gen.string("loss") != "zero-one") gen.fail("loss", "only \"zero-one\" is known");
      config.gen.subgauss_var = 0.25;
    }
    if (gen.has("subgauss_var")) {
      config.gen.subgauss_var = gen.number("subgauss_var");
      if (!(config.gen.subgauss_var > 0)) gen.fail("subgauss_var", "must be > 0");
    }
    if (gen.has("alpha")) {
      const TomlValue& a = gen.get("alpha");
      if (a.kind == TomlValue::Kind::kString && a.string == "inf") {
        config.gen.alpha = std::numeric_limits<double>::infinity();
      } else if (a.is_number() && a.as_double() > 1) {
        config.gen.alpha = a.as_double();
      } else {
        gen.fail("alpha", "must be a number > 1 or \"inf\"");
      }
    }
  } else if (config.simulation) {
    config.gen.n = config.simulation->n;
    config.gen.threshold = config.simulation->threshold;
  } else {
    gen.fail("n", "missing table [generalization]");
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfigParseError, "cannot open config '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace mleak
