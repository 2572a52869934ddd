// Copyright 2026 The VQA Robustness Harness Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqaeval/pipeline/config.h"

#include <algorithm>
#include <set>

#include "vqaeval/common/error.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/common/text.h"
#include "vqaeval/split/builtin_shifts.h"

extern char** environ;

namespace vqaeval::pipeline {
namespace {

[[noreturn]] void Invalid(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kValidation, "config " + key + ": " + what);
}

// Typed, unknown-key-checking view of one config section.
class Section {
 public:
  Section(const Json& document, std::string name,
          std::set<std::string> allowed)
      : name_(std::move(name)), allowed_(std::move(allowed)) {
    if (!document.contains(name_)) return;
    value_ = document.at(name_);
    if (!value_.is_object()) Invalid(name_, "must be a table");
    for (const auto& [key, unused] : value_.items()) {
      if (allowed_.count(key) == 0) Invalid(name_ + "." + key, "unknown key");
    }
  }

  bool Has(const std::string& key) const { return value_.contains(key); }
  const Json& Raw(const std::string& key) const { return value_.at(key); }
  std::string Key(const std::string& key) const { return name_ + "." + key; }

  std::string String(const std::string& key, std::string fallback) const {
    if (!Has(key)) return fallback;
    if (!value_[key].is_string()) Invalid(Key(key), "must be a string");
    return value_[key].get<std::string>();
  }

  bool Bool(const std::string& key, bool fallback) const {
    if (!Has(key)) return fallback;
    if (!value_[key].is_boolean()) Invalid(Key(key), "must be a boolean");
    return value_[key].get<bool>();
  }

  long long Integer(const std::string& key, long long fallback) const {
    if (!Has(key)) return fallback;
    if (!value_[key].is_number_integer()) {
      Invalid(Key(key), "must be an integer");
    }
    return value_[key].get<long long>();
  }

  double Number(const std::string& key, double fallback) const {
    if (!Has(key)) return fallback;
    if (!value_[key].is_number()) Invalid(Key(key), "must be a number");
    return value_[key].get<double>();
  }

  uint64_t Seed(const std::string& key, uint64_t fallback) const {
    const long long seed = Integer(key, -1);
    if (!Has(key)) return fallback;
    if (seed < 0) Invalid(Key(key), "must be non-negative");
    return static_cast<uint64_t>(seed);
  }

  std::vector<std::string> Strings(const std::string& key) const {
    std::vector<std::string> out;
    if (!Has(key)) return out;
    if (!value_[key].is_array()) Invalid(Key(key), "must be an array");
    for (const Json& item : value_[key]) {
      if (!item.is_string()) Invalid(Key(key), "entries must be strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

 private:
  std::string name_;
  std::set<std::string> allowed_;
  Json value_ = Json::object();
};

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

template <typename Fn>
auto Checked(const std::string& key, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) throw;
    Invalid(key, e.what());
  }
}

}  // namespace

std::vector<std::string> ProcessEnvironment() {
  std::vector<std::string> out;
  for (char** entry = environ; entry != nullptr && *entry != nullptr;
       ++entry) {
    out.emplace_back(*entry);
  }
  return out;
}

void ApplyEnvOverrides(Json& document, const std::vector<std::string>& env) {
  const std::string prefix = kEnvPrefix;
  std::vector<std::string> sorted = env;
  std::sort(sorted.begin(), sorted.end());
  for (const std::string& entry : sorted) {
    const size_t eq = entry.find('=');
    if (eq == std::string::npos || entry.compare(0, prefix.size(), prefix) != 0) {
      continue;
    }
    const std::string name = entry.substr(prefix.size(), eq - prefix.size());
    const size_t sep = name.find("__");
    if (sep == std::string::npos || sep == 0 || sep + 2 >= name.size()) {
      continue;
    }
    const std::string section = ToLowerAscii(name.substr(0, sep));
    const std::string key = ToLowerAscii(name.substr(sep + 2));
    const std::string raw = entry.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    if (!document.contains(section)) document[section] = Json::object();
    if (!document[section].is_object()) {
      Invalid(section, "environment override targets a non-table");
    }
    document[section][key] = std::move(value);
  }
}

metrics::JudgeConfig ParseJudgeConfig(const Json& document) {
  const Section s(document, "judge",
                  {"mode", "endpoint", "model_name", "api_style",
                   "temperature", "max_tokens", "max_attempts", "backoff_ms",
                   "backoff_multiplier", "timeout_ms", "parallelism",
                   "parser"});
  metrics::JudgeConfig c;
  c.mode = s.String("mode", c.mode);
  c.endpoint = s.String("endpoint", c.endpoint);
  c.model_name = s.String("model_name", c.model_name);
  c.api_style = s.String("api_style", c.api_style);
  c.temperature = s.Number("temperature", c.temperature);
  c.max_tokens = static_cast<int>(s.Integer("max_tokens", c.max_tokens));
  c.max_attempts = static_cast<int>(s.Integer("max_attempts", c.max_attempts));
  c.backoff_ms = static_cast<int>(s.Integer("backoff_ms", c.backoff_ms));
  c.backoff_multiplier = s.Number("backoff_multiplier", c.backoff_multiplier);
  c.timeout_ms = static_cast<int>(s.Integer("timeout_ms", c.timeout_ms));
  c.parallelism = static_cast<int>(s.Integer("parallelism", c.parallelism));
  if (s.Has("parser")) {
    c.parser = Checked(s.Key("parser"), [&] {
      return metrics::ParseParserId(s.String("parser", ""));
    });
  }
  metrics::ValidateJudgeConfig(c);
  return c;
}

PipelineConfig ParseConfig(const Json& document,
                           const std::filesystem::path& base_dir) {
  if (!document.is_object()) Invalid("<root>", "must be a table");
  static const std::set<std::string> kSections = {
      "run",      "ingest", "split",      "corrupt", "baseline",
      "evaluate", "judge",  "robustness", "report"};
  for (const auto& [name, unused] : document.items()) {
    if (kSections.count(name) == 0) Invalid(name, "unknown section");
  }

  PipelineConfig c;
  c.base_dir = base_dir;
  c.document = document;

  const Section run(document, "run", {"root", "seed", "parallelism"});
  if (!run.Has("seed")) Invalid("run.seed", "required");
  c.seed = run.Seed("seed", 0);
  c.run_root = Resolve(base_dir, run.String("root", "runs"));
  c.parallelism = static_cast<int>(run.Integer("parallelism", 1));
  if (c.parallelism < 1) Invalid("run.parallelism", "must be at least 1");

  const Section ingest(document, "ingest", {"adapter", "root"});
  c.adapter = Checked("ingest.adapter", [&] {
    return dataset::ParseAdapter(ingest.String("adapter", "native"));
  });
  if (!ingest.Has("root")) Invalid("ingest.root", "required");
  c.data_root = Resolve(base_dir, ingest.String("root", ""));

  const Section split(document, "split", {"builtin", "files"});
  for (const std::string& name : split.Strings("builtin")) {
    std::optional<split::ShiftSpec> spec = split::FindBuiltinShift(name);
    if (!spec) Invalid("split.builtin", "unknown shift '" + name + "'");
    c.shifts.push_back(*spec);
  }
  for (const std::string& file : split.Strings("files")) {
    c.shifts.push_back(Checked("split.files", [&] {
      return split::LoadShiftSpec(Resolve(base_dir, file));
    }));
  }
  if (c.shifts.empty()) Invalid("split", "at least one shift is required");
  std::set<std::string> names;
  for (const split::ShiftSpec& spec : c.shifts) {
    if (!names.insert(spec.name).second) {
      Invalid("split", "duplicate shift '" + spec.name + "'");
    }
  }

  const Section corrupt(document, "corrupt",
                        {"enabled", "base_shift", "severities", "seed"});
  c.corrupt_enabled = corrupt.Bool("enabled", false);
  c.corrupt_seed = corrupt.Seed("seed", DeriveSeed(c.seed, "corrupt"));
  if (c.corrupt_enabled) {
    c.corrupt_base_shift = corrupt.String("base_shift", c.shifts.front().name);
    if (names.count(c.corrupt_base_shift) == 0) {
      Invalid("corrupt.base_shift", "unknown shift '" +
                                        c.corrupt_base_shift + "'");
    }
    std::vector<std::string> levels = corrupt.Strings("severities");
    if (levels.empty()) levels = {"low", "medium", "high"};
    for (const std::string& level : levels) {
      c.severities.push_back(Checked("corrupt.severities", [&] {
        return corruption::ParseSeverity(level);
      }));
    }
  }

  const Section baseline(document, "baseline",
                         {"most_frequent", "random", "seed"});
  c.most_frequent = baseline.Bool("most_frequent", true);
  c.random_baseline = baseline.Bool("random", true);
  c.baseline_seed = baseline.Seed("seed", DeriveSeed(c.seed, "baseline"));

  const Section evaluate(document, "evaluate", {"predictions"});
  if (evaluate.Has("predictions")) {
    const Json& list = evaluate.Raw("predictions");
    if (!list.is_array()) Invalid("evaluate.predictions", "must be an array");
    for (const Json& entry : list) {
      if (!entry.is_object() || !entry.contains("path") ||
          !entry.contains("shift") || !entry["path"].is_string() ||
          !entry["shift"].is_string()) {
        Invalid("evaluate.predictions", "entries need string path and shift");
      }
      PredictionSource source{
          Resolve(base_dir, entry["path"].get<std::string>()),
          entry["shift"].get<std::string>()};
      if (names.count(source.shift) == 0 &&
          !(c.corrupt_enabled &&
            source.shift.rfind(c.corrupt_base_shift + "_corruption_", 0) ==
                0)) {
        Invalid("evaluate.predictions",
                "unknown shift '" + source.shift + "'");
      }
      c.predictions.push_back(std::move(source));
    }
  }

  c.judge = Checked("judge", [&] { return ParseJudgeConfig(document); });

  const Section robustness(document, "robustness",
                           {"bootstrap_resamples", "seed", "alpha",
                            "correction"});
  const long long resamples = robustness.Integer("bootstrap_resamples", 100);
  if (resamples < 1) {
    Invalid("robustness.bootstrap_resamples", "must be at least 1");
  }
  c.bootstrap_resamples = static_cast<size_t>(resamples);
  c.bootstrap_seed = robustness.Seed("seed", DeriveSeed(c.seed, "bootstrap"));
  c.alpha = robustness.Number("alpha", 0.05);
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
    Invalid("robustness.alpha", "must lie in (0, 1)");
  }
  c.correction = Checked("robustness.correction", [&] {
    return stats::ParseCorrection(robustness.String("correction", "holm"));
  });

  const Section report(document, "report", {"coverage_floor"});
  c.coverage_floor = report.Number("coverage_floor", 0.5);
  if (!(c.coverage_floor >= 0.0 && c.coverage_floor <= 1.0)) {
    Invalid("report.coverage_floor", "must lie in [0, 1]");
  }
  return c;
}

PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const ConfigOverrides& overrides,
                          const std::vector<std::string>& env) {
  Json document = LoadDocument(path);
  if (!document.is_object()) Invalid("<root>", "must be a table");
  ApplyEnvOverrides(document, env);
  if (overrides.seed) document["run"]["seed"] = *overrides.seed;
  if (overrides.parallelism) {
    document["run"]["parallelism"] = *overrides.parallelism;
    document["judge"]["parallelism"] = *overrides.parallelism;
  }
  if (overrides.judge_endpoint) {
    document["judge"]["endpoint"] = *overrides.judge_endpoint;
    document["judge"]["mode"] = "http";
  }
  if (overrides.mock_judge) document["judge"]["mode"] = "mock";
  std::filesystem::path base = path.parent_path();
  if (base.empty()) base = ".";
  return ParseConfig(document, std::filesystem::absolute(base));
}

}  // namespace vqaeval::pipeline
