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

#ifndef VQAEVAL_PIPELINE_CONFIG_H_
#define VQAEVAL_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/corruption/corruption.h"
#include "vqaeval/dataset/ingest.h"
#include "vqaeval/metrics/judge.h"
#include "vqaeval/split/shift_spec.h"
#include "vqaeval/stats/hypothesis.h"

namespace vqaeval::pipeline {

// Environment variables of the form VQAEVAL_<SECTION>__<KEY> override
// config keys; section and key are lower-cased.
inline constexpr char kEnvPrefix[] = "VQAEVAL_";

struct PredictionSource {
  std::filesystem::path path;
  std::string shift;
};

struct PipelineConfig {
  std::filesystem::path base_dir;  // Relative paths resolve against this.
  Json document;                   // After all overrides.

  std::filesystem::path run_root;
  uint64_t seed = 0;
  int parallelism = 1;

  dataset::Adapter adapter = dataset::Adapter::kNative;
  std::filesystem::path data_root;

  std::vector<split::ShiftSpec> shifts;

  bool corrupt_enabled = false;
  std::string corrupt_base_shift;
  std::vector<corruption::Severity> severities;
  uint64_t corrupt_seed = 0;

  bool most_frequent = true;
  bool random_baseline = true;
  uint64_t baseline_seed = 0;

  std::vector<PredictionSource> predictions;
  metrics::JudgeConfig judge;

  size_t bootstrap_resamples = 100;
  uint64_t bootstrap_seed = 0;
  double alpha = 0.05;
  stats::Correction correction = stats::Correction::kHolm;

  double coverage_floor = 0.5;
};

// Values applied on top of the file and environment, in that order.
struct ConfigOverrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> judge_endpoint;  // Also selects http mode.
  std::optional<int> parallelism;
  bool mock_judge = false;
};

// Applies VQAEVAL_* variables from `env` ("NAME=value" strings). Values
// that parse as JSON keep their type; anything else is a string.
void ApplyEnvOverrides(Json& document, const std::vector<std::string>& env);
std::vector<std::string> ProcessEnvironment();

// Throws Error(kValidation) naming the offending key.
PipelineConfig ParseConfig(const Json& document,
                           const std::filesystem::path& base_dir);
PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const ConfigOverrides& overrides = {},
                          const std::vector<std::string>& env =
                              ProcessEnvironment());

metrics::JudgeConfig ParseJudgeConfig(const Json& section);

}  // namespace vqaeval::pipeline

#endif  // VQAEVAL_PIPELINE_CONFIG_H_
