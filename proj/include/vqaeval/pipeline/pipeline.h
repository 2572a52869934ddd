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

#ifndef VQAEVAL_PIPELINE_PIPELINE_H_
#define VQAEVAL_PIPELINE_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/manifest.h"
#include "vqaeval/metrics/judge.h"
#include "vqaeval/pipeline/config.h"
#include "vqaeval/pipeline/report.h"
#include "vqaeval/split/split.h"

namespace vqaeval::pipeline {

enum class Stage {
  kIngest,
  kSplit,
  kCorrupt,
  kBaseline,
  kEvaluate,
  kRobustness,
  kReport,
};

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);
const std::vector<Stage>& AllStages();

// Bumped whenever a stage's output format or semantics change, so old
// artifacts are not reused.
int StageVersion(Stage stage);

// Marker written last into a stage directory.
inline constexpr char kCompleteMarker[] = "_complete";

// ---- Stage bodies. Each writes into `out_dir` and nothing else. ----

void IngestStage(dataset::Adapter adapter, const std::filesystem::path& root,
                 const std::filesystem::path& out_dir);

// Writes <out_dir>/<shift>.json per spec.
void SplitStage(const dataset::DatasetManifest& manifest,
                const std::vector<split::ShiftSpec>& shifts,
                const std::filesystem::path& out_dir);

// Corrupts the i.i.d. test images of `base` once per severity. Writes
// manifest/ (corrupted samples), images/, corruption_log.jsonl,
// errors.jsonl and splits/<base>_corruption_<severity>.json.
void CorruptStage(const dataset::DatasetManifest& manifest,
                  const split::SplitManifest& base,
                  const std::filesystem::path& image_root,
                  const std::vector<corruption::Severity>& severities,
                  uint64_t seed, int parallelism,
                  const std::filesystem::path& out_dir);

// Per split manifest: <shift>/most_frequent.jsonl, <shift>/random.jsonl and
// <shift>/frequency_table.json; plus coverage.json over all shifts.
void BaselineStage(const dataset::DatasetManifest& manifest,
                   const std::vector<split::SplitManifest>& splits,
                   bool most_frequent, bool random, uint64_t seed,
                   const std::filesystem::path& out_dir);

struct EvaluationInput {
  const dataset::DatasetManifest* manifest = nullptr;
  std::vector<split::SplitManifest> splits;
  // Prediction files paired with the shift they were produced for.
  std::vector<std::pair<std::filesystem::path, std::string>> predictions;
  // Optional baseline stage directory.
  std::optional<std::filesystem::path> baseline_dir;
};

// Scores every prediction against its shift's test_iid and test_ood
// samples. Writes scores.jsonl, summary.csv, summary.json and
// coverage.json (predictions missing per run and split).
void EvaluateStage(const EvaluationInput& input,
                   const metrics::JudgeConfig& judge,
                   metrics::JudgeClient& client,
                   const std::filesystem::path& out_dir);

void RobustnessStage(const std::filesystem::path& scores_path,
                     const std::optional<std::filesystem::path>& coverage_path,
                     const AnalysisOptions& options,
                     const std::filesystem::path& out_dir);

void ReportStage(const std::filesystem::path& robustness_path,
                 double coverage_floor, const std::filesystem::path& out_dir);

// Merges the base manifest with extra samples (e.g. corrupted copies).
dataset::DatasetManifest MergeManifests(
    const dataset::DatasetManifest& base,
    const std::vector<dataset::DatasetManifest>& extra);

// ---- Orchestration ----

struct StageRecord {
  Stage stage = Stage::kIngest;
  std::string hash;  // Full SHA-256 of the stage inputs.
  std::filesystem::path dir;
  bool reused = false;
};

struct RunResult {
  std::vector<StageRecord> stages;
  std::filesystem::path manifest_path;

  const StageRecord* Find(Stage stage) const;
};

using JudgeClientFactory =
    std::function<std::unique_ptr<metrics::JudgeClient>(
        const metrics::JudgeConfig&)>;

// Mock or HTTP client per the config's judge mode.
std::unique_ptr<metrics::JudgeClient> DefaultJudgeClient(
    const metrics::JudgeConfig& config);

// Runs stages in order up to and including `last`. A stage directory is
// <run_root>/<stage>-<first 12 hex of its input hash>; a directory with a
// completion marker is reused as is. Stage failures raise Error with the
// stage name prefixed; directories of completed stages are kept. Writes
// <run_root>/run_manifest.json.
RunResult RunPipeline(const PipelineConfig& config,
                      std::optional<Stage> last = std::nullopt,
                      const JudgeClientFactory& judge_factory =
                          DefaultJudgeClient);

}  // namespace vqaeval::pipeline

#endif  // VQAEVAL_PIPELINE_PIPELINE_H_
