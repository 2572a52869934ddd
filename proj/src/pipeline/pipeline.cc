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

#include "vqaeval/pipeline/pipeline.h"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include "vqaeval/baselines/baselines.h"
#include "vqaeval/common/error.h"
#include "vqaeval/common/hash.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/corruption/corruption.h"
#include "vqaeval/metrics/aggregate.h"
#include "vqaeval/metrics/http_judge_client.h"
#include "vqaeval/metrics/mock_judge_client.h"
#include "vqaeval/metrics/prediction.h"
#include "vqaeval/metrics/score.h"
#include "vqaeval/pipeline/report.h"

namespace vqaeval::pipeline {
namespace fs = std::filesystem;
namespace {

constexpr char kManifestDir[] = "manifest";
constexpr char kSplitsDir[] = "splits";

std::vector<split::SplitManifest> ReadSplitDir(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      // Names starting with '_' are stage bookkeeping.
      if (entry.is_regular_file() && entry.path().extension() == ".json" &&
          entry.path().filename().string().front() != '_') {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<split::SplitManifest> out;
  for (const fs::path& file : files) {
    out.push_back(split::SplitManifestFromJson(ReadJsonFile(file)));
  }
  return out;
}

// Hash of every regular file directly inside `dir`, by name.
Json TopLevelFileHashes(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kNotFound, "data root '" + dir.string() +
                                          "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Json out = Json::array();
  for (const fs::path& file : files) {
    out.push_back({{"name", file.filename().string()},
                   {"sha256", Sha256File(file)}});
  }
  return out;
}

Json SeverityList(const std::vector<corruption::Severity>& severities) {
  Json out = Json::array();
  for (corruption::Severity s : severities) {
    out.push_back(std::string(corruption::SeverityName(s)));
  }
  return out;
}

std::string CorruptShiftName(const std::string& base,
                             corruption::Severity severity) {
  return base + "_corruption_" + std::string(corruption::SeverityName(severity));
}

struct RunId {
  std::string model_id;
  std::optional<int> seed;
  bool operator<(const RunId& o) const {
    return std::tie(model_id, seed) < std::tie(o.model_id, o.seed);
  }
};

std::string RunLabel(const RunId& run) {
  return run.model_id + (run.seed ? "@" + std::to_string(*run.seed) : "");
}

}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kIngest:
      return "ingest";
    case Stage::kSplit:
      return "split";
    case Stage::kCorrupt:
      return "corrupt";
    case Stage::kBaseline:
      return "baseline";
    case Stage::kEvaluate:
      return "evaluate";
    case Stage::kRobustness:
      return "robustness";
    case Stage::kReport:
      return "report";
  }
  return "unknown";
}

const std::vector<Stage>& AllStages() {
  static const std::vector<Stage> kStages = {
      Stage::kIngest,   Stage::kSplit,      Stage::kCorrupt, Stage::kBaseline,
      Stage::kEvaluate, Stage::kRobustness, Stage::kReport};
  return kStages;
}

Stage ParseStage(std::string_view name) {
  for (Stage stage : AllStages()) {
    if (StageName(stage) == name) return stage;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown stage '" + std::string(name) + "'");
}

int StageVersion(Stage) { return 1; }

const StageRecord* RunResult::Find(Stage stage) const {
  for (const StageRecord& record : stages) {
    if (record.stage == stage) return &record;
  }
  return nullptr;
}

void IngestStage(dataset::Adapter adapter, const fs::path& root,
                 const fs::path& out_dir) {
  const dataset::DatasetManifest manifest = dataset::LoadDataset(adapter, root);
  dataset::WriteManifestDir(manifest, out_dir);
}

void SplitStage(const dataset::DatasetManifest& manifest,
                const std::vector<split::ShiftSpec>& shifts,
                const fs::path& out_dir) {
  fs::create_directories(out_dir);
  for (const split::ShiftSpec& spec : shifts) {
    const split::SplitManifest result = split::BuildSplit(manifest, spec);
    WriteJsonFile(out_dir / (spec.name + ".json"),
                  split::SplitManifestToJson(result));
    WriteJsonFile(out_dir / "specs" / (spec.name + ".json"),
                  split::ShiftSpecToJson(spec));
  }
}

void CorruptStage(const dataset::DatasetManifest& manifest,
                  const split::SplitManifest& base,
                  const fs::path& image_root,
                  const std::vector<corruption::Severity>& severities,
                  uint64_t seed, int parallelism, const fs::path& out_dir) {
  std::vector<dataset::VqaSample> sources;
  const auto index = manifest.IndexById();
  for (const std::string& id : base.test_iid) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw Error(ErrorCode::kNotFound, "split sample '" + id + "' not in manifest");
    }
    sources.push_back(manifest.samples[it->second]);
  }
  dataset::DatasetManifest combined;
  combined.dataset = manifest.dataset;
  std::vector<Json> log;
  std::vector<Json> errors;
  for (corruption::Severity severity : severities) {
    const corruption::CorruptionConfig config = corruption::ConfigForSeverity(
        severity, DeriveSeed(seed, corruption::SeverityName(severity)));
    corruption::CorruptionBatch batch = corruption::BuildCorruptionOod(
        sources, image_root, out_dir, config, parallelism);
    split::SplitManifest shift;
    shift.shift_name = CorruptShiftName(base.shift_name, severity);
    shift.category = split::ShiftCategory::kCorruption;
    shift.train_iid = base.train_iid;
    shift.validate = base.validate;
    shift.test_iid = base.test_iid;
    for (const dataset::VqaSample& s : batch.manifest.samples) {
      shift.test_ood.push_back(s.sample_id);
      combined.base_split[s.sample_id] = dataset::BaseSplit::kTest;
      combined.samples.push_back(s);
    }
    combined.load_report.raw += batch.manifest.load_report.raw;
    combined.load_report.loaded += batch.manifest.load_report.loaded;
    for (const dataset::DroppedRecord& drop : batch.manifest.load_report.drops) {
      combined.load_report.Drop(drop);
    }
    WriteJsonFile(out_dir / kSplitsDir / (shift.shift_name + ".json"),
                  split::SplitManifestToJson(shift));
    log.insert(log.end(), batch.log.begin(), batch.log.end());
    errors.insert(errors.end(), batch.errors.begin(), batch.errors.end());
  }
  dataset::WriteManifestDir(combined, out_dir / kManifestDir);
  WriteFileAtomic(out_dir / "corruption_log.jsonl", DumpJsonl(log));
  WriteFileAtomic(out_dir / "errors.jsonl", DumpJsonl(errors));
}

void BaselineStage(const dataset::DatasetManifest& manifest,
                   const std::vector<split::SplitManifest>& splits,
                   bool most_frequent, bool random, uint64_t seed,
                   const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto index = manifest.IndexById();
  auto collect = [&](const std::vector<std::string>& ids) {
    std::vector<dataset::VqaSample> out;
    for (const std::string& id : ids) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw Error(ErrorCode::kNotFound,
                    "split sample '" + id + "' not in manifest");
      }
      out.push_back(manifest.samples[it->second]);
    }
    return out;
  };
  Json coverage = Json::array();
  for (const split::SplitManifest& s : splits) {
    const fs::path dir = out_dir / s.shift_name;
    fs::create_directories(dir);
    std::vector<dataset::VqaSample> test = collect(s.test_iid);
    const std::vector<dataset::VqaSample> ood = collect(s.test_ood);
    test.insert(test.end(), ood.begin(), ood.end());
    if (most_frequent) {
      const baselines::FrequencyTable table =
          baselines::BuildFrequencyTable(collect(s.train_iid));
      const baselines::MostFrequentResult result =
          baselines::MostFrequentPredictions(table, test);
      metrics::WritePredictions(dir / "most_frequent.jsonl", result.predictions);
      WriteJsonFile(dir / "frequency_table.json",
                    baselines::FrequencyTableToJson(table));
      coverage.push_back(
          {{"dataset", std::string(dataset::DatasetName(manifest.dataset))},
           {"shift", s.shift_name},
           {"matched", result.matched},
           {"total", result.total},
           {"coverage", result.coverage}});
    }
    if (random) {
      metrics::WritePredictions(
          dir / "random.jsonl",
          baselines::RandomPredictions(test, DeriveSeed(seed, s.shift_name)));
    }
  }
  WriteJsonFile(out_dir / "coverage.json", coverage);
}

dataset::DatasetManifest MergeManifests(
    const dataset::DatasetManifest& base,
    const std::vector<dataset::DatasetManifest>& extra) {
  dataset::DatasetManifest out = base;
  std::set<std::string> ids;
  for (const dataset::VqaSample& s : out.samples) ids.insert(s.sample_id);
  for (const dataset::DatasetManifest& m : extra) {
    for (const dataset::VqaSample& s : m.samples) {
      if (!ids.insert(s.sample_id).second) {
        throw Error(ErrorCode::kConflict,
                    "sample '" + s.sample_id + "' defined twice");
      }
      out.samples.push_back(s);
      auto it = m.base_split.find(s.sample_id);
      if (it != m.base_split.end()) out.base_split[s.sample_id] = it->second;
    }
  }
  return out;
}

void EvaluateStage(const EvaluationInput& input,
                   const metrics::JudgeConfig& judge,
                   metrics::JudgeClient& client, const fs::path& out_dir) {
  const dataset::DatasetManifest& manifest = *input.manifest;
  const auto index = manifest.IndexById();
  const std::string dataset_name(dataset::DatasetName(manifest.dataset));

  // shift -> prediction records (external files first, then baselines).
  std::map<std::string, std::vector<metrics::PredictionRecord>> by_shift;
  for (const auto& [path, shift] : input.predictions) {
    std::vector<metrics::PredictionRecord> records =
        metrics::ReadPredictions(path);
    auto& dest = by_shift[shift];
    dest.insert(dest.end(), records.begin(), records.end());
  }
  if (input.baseline_dir) {
    for (const split::SplitManifest& s : input.splits) {
      for (const char* name : {"most_frequent.jsonl", "random.jsonl"}) {
        const fs::path path = *input.baseline_dir / s.shift_name / name;
        if (!fs::exists(path)) continue;
        std::vector<metrics::PredictionRecord> records =
            metrics::ReadPredictions(path);
        auto& dest = by_shift[s.shift_name];
        dest.insert(dest.end(), records.begin(), records.end());
      }
    }
  }

  std::vector<metrics::JudgeItem> items;
  Json coverage = Json::array();
  for (const split::SplitManifest& s : input.splits) {
    std::map<RunId, std::map<std::string, const metrics::PredictionRecord*>>
        runs;
    for (const metrics::PredictionRecord& p : by_shift[s.shift_name]) {
      auto& run = runs[{p.model_id, p.seed}];
      if (!run.emplace(p.sample_id, &p).second) {
        throw Error(ErrorCode::kConflict,
                    "duplicate prediction for '" + p.sample_id + "' by " +
                        RunLabel({p.model_id, p.seed}) + " on shift " +
                        s.shift_name);
      }
    }
    for (const auto& [run_id, predictions] : runs) {
      size_t used = 0;
      for (const auto& [split_name, ids] :
           {std::pair{"test_iid", &s.test_iid},
            std::pair{"test_ood", &s.test_ood}}) {
        size_t missing = 0;
        for (const std::string& id : *ids) {
          auto p = predictions.find(id);
          if (p == predictions.end()) {
            ++missing;
            continue;
          }
          ++used;
          auto sample = index.find(id);
          if (sample == index.end()) {
            throw Error(ErrorCode::kNotFound,
                        "split sample '" + id + "' not in manifest");
          }
          metrics::JudgeItem item;
          item.sample = &manifest.samples[sample->second];
          item.prediction = *p->second;
          item.context.dataset = dataset_name;
          item.context.shift = s.shift_name;
          item.context.split = split_name;
          item.context.model_id = p->second->model_id;
          item.context.method = p->second->method;
          item.context.base_model = p->second->base_model;
          item.context.uses_image = p->second->uses_image;
          item.context.seed = p->second->seed;
          items.push_back(std::move(item));
        }
        coverage.push_back({{"shift", s.shift_name},
                            {"run", RunLabel(run_id)},
                            {"split", split_name},
                            {"expected", ids->size()},
                            {"missing", missing}});
      }
      coverage.push_back({{"shift", s.shift_name},
                          {"run", RunLabel(run_id)},
                          {"split", "unused"},
                          {"expected", 0},
                          {"missing", predictions.size() - used}});
    }
  }

  std::vector<metrics::ScoreRecord> scores =
      metrics::EvaluateBatch(items, judge, client);
  std::stable_sort(scores.begin(), scores.end(),
                   [](const metrics::ScoreRecord& a,
                      const metrics::ScoreRecord& b) {
                     return std::tie(a.context.shift, a.context.split,
                                     a.context.model_id, a.context.seed,
                                     a.sample_id) <
                            std::tie(b.context.shift, b.context.split,
                                     b.context.model_id, b.context.seed,
                                     b.sample_id);
                   });
  fs::create_directories(out_dir);
  metrics::WriteScores(out_dir / "scores.jsonl", scores);
  const std::vector<std::string> keys = {"dataset",    "shift", "split",
                                         "model_id",   "method", "base_model",
                                         "uses_image"};
  const std::vector<metrics::MetricSummary> summaries =
      metrics::Aggregate(scores, keys);
  WriteFileAtomic(out_dir / "summary.csv",
                  metrics::SummariesToCsv(summaries, keys));
  WriteJsonFile(out_dir / "summary.json", metrics::SummariesToJson(summaries));
  WriteJsonFile(out_dir / "coverage.json", coverage);
}

void RobustnessStage(const fs::path& scores_path,
                     const std::optional<fs::path>& coverage_path,
                     const AnalysisOptions& options, const fs::path& out_dir) {
  const std::vector<metrics::ScoreRecord> scores =
      metrics::ReadScores(scores_path);
  const Json coverage =
      coverage_path ? ReadJsonFile(*coverage_path) : Json::array();
  WriteJsonFile(out_dir / "robustness.json",
                BuildRobustnessDocument(scores, coverage, options));
}

void ReportStage(const fs::path& robustness_path, double coverage_floor,
                 const fs::path& out_dir) {
  WriteReportFiles(RenderReport(ReadJsonFile(robustness_path), coverage_floor),
                   out_dir);
}

std::unique_ptr<metrics::JudgeClient> DefaultJudgeClient(
    const metrics::JudgeConfig& config) {
  if (config.mode == "http") {
    return std::make_unique<metrics::HttpJudgeClient>(config);
  }
  return std::make_unique<metrics::MockJudgeClient>();
}

namespace {

class Runner {
 public:
  Runner(const PipelineConfig& config, const JudgeClientFactory& factory)
      : config_(config), factory_(factory) {}

  RunResult Run(std::optional<Stage> last) {
    fs::create_directories(config_.run_root);
    const std::string ingest = Do(Stage::kIngest, IngestKey(), [&](const fs::path& dir) {
      IngestStage(config_.adapter, config_.data_root, dir);
    });
    if (Done(last, Stage::kIngest)) return Finish();
    manifest_ = dataset::ReadManifestDir(Dir(Stage::kIngest));

    Json split_specs = Json::array();
    for (const split::ShiftSpec& spec : config_.shifts) {
      split_specs.push_back(split::ShiftSpecToJson(spec));
    }
    const std::string split_hash =
        Do(Stage::kSplit, Json{{"ingest", ingest}, {"shifts", split_specs}},
           [&](const fs::path& dir) {
             SplitStage(manifest_, config_.shifts, dir);
           });
    if (Done(last, Stage::kSplit)) return Finish();
    splits_ = ReadSplitDir(Dir(Stage::kSplit));

    std::string corrupt_hash;
    if (config_.corrupt_enabled) {
      const split::SplitManifest& base = FindSplit(config_.corrupt_base_shift);
      Json images = Json::array();
      for (const std::string& id : base.test_iid) {
        const dataset::VqaSample* s = manifest_.Find(id);
        if (s == nullptr) {
          throw Error(ErrorCode::kNotFound,
                      "corrupt: split sample '" + id + "' not in manifest");
        }
        images.push_back(Sha256File(config_.data_root / s->image_ref));
      }
      corrupt_hash = Do(Stage::kCorrupt,
                        Json{{"split", split_hash},
                             {"base_shift", base.shift_name},
                             {"severities", SeverityList(config_.severities)},
                             {"seed", config_.corrupt_seed},
                             {"images", images}},
                        [&](const fs::path& dir) {
                          CorruptStage(manifest_, base, config_.data_root,
                                       config_.severities, config_.corrupt_seed,
                                       config_.parallelism, dir);
                        });
      const fs::path dir = Dir(Stage::kCorrupt);
      manifest_ = MergeManifests(
          manifest_, {dataset::ReadManifestDir(dir / kManifestDir)});
      for (split::SplitManifest& s : ReadSplitDir(dir / kSplitsDir)) {
        splits_.push_back(std::move(s));
      }
    }
    if (Done(last, Stage::kCorrupt)) return Finish();

    const std::string baseline_hash =
        Do(Stage::kBaseline,
           Json{{"split", split_hash},
                {"corrupt", corrupt_hash},
                {"most_frequent", config_.most_frequent},
                {"random", config_.random_baseline},
                {"seed", config_.baseline_seed}},
           [&](const fs::path& dir) {
             BaselineStage(manifest_, splits_, config_.most_frequent,
                           config_.random_baseline, config_.baseline_seed,
                           dir);
           });
    if (Done(last, Stage::kBaseline)) return Finish();

    Json predictions = Json::array();
    for (const PredictionSource& p : config_.predictions) {
      predictions.push_back(
          {{"shift", p.shift}, {"sha256", Sha256File(p.path)}});
    }
    const metrics::JudgeConfig& j = config_.judge;
    const Json judge{{"mode", j.mode},
                     {"endpoint", j.mode == "http" ? j.endpoint : ""},
                     {"model_name", j.model_name},
                     {"api_style", j.api_style},
                     {"temperature", j.temperature},
                     {"max_tokens", j.max_tokens},
                     {"max_attempts", j.max_attempts},
                     {"parser", std::string(metrics::ParserName(j.parser))}};
    const std::string evaluate_hash =
        Do(Stage::kEvaluate,
           Json{{"split", split_hash},
                {"corrupt", corrupt_hash},
                {"baseline", baseline_hash},
                {"predictions", predictions},
                {"judge", judge}},
           [&](const fs::path& dir) {
             EvaluationInput input;
             input.manifest = &manifest_;
             input.splits = splits_;
             for (const PredictionSource& p : config_.predictions) {
               input.predictions.emplace_back(p.path, p.shift);
             }
             input.baseline_dir = Dir(Stage::kBaseline);
             std::unique_ptr<metrics::JudgeClient> client =
                 factory_(config_.judge);
             EvaluateStage(input, config_.judge, *client, dir);
           });
    if (Done(last, Stage::kEvaluate)) return Finish();

    AnalysisOptions options;
    options.bootstrap_resamples = config_.bootstrap_resamples;
    options.bootstrap_seed = config_.bootstrap_seed;
    options.alpha = config_.alpha;
    options.correction = config_.correction;
    const std::string robustness_hash =
        Do(Stage::kRobustness,
           Json{{"evaluate", evaluate_hash},
                {"baseline", baseline_hash},
                {"bootstrap_resamples", options.bootstrap_resamples},
                {"seed", options.bootstrap_seed},
                {"alpha", options.alpha},
                {"correction",
                 std::string(stats::CorrectionName(options.correction))}},
           [&](const fs::path& dir) {
             RobustnessStage(Dir(Stage::kEvaluate) / "scores.jsonl",
                             Dir(Stage::kBaseline) / "coverage.json", options,
                             dir);
           });
    if (Done(last, Stage::kRobustness)) return Finish();

    Do(Stage::kReport,
       Json{{"robustness", robustness_hash},
            {"coverage_floor", config_.coverage_floor}},
       [&](const fs::path& dir) {
         ReportStage(Dir(Stage::kRobustness) / "robustness.json",
                     config_.coverage_floor, dir);
       });
    return Finish();
  }

 private:
  // Hashing reads the data root, so its errors carry the stage name too.
  Json IngestKey() const {
    try {
      return Json{
          {"adapter", std::string(dataset::AdapterName(config_.adapter))},
          {"files", TopLevelFileHashes(config_.data_root)}};
    } catch (const Error& e) {
      throw Error(e.code(), std::string(StageName(Stage::kIngest)) + ": " +
                                e.message());
    }
  }

  static bool Done(std::optional<Stage> last, Stage stage) {
    return last && *last == stage;
  }

  const split::SplitManifest& FindSplit(const std::string& name) const {
    for (const split::SplitManifest& s : splits_) {
      if (s.shift_name == name) return s;
    }
    throw Error(ErrorCode::kNotFound, "no split named '" + name + "'");
  }

  fs::path Dir(Stage stage) const {
    for (const StageRecord& r : result_.stages) {
      if (r.stage == stage) return r.dir;
    }
    throw Error(ErrorCode::kNotFound,
                "stage " + std::string(StageName(stage)) + " has not run");
  }

  template <typename Body>
  std::string Do(Stage stage, Json key, Body&& body) {
    const std::string name(StageName(stage));
    key["stage"] = name;
    key["version"] = StageVersion(stage);
    const std::string hash = Sha256Hex(key.dump());
    StageRecord record{stage, hash,
                       config_.run_root / (name + "-" + hash.substr(0, 12)),
                       false};
    if (fs::exists(record.dir / kCompleteMarker)) {
      record.reused = true;
    } else {
      try {
        if (fs::exists(record.dir)) fs::remove_all(record.dir);
        fs::create_directories(record.dir);
        WriteJsonFile(record.dir / "_inputs.json", key);
        body(record.dir);
        WriteFileAtomic(record.dir / kCompleteMarker, hash + "\n");
      } catch (const Error& e) {
        throw Error(e.code(), name + ": " + e.message());
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kIo, name + ": " + e.what());
      }
    }
    result_.stages.push_back(record);
    return hash;
  }

  RunResult Finish() {
    Json stages = Json::array();
    for (const StageRecord& r : result_.stages) {
      stages.push_back({{"stage", std::string(StageName(r.stage))},
                        {"version", StageVersion(r.stage)},
                        {"sha256", r.hash},
                        {"dir", r.dir.filename().string()}});
    }
    const Json manifest{
        {"config_sha256", Sha256Hex(config_.document.dump())},
        {"stages", stages}};
    result_.manifest_path = config_.run_root / "run_manifest.json";
    WriteJsonFile(result_.manifest_path, manifest);
    return result_;
  }

  const PipelineConfig& config_;
  const JudgeClientFactory& factory_;
  RunResult result_;
  dataset::DatasetManifest manifest_;
  std::vector<split::SplitManifest> splits_;
};

}  // namespace

RunResult RunPipeline(const PipelineConfig& config, std::optional<Stage> last,
                      const JudgeClientFactory& judge_factory) {
  return Runner(config, judge_factory).Run(last);
}

}  // namespace vqaeval::pipeline
