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

#include "vqaeval/dataset/manifest.h"

#include "vqaeval/common/error.h"

namespace vqaeval::dataset {
namespace fs = std::filesystem;

void LoadReport::Drop(DroppedRecord record) {
  ++dropped;
  ++drop_reasons[record.reason];
  drops.push_back(std::move(record));
}

const VqaSample* DatasetManifest::Find(const std::string& sample_id) const {
  for (const VqaSample& sample : samples) {
    if (sample.sample_id == sample_id) return &sample;
  }
  return nullptr;
}

std::unordered_map<std::string, size_t> DatasetManifest::IndexById() const {
  std::unordered_map<std::string, size_t> index;
  index.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    index.emplace(samples[i].sample_id, i);
  }
  return index;
}

Json LoadReportToJson(const LoadReport& report) {
  Json reasons = Json::object();
  for (const auto& [reason, count] : report.drop_reasons) {
    reasons[reason] = count;
  }
  Json drops = Json::array();
  for (const DroppedRecord& drop : report.drops) {
    drops.push_back({{"source", drop.source},
                     {"record_index", drop.record_index},
                     {"sample_id", drop.sample_id},
                     {"reason", drop.reason},
                     {"detail", drop.detail}});
  }
  return Json{{"raw", report.raw},
              {"loaded", report.loaded},
              {"dropped", report.dropped},
              {"drop_reasons", reasons},
              {"drops", drops}};
}

namespace {

LoadReport LoadReportFromJson(const Json& value) {
  LoadReport report;
  report.raw = value.at("raw").get<size_t>();
  report.loaded = value.at("loaded").get<size_t>();
  report.dropped = value.at("dropped").get<size_t>();
  for (const auto& [reason, count] : value.at("drop_reasons").items()) {
    report.drop_reasons[reason] = count.get<size_t>();
  }
  for (const Json& drop : value.at("drops")) {
    report.drops.push_back({drop.at("source").get<std::string>(),
                            drop.at("record_index").get<size_t>(),
                            drop.at("sample_id").get<std::string>(),
                            drop.at("reason").get<std::string>(),
                            drop.at("detail").get<std::string>()});
  }
  return report;
}

}  // namespace

void WriteNativeSamples(const DatasetManifest& manifest, const fs::path& dir) {
  std::map<BaseSplit, std::vector<Json>> by_split;
  for (BaseSplit split :
       {BaseSplit::kTrain, BaseSplit::kValidate, BaseSplit::kTest}) {
    by_split[split];
  }
  for (const VqaSample& sample : manifest.samples) {
    by_split[manifest.base_split.at(sample.sample_id)].push_back(
        SampleToJson(sample));
  }
  for (const auto& [split, lines] : by_split) {
    WriteFileAtomic(dir / (std::string(BaseSplitName(split)) + ".jsonl"),
                    DumpJsonl(lines));
  }
}

void WriteManifestDir(const DatasetManifest& manifest, const fs::path& dir) {
  std::vector<Json> lines;
  Json splits = Json::object();
  for (const VqaSample& sample : manifest.samples) {
    lines.push_back(SampleToJson(sample));
    splits[sample.sample_id] =
        BaseSplitName(manifest.base_split.at(sample.sample_id));
  }
  WriteFileAtomic(dir / "samples.jsonl", DumpJsonl(lines));
  WriteJsonFile(dir / "base_split.json", splits);
  Json report = LoadReportToJson(manifest.load_report);
  report["dataset"] = DatasetName(manifest.dataset);
  report["source_paths"] = manifest.source_paths;
  WriteJsonFile(dir / "load_report.json", report);
}

DatasetManifest ReadManifestDir(const fs::path& dir) {
  DatasetManifest manifest;
  const Json report = ReadJsonFile(dir / "load_report.json");
  manifest.dataset = ParseDatasetId(report.at("dataset").get<std::string>());
  manifest.source_paths =
      report.at("source_paths").get<std::vector<std::string>>();
  manifest.load_report = LoadReportFromJson(report);
  for (const JsonlLine& line : ReadJsonl(dir / "samples.jsonl")) {
    if (!line.error.empty()) {
      throw Error(ErrorCode::kParse, (dir / "samples.jsonl").string() + ":" +
                                         std::to_string(line.line_number) +
                                         ": " + line.error);
    }
    manifest.samples.push_back(SampleFromJson(line.value));
  }
  const Json splits = ReadJsonFile(dir / "base_split.json");
  for (const auto& [id, split] : splits.items()) {
    manifest.base_split[id] = ParseBaseSplit(split.get<std::string>());
  }
  return manifest;
}

}  // namespace vqaeval::dataset
